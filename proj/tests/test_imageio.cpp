#include <png.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "lpr/image.hpp"
#include "lpr/image_io.hpp"

using namespace lpr;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lpr-io-tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string temp_file(const std::string& name) {
  return (temp_dir() / name).string();
}

void write_bytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

// Minimal libpng encoder used only to produce fixtures for the reader.
void write_png_rgb(const std::string& path, const ColorImage& img) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  REQUIRE(fp != nullptr);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  REQUIRE(setjmp(png_jmpbuf(png)) == 0);
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
               static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(static_cast<std::size_t>(img.width()) * 3);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const Rgb& p = img.at(r, c);
      row[static_cast<std::size_t>(c) * 3 + 0] = p.r;
      row[static_cast<std::size_t>(c) * 3 + 1] = p.g;
      row[static_cast<std::size_t>(c) * 3 + 2] = p.b;
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

void write_png_gray(const std::string& path, const std::vector<png_byte>& gray,
                    int width, int height) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  REQUIRE(fp != nullptr);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  REQUIRE(setjmp(png_jmpbuf(png)) == 0);
  png_init_io(png, fp);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int r = 0; r < height; ++r) {
    png_write_row(png, const_cast<png_bytep>(
                           gray.data() + static_cast<std::size_t>(r) * width));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

ColorImage random_color(std::mt19937_64& rng, int width, int height) {
  ColorImage img(width, height);
  for (Rgb& p : img.pixels()) {
    p.r = static_cast<std::uint8_t>(rng() % 256);
    p.g = static_cast<std::uint8_t>(rng() % 256);
    p.b = static_cast<std::uint8_t>(rng() % 256);
  }
  return img;
}

}  // namespace

TEST_CASE("ppm round trip preserves every pixel") {
  std::mt19937_64 rng(101);
  ColorImage img = random_color(rng, 13, 9);
  const std::string path = temp_file("roundtrip.ppm");
  write_ppm(path, img);
  ImageFile loaded = load_image(path);
  REQUIRE(loaded.is_color);
  REQUIRE(loaded.color.width() == 13);
  REQUIRE(loaded.color.height() == 9);
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(loaded.color.pixels()[i] == img.pixels()[i]);
  }
}

TEST_CASE("pgm round trip quantizes to 255 levels") {
  GrayImage img(5, 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 5; ++c) {
      img.at(r, c) = (r * 5 + c) / 14.0;
    }
  }
  const std::string path = temp_file("roundtrip.pgm");
  write_pgm(path, img);
  ImageFile loaded = load_image(path);
  REQUIRE(!loaded.is_color);
  REQUIRE(loaded.color.width() == 5);
  REQUIRE(loaded.color.height() == 3);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 5; ++c) {
      const Rgb& p = loaded.color.at(r, c);
      CHECK(p.r == p.g);
      CHECK(p.g == p.b);
      const double back = p.r / 255.0;
      CHECK(back == doctest::Approx(img.at(r, c)).epsilon(1.0 / 255.0));
    }
  }
}

TEST_CASE("binary pgm writes zeros and 255s") {
  BinaryImage img(3, 2);
  img.at(0, 0) = 1;
  img.at(1, 2) = 1;
  const std::string path = temp_file("binary.pgm");
  write_pgm(path, img);
  ImageFile loaded = load_image(path);
  CHECK(loaded.color.at(0, 0).r == 255);
  CHECK(loaded.color.at(0, 1).r == 0);
  CHECK(loaded.color.at(1, 2).r == 255);
}

TEST_CASE("pnm header comments are skipped") {
  const std::string path = temp_file("comment.pgm");
  write_bytes(path, "P5 # a comment\n# another\n2 1\n255\n\x10\x20");
  ImageFile loaded = load_image(path);
  REQUIRE(loaded.color.width() == 2);
  REQUIRE(loaded.color.height() == 1);
  CHECK(loaded.color.at(0, 0).r == 0x10);
  CHECK(loaded.color.at(0, 1).r == 0x20);
}

TEST_CASE("malformed pnm files are rejected") {
  auto expect_reject = [](const std::string& name, const std::string& bytes) {
    const std::string path = temp_file(name);
    write_bytes(path, bytes);
    CHECK_THROWS_AS(load_image(path), IoError);
  };
  expect_reject("badmagic.pnm", "P4\n2 2\n255\n\0\0\0\0");
  expect_reject("maxval.pgm", "P5\n2 1\n65535\n\0\0");
  expect_reject("truncated.pgm", "P5\n4 4\n255\nabc");
  expect_reject("zerodim.pgm", "P5\n0 2\n255\n");
  expect_reject("alpha.pgm", "P5\ntwo 2\n255\n\0\0");
  CHECK_THROWS_AS(load_image(temp_file("missing-file.pgm")), IoError);
}

TEST_CASE("png rgb files load with every pixel intact") {
  std::mt19937_64 rng(202);
  ColorImage img = random_color(rng, 17, 11);
  const std::string path = temp_file("color.png");
  write_png_rgb(path, img);
  ImageFile loaded = load_image(path);
  REQUIRE(loaded.is_color);
  REQUIRE(loaded.color.width() == 17);
  REQUIRE(loaded.color.height() == 11);
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(loaded.color.pixels()[i] == img.pixels()[i]);
  }
}

TEST_CASE("png grayscale files load as non-color") {
  const int w = 6;
  const int h = 4;
  std::vector<png_byte> gray(static_cast<std::size_t>(w) * h);
  for (std::size_t i = 0; i < gray.size(); ++i) {
    gray[i] = static_cast<png_byte>(i * 10);
  }
  const std::string path = temp_file("gray.png");
  write_png_gray(path, gray, w, h);
  ImageFile loaded = load_image(path);
  REQUIRE(!loaded.is_color);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const Rgb& p = loaded.color.at(r, c);
      png_byte expect = gray[static_cast<std::size_t>(r) * w + c];
      CHECK(p.r == expect);
      CHECK(p.g == expect);
      CHECK(p.b == expect);
    }
  }
}

TEST_CASE("corrupt png is rejected") {
  const std::string path = temp_file("corrupt.png");
  write_bytes(path, std::string("\x89PNG\r\n\x1a\n") + "garbage body here");
  CHECK_THROWS_AS(load_image(path), IoError);
}

TEST_CASE("unknown magic bytes are rejected") {
  const std::string path = temp_file("unknown.bin");
  write_bytes(path, "BM some bitmap-ish bytes");
  CHECK_THROWS_AS(load_image(path), IoError);
}
