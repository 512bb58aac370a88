#include "lpr/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace lpr {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw IoError(path + ": " + msg);
}

// Reads one PNM header token, skipping whitespace and '#' comments.
std::string pnm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (!std::isspace(ch)) {
      tok.push_back(static_cast<char>(ch));
      break;
    }
  }
  while ((ch = in.get()) != EOF) {
    if (std::isspace(ch)) break;  // single whitespace terminates the token
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

int pnm_int(std::istream& in, const std::string& path, const char* what) {
  const std::string tok = pnm_token(in);
  if (tok.empty()) fail(path, std::string("truncated header, missing ") + what);
  int value = 0;
  for (char c : tok) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      fail(path, std::string("invalid ") + what + " '" + tok + "'");
    value = value * 10 + (c - '0');
    if (value > 1 << 24) fail(path, std::string(what) + " out of range");
  }
  return value;
}

ImageFile load_pnm(const std::string& path, bool color) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  in.get();
  in.get();  // magic, already sniffed

  const int width = pnm_int(in, path, "width");
  const int height = pnm_int(in, path, "height");
  const int maxval = pnm_int(in, path, "maxval");
  if (width < 1 || height < 1) fail(path, "dimensions must be >= 1");
  if (maxval != 255) fail(path, "unsupported maxval (only 255)");

  const std::size_t n = static_cast<std::size_t>(width) * height;
  const std::size_t bytes = color ? n * 3 : n;
  std::vector<std::uint8_t> raw(bytes);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) fail(path, "truncated raster");

  ImageFile out;
  out.is_color = color;
  out.color = ColorImage(width, height);
  for (std::size_t i = 0; i < n; ++i) {
    if (color) {
      out.color.pixels()[i] = Rgb{raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]};
    } else {
      out.color.pixels()[i] = Rgb{raw[i], raw[i], raw[i]};
    }
  }
  return out;
}

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;

  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

ImageFile load_png(const std::string& path) {
  PngReader rd;
  rd.fp = std::fopen(path.c_str(), "rb");
  if (!rd.fp) fail(path, "cannot open file");

  rd.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!rd.png) fail(path, "png init failed");
  rd.info = png_create_info_struct(rd.png);
  if (!rd.info) fail(path, "png init failed");
  if (setjmp(png_jmpbuf(rd.png))) fail(path, "corrupt PNG stream");

  png_init_io(rd.png, rd.fp);
  png_read_info(rd.png, rd.info);

  const png_uint_32 width = png_get_image_width(rd.png, rd.info);
  const png_uint_32 height = png_get_image_height(rd.png, rd.info);
  const int color_type = png_get_color_type(rd.png, rd.info);
  const int bit_depth = png_get_bit_depth(rd.png, rd.info);
  if (width < 1 || height < 1) fail(path, "dimensions must be >= 1");

  // Normalize every variant to 8-bit RGB.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(rd.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(rd.png);
  if (png_get_valid(rd.png, rd.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(rd.png);
  if (bit_depth == 16) png_set_strip_16(rd.png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(rd.png);
  png_set_strip_alpha(rd.png);
  png_read_update_info(rd.png, rd.info);

  std::vector<std::uint8_t> raster(static_cast<std::size_t>(width) * height * 3);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; ++r) {
    rows[r] = raster.data() + static_cast<std::size_t>(r) * width * 3;
  }
  png_read_image(rd.png, rows.data());
  png_read_end(rd.png, nullptr);

  ImageFile out;
  out.is_color = (color_type & PNG_COLOR_MASK_COLOR) != 0;
  out.color = ColorImage(static_cast<int>(width), static_cast<int>(height));
  for (std::size_t i = 0; i < out.color.size(); ++i) {
    out.color.pixels()[i] = Rgb{raster[3 * i], raster[3 * i + 1], raster[3 * i + 2]};
  }
  return out;
}

}  // namespace

ImageFile load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  unsigned char magic[8] = {};
  in.read(reinterpret_cast<char*>(magic), sizeof(magic));
  const auto got = in.gcount();
  in.close();

  static const unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (got >= 8 && std::memcmp(magic, png_sig, 8) == 0) return load_png(path);
  if (got >= 2 && magic[0] == 'P' && magic[1] == '5') return load_pnm(path, false);
  if (got >= 2 && magic[0] == 'P' && magic[1] == '6') return load_pnm(path, true);
  fail(path, "unsupported image format (expect PNG, P5 PGM, or P6 PPM)");
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(path, "cannot open file for writing");
  return out;
}

}  // namespace

void write_pgm(const std::string& path, const GrayImage& img) {
  if (img.empty()) fail(path, "refusing to write empty image");
  auto out = open_out(path);
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<std::uint8_t> row(img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const double v = img.at(r, c);
      row[c] = static_cast<std::uint8_t>(
          std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) fail(path, "write failed");
}

void write_pgm(const std::string& path, const BinaryImage& img) {
  if (img.empty()) fail(path, "refusing to write empty image");
  auto out = open_out(path);
  out << "P5\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<std::uint8_t> row(img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) row[c] = img.at(r, c) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) fail(path, "write failed");
}

void write_ppm(const std::string& path, const ColorImage& img) {
  if (img.empty()) fail(path, "refusing to write empty image");
  auto out = open_out(path);
  out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width()) * 3);
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      const Rgb& p = img.at(r, c);
      row[3 * c] = p.r;
      row[3 * c + 1] = p.g;
      row[3 * c + 2] = p.b;
    }
    out.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!out) fail(path, "write failed");
}

}  // namespace lpr
