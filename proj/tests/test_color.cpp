#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "lpr/image.hpp"
#include "lpr/plate_color.hpp"

using namespace lpr;

namespace {

ColorImage solid_hsv(int width, int height, double h, double s, double v) {
  const Rgb px = hsv_to_rgb({h, s, v});
  return ColorImage(width, height, px);
}

void paint_hsv(ColorImage& img, int row0, int col0, int rows, int cols,
               double h, double s, double v) {
  const Rgb px = hsv_to_rgb({h, s, v});
  for (int row = row0; row < row0 + rows; ++row) {
    for (int col = col0; col < col0 + cols; ++col) {
      img.at(row, col) = px;
    }
  }
}

bool in_red(const ColorBands& bands, double h, double s, double v) {
  return s >= bands.chroma_s_min && v >= bands.chroma_v_min &&
         h >= bands.red_h_lo && h <= bands.red_h_hi;
}

bool in_yellow(const ColorBands& bands, double h, double s, double v) {
  return s >= bands.chroma_s_min && v >= bands.chroma_v_min &&
         h >= bands.yellow_h_lo && h <= bands.yellow_h_hi;
}

bool in_white(const ColorBands& bands, double s, double v) {
  return s <= bands.white_s_max && v >= bands.white_v_min;
}

}  // namespace

TEST_CASE("solid plates land in their bands") {
  // Values chosen well inside each band so 8-bit quantization cannot move
  // them across a boundary.
  PlateType red = classify_plate_color(solid_hsv(40, 12, 0.87, 0.55, 0.65));
  CHECK(red.kind == PlateKind::Red);
  CHECK(red.red_count == 40 * 12);
  CHECK(red.yellow_count == 0);
  CHECK(red.white_count == 0);

  PlateType yellow = classify_plate_color(solid_hsv(40, 12, 0.66, 0.6, 0.85));
  CHECK(yellow.kind == PlateKind::Yellow);
  CHECK(yellow.yellow_count == 40 * 12);

  PlateType white = classify_plate_color(solid_hsv(40, 12, 0.0, 0.05, 0.92));
  CHECK(white.kind == PlateKind::White);
  CHECK(white.white_count == 40 * 12);

  // Green sits in no band at all.
  PlateType none = classify_plate_color(solid_hsv(40, 12, 0.3, 0.9, 0.9));
  CHECK(none.kind == PlateKind::Unknown);
  CHECK(none.red_count == 0);
  CHECK(none.yellow_count == 0);
  CHECK(none.white_count == 0);
}

TEST_CASE("band membership is mutually exclusive by construction") {
  const ColorBands bands{};
  for (int hi = 0; hi <= 100; ++hi) {
    for (int si = 0; si <= 100; ++si) {
      for (int vi = 0; vi <= 100; ++vi) {
        const double h = hi / 100.0;
        const double s = si / 100.0;
        const double v = vi / 100.0;
        const int members = (in_red(bands, h, s, v) ? 1 : 0) +
                            (in_yellow(bands, h, s, v) ? 1 : 0) +
                            (in_white(bands, s, v) ? 1 : 0);
        if (members > 1) {
          CAPTURE(h);
          CAPTURE(s);
          CAPTURE(v);
          REQUIRE(members <= 1);
        }
      }
    }
  }
}

TEST_CASE("majority decides the plate kind") {
  ColorImage img = solid_hsv(30, 10, 0.66, 0.6, 0.85);  // yellow-band field
  paint_hsv(img, 0, 0, 10, 12, 0.87, 0.55, 0.65);       // red patch, 120 px
  PlateType t = classify_plate_color(img);
  CHECK(t.kind == PlateKind::Yellow);
  CHECK(t.yellow_count == 180);
  CHECK(t.red_count == 120);

  // Grow the patch past half: red takes over.
  paint_hsv(img, 0, 0, 10, 16, 0.87, 0.55, 0.65);
  t = classify_plate_color(img);
  CHECK(t.kind == PlateKind::Red);
  CHECK(t.red_count == 160);
  CHECK(t.yellow_count == 140);
}

TEST_CASE("ties and empty tallies give Unknown") {
  ColorImage img = solid_hsv(20, 10, 0.3, 0.9, 0.9);  // all out-of-band
  paint_hsv(img, 0, 0, 10, 5, 0.87, 0.55, 0.65);      // 50 red
  paint_hsv(img, 0, 5, 10, 5, 0.66, 0.6, 0.85);       // 50 yellow
  PlateType t = classify_plate_color(img);
  CHECK(t.red_count == 50);
  CHECK(t.yellow_count == 50);
  CHECK(t.kind == PlateKind::Unknown);

  CHECK(classify_plate_color(solid_hsv(8, 8, 0.3, 0.9, 0.9)).kind ==
        PlateKind::Unknown);
}

TEST_CASE("counting is layout independent") {
  std::mt19937_64 rng(1001);
  ColorImage scattered(24, 18);
  int reds = 0;
  for (int row = 0; row < 18; ++row) {
    for (int col = 0; col < 24; ++col) {
      if (rng() % 3 == 0) {
        paint_hsv(scattered, row, col, 1, 1, 0.87, 0.55, 0.65);
        ++reds;
      } else {
        paint_hsv(scattered, row, col, 1, 1, 0.3, 0.9, 0.9);
      }
    }
  }
  PlateType t = classify_plate_color(scattered);
  CHECK(t.red_count == reds);
  CHECK(t.kind == (reds > 0 ? PlateKind::Red : PlateKind::Unknown));
}

TEST_CASE("custom bands are honoured") {
  ColorBands bands{};
  bands.red_h_lo = 0.0;
  bands.red_h_hi = 0.1;
  ColorImage img = solid_hsv(10, 10, 0.05, 0.9, 0.9);
  CHECK(classify_plate_color(img).kind == PlateKind::Unknown);
  CHECK(classify_plate_color(img, bands).kind == PlateKind::Red);
}

TEST_CASE("plate kind names") {
  CHECK(std::string(plate_kind_name(PlateKind::Red)) == "red");
  CHECK(std::string(plate_kind_name(PlateKind::Yellow)) == "yellow");
  CHECK(std::string(plate_kind_name(PlateKind::White)) == "white");
  CHECK(std::string(plate_kind_name(PlateKind::Unknown)) == "unknown");
}
