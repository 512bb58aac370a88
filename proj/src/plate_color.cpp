#include "lpr/plate_color.hpp"

#include <algorithm>

namespace lpr {

const char* plate_kind_name(PlateKind kind) {
  switch (kind) {
    case PlateKind::Red: return "red";
    case PlateKind::Yellow: return "yellow";
    case PlateKind::White: return "white";
    case PlateKind::Unknown: break;
  }
  return "unknown";
}

PlateType classify_plate_color(const ColorImage& plate,
                               const ColorBands& bands) {
  PlateType out;
  for (const Rgb& p : plate.pixels()) {
    const HsvPixel hsv = rgb_to_hsv(p);
    if (hsv.s >= bands.chroma_s_min && hsv.v >= bands.chroma_v_min &&
        hsv.h >= bands.red_h_lo && hsv.h <= bands.red_h_hi) {
      ++out.red_count;
    } else if (hsv.s >= bands.chroma_s_min && hsv.v >= bands.chroma_v_min &&
               hsv.h >= bands.yellow_h_lo && hsv.h <= bands.yellow_h_hi) {
      ++out.yellow_count;
    } else if (hsv.s <= bands.white_s_max && hsv.v >= bands.white_v_min) {
      ++out.white_count;
    }
  }
  const long long r = out.red_count;
  const long long y = out.yellow_count;
  const long long w = out.white_count;
  const long long top = std::max({r, y, w});
  if (top == 0) {
    out.kind = PlateKind::Unknown;
  } else if (top == r && top != y && top != w) {
    out.kind = PlateKind::Red;
  } else if (top == y && top != r && top != w) {
    out.kind = PlateKind::Yellow;
  } else if (top == w && top != r && top != y) {
    out.kind = PlateKind::White;
  } else {
    out.kind = PlateKind::Unknown;  // tied tallies
  }
  return out;
}

}  // namespace lpr
