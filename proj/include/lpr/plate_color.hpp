/**
 * @file plate_color.hpp
 * @brief Plate background classification from per-pixel HSV band tallies.
 */
#pragma once

#include <string>

#include "lpr/image.hpp"

namespace lpr {

enum class PlateKind { Unknown, Red, Yellow, White };

const char* plate_kind_name(PlateKind kind);

struct PlateType {
  PlateKind kind = PlateKind::Unknown;
  long long red_count = 0;
  long long yellow_count = 0;
  long long white_count = 0;
};

/// HSV acceptance bands. Every bound is inclusive.
struct ColorBands {
  double red_h_lo = 0.8;
  double red_h_hi = 0.94;
  double yellow_h_lo = 0.58;
  double yellow_h_hi = 0.74;
  double chroma_s_min = 0.45;  // red and yellow saturation floor
  double chroma_v_min = 0.5;   // red and yellow value floor
  double white_s_max = 0.15;
  double white_v_min = 0.8;
};

/// Tallies pixels per band (a pixel can match at most one) and returns the
/// argmax kind; ties and all-zero tallies give Unknown.
PlateType classify_plate_color(const ColorImage& plate,
                               const ColorBands& bands = {});

}  // namespace lpr
