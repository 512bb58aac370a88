/**
 * @file segmenter.hpp
 * @brief Character isolation on the deskewed plate crop: stroke polarity and
 *        cleanup, projection histograms, component gating, and glyph
 *        normalization to the fixed 60x30 cell.
 */
#pragma once

#include <string>
#include <vector>

#include "lpr/image.hpp"
#include "lpr/morphology.hpp"

namespace lpr {

inline constexpr int kGlyphRows = 60;
inline constexpr int kGlyphCols = 30;

/// Thresholds the crop, flips polarity so strokes read as 1, then removes
/// components smaller than noise_area pixels or touching two or more image
/// borders (frame rails, corner junk).
BinaryImage prepare_plate(const GrayImage& plate, int noise_area);

enum class ProjectionAxis { Horizontal, Vertical };

struct Projection {
  ProjectionAxis axis = ProjectionAxis::Horizontal;
  std::vector<int> counts;  // per row (horizontal) or per column (vertical)
};

Projection projection(const BinaryImage& bin, ProjectionAxis axis);

struct CharGlyph {
  BinaryImage pixels;  // 60x30, strokes are 1
  Bbox source_bbox;    // location in plate coordinates
  int order_index = 0;
};

struct SegmentParams {
  int noise_area = 15;
  double min_h_frac = 0.35;
  // Height the min_h_frac gate is taken against. 0 falls back to the mask
  // height; callers that deskewed a tilted crop should pass the plate's own
  // height, since the crop of a rotated box is much taller than the plate.
  int reference_height = 0;
  double aspect_lo = 0.8;   // height/width
  double aspect_hi = 6.0;
  int min_stroke = 20;
  double wide_warn_ratio = 1.4;
};

struct SegmentResult {
  std::vector<CharGlyph> glyphs;
  std::vector<std::string> warnings;
};

/// Aspect-preserving nearest-neighbor fit of a tight crop into the 60x30
/// cell, centered, then cut back to {0,1} at 0.5. Throws on an empty crop.
BinaryImage normalize_glyph(const BinaryImage& crop);

/// Labels 8-connected components, keeps character-shaped ones (height at
/// least min_h_frac of the plate height, height/width within
/// [aspect_lo, aspect_hi]), orders them left to right, normalizes each to
/// 60x30, and drops any with fewer than min_stroke stroke pixels. A warning
/// is recorded for kept components wider than wide_warn_ratio times the
/// median kept width (likely joined characters).
SegmentResult segment_chars(const BinaryImage& bin, const SegmentParams& params);

}  // namespace lpr
