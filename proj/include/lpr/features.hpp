/**
 * @file features.hpp
 * @brief Glyph skeletonization, the 18-frame partition of the 60x30 cell,
 *        and the 36-component distance/angle feature vector.
 */
#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "lpr/image.hpp"
#include "lpr/segmenter.hpp"

namespace lpr {

/// Iterative two-subiteration contour thinning to a fixpoint, applied
/// sequentially so every deletion is re-tested on the current image; this
/// preserves the 8-connected component count. A final pass shaves remaining
/// 2x2 blocks wherever a simple pixel allows it.
BinaryImage thin(const BinaryImage& glyph);

/// One 10x10 tile of the glyph. Frames are numbered row-major:
/// b = 3*frow + fcol + 1 for frow 0..5, fcol 0..2.
struct Frame {
  int index = 0;      // b, 1..18
  int origin_row = 0;
  int origin_col = 0;
  std::vector<std::pair<int, int>> local_pixels;  // (row, col), 0..9 each
};

inline constexpr int kFrameCount = 18;
inline constexpr int kFrameSize = 10;
inline constexpr int kFeatureCount = 36;

/// Tiles a 60x30 skeleton into its 18 frames. Throws on other dimensions.
std::array<Frame, kFrameCount> frames_of(const BinaryImage& sk);

/// Mean Euclidean distance from each white pixel to the frame's bottom-left
/// cell (local row 9, col 0); 0 for empty frames.
std::array<double, kFrameCount> distance_features(
    const std::array<Frame, kFrameCount>& frames);

/// Mean elevation atan2(9 - r, c) of each white pixel above the horizontal
/// through the bottom-left cell, in [0, pi/2]; 0 for empty frames.
std::array<double, kFrameCount> angle_features(
    const std::array<Frame, kFrameCount>& frames);

struct FeatureVector {
  std::array<double, kFeatureCount> values{};  // 18 distances, then 18 angles

  std::span<const double> distances() const { return {values.data(), 18}; }
  std::span<const double> angles() const { return {values.data() + 18, 18}; }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Thin, tile, and concatenate distance then angle features. When normalize
/// is set, distances are divided by sqrt(162) and angles by pi/2 so every
/// component lies in [0, 1].
FeatureVector extract_features(const BinaryImage& glyph, bool normalize = false);

}  // namespace lpr
