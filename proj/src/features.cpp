#include "lpr/features.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lpr {

namespace {

// Neighborhood in the Zhang-Suen order: N, NE, E, SE, S, SW, W, NW.
constexpr int kNbrRow[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kNbrCol[8] = {0, 1, 1, 1, 0, -1, -1, -1};

struct Neighborhood {
  std::uint8_t p[8];
  int ones = 0;
  int transitions = 0;  // 0 -> 1 steps around the cycle
};

Neighborhood read_neighborhood(const BinaryImage& img, int r, int c) {
  Neighborhood n{};
  for (int i = 0; i < 8; ++i) {
    n.p[i] = img.at_or_zero(r + kNbrRow[i], c + kNbrCol[i]);
    n.ones += n.p[i];
  }
  for (int i = 0; i < 8; ++i) {
    if (!n.p[i] && n.p[(i + 1) % 8]) ++n.transitions;
  }
  return n;
}

// A pixel whose removal leaves both the local foreground and background
// topology intact.
bool simple_pixel(const BinaryImage& img, int r, int c) {
  const Neighborhood n = read_neighborhood(img, r, c);
  return n.ones >= 1 && n.ones <= 7 && n.transitions == 1;
}

// One directed sub-iteration; returns the number of deletions. Candidates
// are flagged against the image as it stood when the sub-iteration began
// (otherwise a raster scan peels a shape layer after layer in a single
// pass), then removed one at a time. Each removal re-checks the current
// image and keeps the pixel if deleting it would now break connectivity,
// erase a line end, or drop an isolated pixel; that guard is what keeps a
// 2x2 component from vanishing wholesale, the classic failure of the plain
// parallel formulation.
int thin_subpass(BinaryImage& img, bool first) {
  std::vector<std::pair<int, int>> flagged;
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!img.at(r, c)) continue;
      const Neighborhood n = read_neighborhood(img, r, c);
      if (n.ones < 2 || n.ones > 6 || n.transitions != 1) continue;
      const std::uint8_t N = n.p[0], E = n.p[2], S = n.p[4], W = n.p[6];
      if (first) {
        if (N * E * S != 0 || E * S * W != 0) continue;
      } else {
        if (N * E * W != 0 || N * S * W != 0) continue;
      }
      flagged.emplace_back(r, c);
    }
  }
  int deleted = 0;
  for (const auto& [r, c] : flagged) {
    const Neighborhood n = read_neighborhood(img, r, c);
    if (n.ones < 2 || n.transitions != 1) continue;
    img.at(r, c) = 0;
    ++deleted;
  }
  return deleted;
}

// Breaks up any remaining all-ones 2x2 block by removing one simple pixel.
void shave_blocks(BinaryImage& img) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int r = 0; r + 1 < img.height(); ++r) {
      for (int c = 0; c + 1 < img.width(); ++c) {
        if (!(img.at(r, c) && img.at(r, c + 1) && img.at(r + 1, c) &&
              img.at(r + 1, c + 1))) {
          continue;
        }
        const std::pair<int, int> cells[4] = {
            {r, c}, {r, c + 1}, {r + 1, c}, {r + 1, c + 1}};
        for (const auto& [cr, cc] : cells) {
          if (simple_pixel(img, cr, cc)) {
            img.at(cr, cc) = 0;
            changed = true;
            break;
          }
        }
      }
    }
  }
}

}  // namespace

BinaryImage thin(const BinaryImage& glyph) {
  BinaryImage img = glyph;
  if (img.empty()) return img;
  while (thin_subpass(img, true) + thin_subpass(img, false) > 0) {
  }
  shave_blocks(img);
  return img;
}

std::array<Frame, kFrameCount> frames_of(const BinaryImage& sk) {
  if (sk.width() != kGlyphCols || sk.height() != kGlyphRows) {
    throw std::invalid_argument("frames_of: skeleton must be 60x30");
  }
  std::array<Frame, kFrameCount> frames;
  for (int b = 0; b < kFrameCount; ++b) {
    frames[static_cast<std::size_t>(b)].index = b + 1;
    frames[static_cast<std::size_t>(b)].origin_row = (b / 3) * kFrameSize;
    frames[static_cast<std::size_t>(b)].origin_col = (b % 3) * kFrameSize;
  }
  for (int r = 0; r < kGlyphRows; ++r) {
    for (int c = 0; c < kGlyphCols; ++c) {
      if (!sk.at(r, c)) continue;
      const int b = 3 * (r / kFrameSize) + (c / kFrameSize);
      frames[static_cast<std::size_t>(b)].local_pixels.emplace_back(
          r % kFrameSize, c % kFrameSize);
    }
  }
  return frames;
}

std::array<double, kFrameCount> distance_features(
    const std::array<Frame, kFrameCount>& frames) {
  std::array<double, kFrameCount> out{};
  for (std::size_t b = 0; b < kFrameCount; ++b) {
    const auto& pixels = frames[b].local_pixels;
    if (pixels.empty()) continue;
    double sum = 0.0;
    for (const auto& [r, c] : pixels) {
      const double dr = kFrameSize - 1 - r;
      sum += std::sqrt(dr * dr + static_cast<double>(c) * c);
    }
    out[b] = sum / static_cast<double>(pixels.size());
  }
  return out;
}

std::array<double, kFrameCount> angle_features(
    const std::array<Frame, kFrameCount>& frames) {
  std::array<double, kFrameCount> out{};
  for (std::size_t b = 0; b < kFrameCount; ++b) {
    const auto& pixels = frames[b].local_pixels;
    if (pixels.empty()) continue;
    double sum = 0.0;
    for (const auto& [r, c] : pixels) {
      sum += std::atan2(static_cast<double>(kFrameSize - 1 - r),
                        static_cast<double>(c));
    }
    out[b] = sum / static_cast<double>(pixels.size());
  }
  return out;
}

FeatureVector extract_features(const BinaryImage& glyph, bool normalize) {
  const std::array<Frame, kFrameCount> frames = frames_of(thin(glyph));
  const std::array<double, kFrameCount> dist = distance_features(frames);
  const std::array<double, kFrameCount> ang = angle_features(frames);
  FeatureVector fv;
  for (std::size_t i = 0; i < kFrameCount; ++i) {
    fv.values[i] = dist[i];
    fv.values[kFrameCount + i] = ang[i];
  }
  if (normalize) {
    const double max_dist = std::sqrt(162.0);
    const double max_ang = std::numbers::pi / 2.0;
    for (std::size_t i = 0; i < kFrameCount; ++i) {
      fv.values[i] /= max_dist;
      fv.values[kFrameCount + i] /= max_ang;
    }
  }
  return fv;
}

}  // namespace lpr
