/**
 * @file morphology.hpp
 * @brief Edge maps, binary morphology, hole filling, and connected-component
 *        labeling.
 */
#pragma once

#include <string>
#include <vector>

#include "lpr/image.hpp"

namespace lpr {

/// Binary probe mask with its origin at the center cell. Width and height
/// must be odd and at least one cell must be set.
struct StructuringElement {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;

  static StructuringElement full_rect(int width, int height);

  std::uint8_t cell(int row, int col) const {
    return mask[static_cast<std::size_t>(row) * width + col];
  }
  int origin_row() const { return height / 2; }
  int origin_col() const { return width / 2; }
  void validate() const;
};

StructuringElement reflect(const StructuringElement& se);

BinaryImage erode(const BinaryImage& img, const StructuringElement& se);
BinaryImage dilate(const BinaryImage& img, const StructuringElement& se);

/// Sets every 4-connected background region that does not touch the image
/// border to foreground.
BinaryImage fill_holes(const BinaryImage& img);

struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<double> magnitudes;

  double at(int row, int col) const {
    return magnitudes[static_cast<std::size_t>(row) * width + col];
  }
  double& at(int row, int col) {
    return magnitudes[static_cast<std::size_t>(row) * width + col];
  }
};

enum class EdgeDirection { Vertical, Horizontal, Both };

/// Signed correlation kernel with an explicit origin; the pipeline uses the
/// 3x3 Sobel pair, the evaluation harness supplies other operators.
struct GradientKernel {
  int width = 0;
  int height = 0;
  int origin_row = 0;
  int origin_col = 0;
  std::vector<double> weights;
};

/// |response| of a single kernel, borders by replication.
EdgeMap kernel_magnitude(const BinaryImage& img, const GradientKernel& k);

/// sqrt(gx^2 + gy^2) of a kernel pair, borders by replication.
EdgeMap kernel_magnitude(const BinaryImage& img, const GradientKernel& kx,
                         const GradientKernel& ky);

EdgeMap sobel_edges(const BinaryImage& img, EdgeDirection direction);

/// Pixel = 1 iff magnitude strictly exceeds t. Throws for t < 0.
BinaryImage binarize_edges(const EdgeMap& em, double t);

/// Scale-free default cut for edge maps: half the mean of the nonzero
/// magnitudes (0 when the map is all zero).
double auto_edge_threshold(const EdgeMap& em);

struct Bbox {
  int row0 = 0;
  int col0 = 0;
  int row1 = -1;  // inclusive
  int col1 = -1;

  int width() const { return col1 - col0 + 1; }
  int height() const { return row1 - row0 + 1; }
  long long area() const { return static_cast<long long>(width()) * height(); }

  friend bool operator==(const Bbox&, const Bbox&) = default;
};

struct Region {
  int label = 0;  // 1-based
  Bbox bbox;
  long long area = 0;
  double centroid_row = 0.0;
  double centroid_col = 0.0;
};

struct LabeledRegions {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> labels;  // 0 = background
  std::vector<Region> regions;       // regions[i].label == i + 1

  std::int32_t label_at(int row, int col) const {
    return labels[static_cast<std::size_t>(row) * width + col];
  }
  /// The {0,1} mask of one region, cropped to its bounding box.
  BinaryImage region_mask(int label) const;
};

/// Labels maximal connected foreground regions in first-raster-scan order.
/// Connectivity must be 4 or 8.
LabeledRegions label_components(const BinaryImage& img, int connectivity);

}  // namespace lpr
