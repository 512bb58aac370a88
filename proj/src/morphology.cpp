#include "lpr/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>

namespace lpr {

StructuringElement StructuringElement::full_rect(int width, int height) {
  StructuringElement se;
  se.width = width;
  se.height = height;
  if (width >= 1 && height >= 1) {
    se.mask.assign(static_cast<std::size_t>(width) * height, 1);
  }
  se.validate();
  return se;
}

void StructuringElement::validate() const {
  if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
    throw std::invalid_argument(
        "structuring element dimensions must be odd and positive");
  }
  if (mask.size() != static_cast<std::size_t>(width) * height) {
    throw std::invalid_argument("structuring element mask size mismatch");
  }
  bool any = false;
  for (std::uint8_t m : mask) any = any || m != 0;
  if (!any) {
    throw std::invalid_argument("structuring element has no active cells");
  }
}

StructuringElement reflect(const StructuringElement& se) {
  se.validate();
  StructuringElement out;
  out.width = se.width;
  out.height = se.height;
  out.mask.resize(se.mask.size());
  for (int r = 0; r < se.height; ++r) {
    for (int c = 0; c < se.width; ++c) {
      out.mask[static_cast<std::size_t>(se.height - 1 - r) * se.width +
               (se.width - 1 - c)] = se.cell(r, c);
    }
  }
  return out;
}

BinaryImage erode(const BinaryImage& img, const StructuringElement& se) {
  se.validate();
  BinaryImage out(img.width(), img.height());
  const int orow = se.origin_row();
  const int ocol = se.origin_col();
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      std::uint8_t v = 1;
      for (int sr = 0; sr < se.height && v; ++sr) {
        for (int sc = 0; sc < se.width && v; ++sc) {
          if (!se.cell(sr, sc)) continue;
          v = img.at_or_zero(r + sr - orow, c + sc - ocol);
        }
      }
      out.at(r, c) = v;
    }
  }
  return out;
}

BinaryImage dilate(const BinaryImage& img, const StructuringElement& se) {
  se.validate();
  BinaryImage out(img.width(), img.height());
  const int orow = se.origin_row();
  const int ocol = se.origin_col();
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      std::uint8_t v = 0;
      for (int sr = 0; sr < se.height && !v; ++sr) {
        for (int sc = 0; sc < se.width && !v; ++sc) {
          if (!se.cell(sr, sc)) continue;
          v = img.at_or_zero(r - (sr - orow), c - (sc - ocol));
        }
      }
      out.at(r, c) = v;
    }
  }
  return out;
}

BinaryImage fill_holes(const BinaryImage& img) {
  const int w = img.width();
  const int h = img.height();
  // Flood the background from the border; anything not reached is a hole.
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(w) * h, 0);
  std::deque<std::pair<int, int>> queue;
  auto push = [&](int r, int c) {
    if (r < 0 || r >= h || c < 0 || c >= w) return;
    std::size_t i = static_cast<std::size_t>(r) * w + c;
    if (outside[i] || img.at(r, c)) return;
    outside[i] = 1;
    queue.emplace_back(r, c);
  };
  for (int c = 0; c < w; ++c) {
    push(0, c);
    push(h - 1, c);
  }
  for (int r = 0; r < h; ++r) {
    push(r, 0);
    push(r, w - 1);
  }
  while (!queue.empty()) {
    auto [r, c] = queue.front();
    queue.pop_front();
    push(r - 1, c);
    push(r + 1, c);
    push(r, c - 1);
    push(r, c + 1);
  }
  BinaryImage out(w, h);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      out.at(r, c) =
          img.at(r, c) || !outside[static_cast<std::size_t>(r) * w + c] ? 1
                                                                        : 0;
    }
  }
  return out;
}

EdgeMap kernel_magnitude(const BinaryImage& img, const GradientKernel& k) {
  EdgeMap em;
  em.width = img.width();
  em.height = img.height();
  em.magnitudes.resize(static_cast<std::size_t>(em.width) * em.height);
  for (int r = 0; r < em.height; ++r) {
    for (int c = 0; c < em.width; ++c) {
      double g = 0.0;
      for (int kr = 0; kr < k.height; ++kr) {
        for (int kc = 0; kc < k.width; ++kc) {
          int sr = std::clamp(r + kr - k.origin_row, 0, em.height - 1);
          int sc = std::clamp(c + kc - k.origin_col, 0, em.width - 1);
          g += k.weights[static_cast<std::size_t>(kr) * k.width + kc] *
               img.at(sr, sc);
        }
      }
      em.at(r, c) = std::abs(g);
    }
  }
  return em;
}

EdgeMap kernel_magnitude(const BinaryImage& img, const GradientKernel& kx,
                         const GradientKernel& ky) {
  EdgeMap gx = kernel_magnitude(img, kx);
  EdgeMap gy = kernel_magnitude(img, ky);
  EdgeMap em;
  em.width = gx.width;
  em.height = gx.height;
  em.magnitudes.resize(gx.magnitudes.size());
  for (std::size_t i = 0; i < em.magnitudes.size(); ++i) {
    em.magnitudes[i] = std::hypot(gx.magnitudes[i], gy.magnitudes[i]);
  }
  return em;
}

namespace {

GradientKernel sobel_vertical_kernel() {
  return {3, 3, 1, 1, {-1, 0, 1, -2, 0, 2, -1, 0, 1}};
}

GradientKernel sobel_horizontal_kernel() {
  return {3, 3, 1, 1, {-1, -2, -1, 0, 0, 0, 1, 2, 1}};
}

}  // namespace

EdgeMap sobel_edges(const BinaryImage& img, EdgeDirection direction) {
  switch (direction) {
    case EdgeDirection::Vertical:
      return kernel_magnitude(img, sobel_vertical_kernel());
    case EdgeDirection::Horizontal:
      return kernel_magnitude(img, sobel_horizontal_kernel());
    case EdgeDirection::Both:
      return kernel_magnitude(img, sobel_vertical_kernel(),
                              sobel_horizontal_kernel());
  }
  throw std::invalid_argument("unknown edge direction");
}

BinaryImage binarize_edges(const EdgeMap& em, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("edge threshold must be non-negative");
  }
  BinaryImage out(em.width, em.height);
  for (int r = 0; r < em.height; ++r) {
    for (int c = 0; c < em.width; ++c) {
      out.at(r, c) = em.at(r, c) > t ? 1 : 0;
    }
  }
  return out;
}

double auto_edge_threshold(const EdgeMap& em) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double m : em.magnitudes) {
    if (m > 0.0) {
      sum += m;
      ++n;
    }
  }
  if (n == 0) return 0.0;
  return 0.5 * (sum / static_cast<double>(n));
}

BinaryImage LabeledRegions::region_mask(int label) const {
  if (label < 1 || label > static_cast<int>(regions.size())) {
    throw std::invalid_argument("no region with label " +
                                std::to_string(label));
  }
  const Bbox& b = regions[static_cast<std::size_t>(label) - 1].bbox;
  BinaryImage out(b.width(), b.height());
  for (int r = b.row0; r <= b.row1; ++r) {
    for (int c = b.col0; c <= b.col1; ++c) {
      out.at(r - b.row0, c - b.col0) = label_at(r, c) == label ? 1 : 0;
    }
  }
  return out;
}

LabeledRegions label_components(const BinaryImage& img, int connectivity) {
  if (connectivity != 4 && connectivity != 8) {
    throw std::invalid_argument("connectivity must be 4 or 8");
  }
  const int w = img.width();
  const int h = img.height();
  LabeledRegions out;
  out.width = w;
  out.height = h;
  out.labels.assign(static_cast<std::size_t>(w) * h, 0);

  static constexpr int kDr8[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static constexpr int kDc8[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
  static constexpr int kDr4[4] = {-1, 0, 0, 1};
  static constexpr int kDc4[4] = {0, -1, 1, 0};
  const int* dr = connectivity == 8 ? kDr8 : kDr4;
  const int* dc = connectivity == 8 ? kDc8 : kDc4;
  const int ndirs = connectivity;

  std::deque<std::pair<int, int>> queue;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!img.at(r, c) || out.labels[static_cast<std::size_t>(r) * w + c]) {
        continue;
      }
      Region region;
      region.label = static_cast<int>(out.regions.size()) + 1;
      region.bbox = {r, c, r, c};
      long long sum_r = 0;
      long long sum_c = 0;
      out.labels[static_cast<std::size_t>(r) * w + c] = region.label;
      queue.emplace_back(r, c);
      while (!queue.empty()) {
        auto [cr, cc] = queue.front();
        queue.pop_front();
        ++region.area;
        sum_r += cr;
        sum_c += cc;
        region.bbox.row0 = std::min(region.bbox.row0, cr);
        region.bbox.row1 = std::max(region.bbox.row1, cr);
        region.bbox.col0 = std::min(region.bbox.col0, cc);
        region.bbox.col1 = std::max(region.bbox.col1, cc);
        for (int d = 0; d < ndirs; ++d) {
          int nr = cr + dr[d];
          int nc = cc + dc[d];
          if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
          std::size_t i = static_cast<std::size_t>(nr) * w + nc;
          if (!img.at(nr, nc) || out.labels[i]) continue;
          out.labels[i] = region.label;
          queue.emplace_back(nr, nc);
        }
      }
      region.centroid_row =
          static_cast<double>(sum_r) / static_cast<double>(region.area);
      region.centroid_col =
          static_cast<double>(sum_c) / static_cast<double>(region.area);
      out.regions.push_back(region);
    }
  }
  return out;
}

}  // namespace lpr
