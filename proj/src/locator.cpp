#include "lpr/locator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lpr {

std::vector<int> jump_profile(const BinaryImage& bin, const Bbox& bbox,
                              JumpMode mode) {
  if (bbox.row0 < 0 || bbox.col0 < 0 || bbox.row1 >= bin.height() ||
      bbox.col1 >= bin.width() || bbox.row0 > bbox.row1 ||
      bbox.col0 > bbox.col1) {
    throw std::invalid_argument("jump_profile: bbox out of bounds");
  }
  std::vector<int> profile(static_cast<std::size_t>(bbox.height()), 0);
  for (int r = bbox.row0; r <= bbox.row1; ++r) {
    int count = 0;
    if (mode == JumpMode::Horizontal) {
      for (int c = bbox.col0; c < bbox.col1; ++c) {
        if (bin.at(r, c) != bin.at(r, c + 1)) ++count;
      }
    } else if (r < bbox.row1) {
      for (int c = bbox.col0; c < bbox.col1; ++c) {
        if (bin.at(r, c) != bin.at(r + 1, c + 1)) ++count;
      }
    }
    profile[static_cast<std::size_t>(r - bbox.row0)] = count;
  }
  return profile;
}

bool has_jump_run(const std::vector<int>& profile, int min_run,
                  int min_jumps) {
  int run = 0;
  for (int count : profile) {
    if (count > min_jumps) {
      if (++run > min_run) return true;
    } else {
      run = 0;
    }
  }
  return false;
}

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

struct Extents {
  double width = 0.0;
  double height = 0.0;
};

// Axis-parallel extents of the region's pixels after rotating them by
// -degrees about their centroid.
Extents oriented_extents(const LabeledRegions& regions, int label,
                         double degrees) {
  const Region& region = regions.regions[static_cast<std::size_t>(label) - 1];
  const double rad = -degrees / kDegPerRad;
  const double ca = std::cos(rad);
  const double sa = std::sin(rad);
  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  bool first = true;
  for (int r = region.bbox.row0; r <= region.bbox.row1; ++r) {
    for (int c = region.bbox.col0; c <= region.bbox.col1; ++c) {
      if (regions.label_at(r, c) != label) continue;
      const double x = c - region.centroid_col;
      const double y = r - region.centroid_row;
      const double rx = x * ca - y * sa;
      const double ry = x * sa + y * ca;
      if (first) {
        min_x = max_x = rx;
        min_y = max_y = ry;
        first = false;
      } else {
        min_x = std::min(min_x, rx);
        max_x = std::max(max_x, rx);
        min_y = std::min(min_y, ry);
        max_y = std::max(max_y, ry);
      }
    }
  }
  return {max_x - min_x + 1.0, max_y - min_y + 1.0};
}

}  // namespace

PlateCandidate make_candidate(const LabeledRegions& regions, int label,
                              const BinaryImage& bin, JumpMode mode) {
  if (label < 1 || label > static_cast<int>(regions.regions.size())) {
    throw std::invalid_argument("make_candidate: no region with label " +
                                std::to_string(label));
  }
  const Region& region = regions.regions[static_cast<std::size_t>(label) - 1];
  PlateCandidate c;
  c.label = label;
  c.bbox = region.bbox;
  c.area = region.area;
  c.jump_profile = jump_profile(bin, region.bbox, mode);
  c.aspect_ratio =
      static_cast<double>(region.bbox.width()) / region.bbox.height();
  c.fill_density =
      static_cast<double>(region.area) / static_cast<double>(region.bbox.area());
  c.tilt_degrees = estimate_tilt(regions.region_mask(label));
  const Extents e = oriented_extents(regions, label, c.tilt_degrees);
  c.oriented_width = e.width;
  c.oriented_height = e.height;
  c.oriented_aspect = e.width / e.height;
  c.oriented_density =
      static_cast<double>(region.area) / (e.width * e.height);
  return c;
}

void validate_candidate(PlateCandidate& c, const CandidateGates& gates) {
  c.accepted = false;
  if (!has_jump_run(c.jump_profile, gates.min_run, gates.min_jumps)) {
    c.reject_reason = "jump-run";
    return;
  }
  if (c.oriented_aspect < gates.ar_lo || c.oriented_aspect > gates.ar_hi) {
    c.reject_reason = "aspect";
    return;
  }
  if (c.oriented_density < gates.min_density) {
    c.reject_reason = "density";
    return;
  }
  c.accepted = true;
  c.reject_reason.clear();
}

std::vector<PlateCandidate> score_candidates(const LabeledRegions& regions,
                                             const BinaryImage& bin,
                                             const CandidateGates& gates) {
  std::vector<PlateCandidate> out;
  out.reserve(regions.regions.size());
  for (const Region& region : regions.regions) {
    PlateCandidate c = make_candidate(regions, region.label, bin,
                                      gates.jump_mode);
    validate_candidate(c, gates);
    out.push_back(std::move(c));
  }
  return out;
}

std::optional<PlateCandidate> select_plate(const LabeledRegions& regions,
                                           const BinaryImage& bin,
                                           const CandidateGates& gates) {
  std::vector<PlateCandidate> candidates =
      score_candidates(regions, bin, gates);
  const PlateCandidate* best = nullptr;
  for (const PlateCandidate& c : candidates) {
    if (!c.accepted) continue;
    if (!best) {
      best = &c;
      continue;
    }
    auto rank = [](const PlateCandidate& p) {
      return std::tuple(-p.bbox.width(), -p.area, p.bbox.row0, p.bbox.col0,
                        p.label);
    };
    if (rank(c) < rank(*best)) best = &c;
  }
  if (!best) return std::nullopt;
  return *best;
}

double estimate_tilt(const BinaryImage& mask) {
  long long n = 0;
  double sum_r = 0.0;
  double sum_c = 0.0;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask.at(r, c)) continue;
      ++n;
      sum_r += r;
      sum_c += c;
    }
  }
  if (n < 3) return 0.0;
  const double cr = sum_r / static_cast<double>(n);
  const double cc = sum_c / static_cast<double>(n);
  double mu20 = 0.0, mu02 = 0.0, mu11 = 0.0;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask.at(r, c)) continue;
      const double x = c - cc;
      const double y = r - cr;
      mu20 += x * x;
      mu02 += y * y;
      mu11 += x * y;
    }
  }
  if (std::abs(2.0 * mu11) < 1e-12 && std::abs(mu20 - mu02) < 1e-12) {
    return 0.0;
  }
  double deg = 0.5 * std::atan2(2.0 * mu11, mu20 - mu02) * kDegPerRad;
  while (deg > 45.0) deg -= 90.0;
  while (deg < -45.0) deg += 90.0;
  return deg;
}

namespace {

double median_intensity(const GrayImage& img) {
  std::vector<double> v(img.pixels());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.end());
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

}  // namespace

GrayImage deskew(const GrayImage& plate, double degrees) {
  if (plate.empty()) throw std::invalid_argument("deskew: empty image");
  if (std::abs(degrees) > 45.0) {
    throw std::invalid_argument("deskew: |degrees| must be <= 45");
  }
  if (degrees == 0.0) return plate;

  const double rad = degrees / kDegPerRad;
  const double ca = std::cos(rad);
  const double sa = std::sin(rad);
  const int w = plate.width();
  const int h = plate.height();
  // Nearest integer, not ceil: a tilt estimate of a fraction of a degree
  // would otherwise grow the canvas by one and drag the whole image through
  // a half-pixel bilinear shift, softening every edge for no real rotation.
  const int out_w = static_cast<int>(
      std::lround(w * std::abs(ca) + h * std::abs(sa)));
  const int out_h = static_cast<int>(
      std::lround(w * std::abs(sa) + h * std::abs(ca)));
  const double cx = (w - 1) / 2.0;
  const double cy = (h - 1) / 2.0;
  const double ox = (out_w - 1) / 2.0;
  const double oy = (out_h - 1) / 2.0;
  const double fill = median_intensity(plate);

  GrayImage out(out_w, out_h, fill);
  for (int r = 0; r < out_h; ++r) {
    for (int c = 0; c < out_w; ++c) {
      const double dx = c - ox;
      const double dy = r - oy;
      // The content turns by -degrees, so sampling goes through +degrees.
      double sx = dx * ca - dy * sa + cx;
      double sy = dx * sa + dy * ca + cy;
      // Pixel centers own a half-pixel apron; clamping it to the border
      // keeps same-size canvases (tiny angles) from dropping edge rows.
      if (sx < -0.5 || sx > w - 0.5 || sy < -0.5 || sy > h - 0.5) continue;
      sx = std::clamp(sx, 0.0, static_cast<double>(w - 1));
      sy = std::clamp(sy, 0.0, static_cast<double>(h - 1));
      const int x0 = static_cast<int>(std::floor(sx));
      const int y0 = static_cast<int>(std::floor(sy));
      const double fx = sx - x0;
      const double fy = sy - y0;
      const int x1 = std::min(x0 + 1, w - 1);
      const int y1 = std::min(y0 + 1, h - 1);
      const double top = (1.0 - fx) * plate.at(y0, x0) + fx * plate.at(y0, x1);
      const double bot = (1.0 - fx) * plate.at(y1, x0) + fx * plate.at(y1, x1);
      out.at(r, c) = (1.0 - fy) * top + fy * bot;
    }
  }
  return out;
}

}  // namespace lpr
