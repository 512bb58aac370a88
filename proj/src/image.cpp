#include "lpr/image.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace lpr {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void check_dims(int width, int height) {
  require(width >= 1 && height >= 1, "image dimensions must be >= 1");
}

}  // namespace

ColorImage::ColorImage(int width, int height, Rgb fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

GrayImage::GrayImage(int width, int height, double fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

double GrayImage::at_clamped(int row, int col) const {
  row = std::clamp(row, 0, height_ - 1);
  col = std::clamp(col, 0, width_ - 1);
  return at(row, col);
}

BinaryImage::BinaryImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
  check_dims(width, height);
  require(fill <= 1, "binary fill must be 0 or 1");
  pixels_.assign(static_cast<std::size_t>(width) * height, fill);
}

long long BinaryImage::count_ones() const {
  long long n = 0;
  for (std::uint8_t p : pixels_) n += p;
  return n;
}

GrayImage to_grayscale(const ColorImage& img) {
  require(!img.empty(), "to_grayscale: empty image");
  GrayImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const Rgb& p = img.pixels()[i];
    out.pixels()[i] = (0.299 * p.r + 0.587 * p.g + 0.114 * p.b) / 255.0;
  }
  return out;
}

GrayImage gaussian_smooth(const GrayImage& img, double sigma, int radius) {
  require(!img.empty(), "gaussian_smooth: empty image");
  require(sigma > 0.0, "gaussian_smooth: sigma must be > 0");
  require(radius >= 1, "gaussian_smooth: radius must be >= 1");

  const int k = 2 * radius + 1;
  std::vector<double> kernel(static_cast<std::size_t>(k) * k);
  double sum = 0.0;
  for (int dr = -radius; dr <= radius; ++dr) {
    for (int dc = -radius; dc <= radius; ++dc) {
      const double d2 = static_cast<double>(dr) * dr + static_cast<double>(dc) * dc;
      double w = std::exp(-0.5 * d2 / (sigma * sigma));
      kernel[static_cast<std::size_t>(dr + radius) * k + (dc + radius)] = w;
      sum += w;
    }
  }
  for (double& w : kernel) w /= sum;

  GrayImage out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      double acc = 0.0;
      for (int dr = -radius; dr <= radius; ++dr) {
        for (int dc = -radius; dc <= radius; ++dc) {
          acc += kernel[static_cast<std::size_t>(dr + radius) * k + (dc + radius)] *
                 img.at_clamped(r + dr, c + dc);
        }
      }
      out.at(r, c) = acc;
    }
  }
  return out;
}

ImageStats image_stats(const GrayImage& img) {
  require(!img.empty(), "image_stats: empty image");
  const double n = static_cast<double>(img.size());
  double sum = 0.0;
  for (double p : img.pixels()) sum += p;
  const double mean = sum / n;
  double sq = 0.0;
  for (double p : img.pixels()) {
    const double d = p - mean;
    sq += d * d;
  }
  ImageStats stats;
  stats.mean = mean;
  stats.variance = sq / n;
  stats.threshold = stats.mean + stats.variance;
  return stats;
}

BinaryImage adaptive_threshold(const GrayImage& img) {
  const ImageStats stats = image_stats(img);
  double t = stats.threshold;
  constexpr double kMaxThreshold = 1.0 - 1e-6;
  if (t > kMaxThreshold) {
    std::cerr << "lpr: warning: adaptive threshold " << t << " clamped to "
              << kMaxThreshold << "\n";
    t = kMaxThreshold;
  }
  BinaryImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out.pixels()[i] = img.pixels()[i] > t ? 1 : 0;
  }
  return out;
}

BinaryImage fixed_threshold(const GrayImage& img, double t) {
  require(!img.empty(), "fixed_threshold: empty image");
  require(t >= 0.0 && t <= 1.0, "fixed_threshold: t must be in [0, 1]");
  BinaryImage out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    out.pixels()[i] = img.pixels()[i] > t ? 1 : 0;
  }
  return out;
}

HsvPixel rgb_to_hsv(Rgb p) {
  const double r = p.r / 255.0;
  const double g = p.g / 255.0;
  const double b = p.b / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;

  HsvPixel out;
  out.v = mx;
  out.s = mx > 0.0 ? delta / mx : 0.0;
  if (delta <= 0.0 || out.s == 0.0) {
    out.h = 0.0;
    return out;
  }
  double h6;
  if (mx == r) {
    h6 = (g - b) / delta;
    if (h6 < 0.0) h6 += 6.0;
  } else if (mx == g) {
    h6 = (b - r) / delta + 2.0;
  } else {
    h6 = (r - g) / delta + 4.0;
  }
  out.h = h6 / 6.0;
  if (out.h >= 1.0) out.h -= 1.0;
  return out;
}

Rgb hsv_to_rgb(const HsvPixel& p) {
  const double v = std::clamp(p.v, 0.0, 1.0);
  const double s = std::clamp(p.s, 0.0, 1.0);
  double h = p.h - std::floor(p.h);
  const double h6 = h * 6.0;
  const int sector = std::min(5, static_cast<int>(h6));
  const double f = h6 - sector;
  const double lo = v * (1.0 - s);
  const double dn = v * (1.0 - s * f);
  const double up = v * (1.0 - s * (1.0 - f));

  double r, g, b;
  switch (sector) {
    case 0: r = v; g = up; b = lo; break;
    case 1: r = dn; g = v; b = lo; break;
    case 2: r = lo; g = v; b = up; break;
    case 3: r = lo; g = dn; b = v; break;
    case 4: r = up; g = lo; b = v; break;
    default: r = v; g = lo; b = dn; break;
  }
  auto to_byte = [](double x) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
  };
  return Rgb{to_byte(r), to_byte(g), to_byte(b)};
}

BinaryImage complement(const BinaryImage& img) {
  BinaryImage out = img;
  for (std::uint8_t& p : out.pixels()) p = p ? 0 : 1;
  return out;
}

}  // namespace lpr
