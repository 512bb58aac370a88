/**
 * @file image.hpp
 * @brief Pixel containers and preprocessing operators: grayscale conversion,
 *        Gaussian smoothing, statistics-driven binarization, HSV conversion.
 */
#pragma once

#include <cstdint>
#include <vector>

namespace lpr {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 24-bit color raster, row-major.
class ColorImage {
 public:
  ColorImage() = default;
  ColorImage(int width, int height, Rgb fill = {});

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  std::size_t size() const { return pixels_.size(); }

  Rgb& at(int row, int col) { return pixels_[idx(row, col)]; }
  const Rgb& at(int row, int col) const { return pixels_[idx(row, col)]; }

  std::vector<Rgb>& pixels() { return pixels_; }
  const std::vector<Rgb>& pixels() const { return pixels_; }

 private:
  std::size_t idx(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

/// Intensity raster, one double per pixel, values in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(int width, int height, double fill = 0.0);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  std::size_t size() const { return pixels_.size(); }

  double& at(int row, int col) { return pixels_[idx(row, col)]; }
  double at(int row, int col) const { return pixels_[idx(row, col)]; }

  /// Read with edge replication: out-of-range coordinates clamp to the border.
  double at_clamped(int row, int col) const;

  std::vector<double>& pixels() { return pixels_; }
  const std::vector<double>& pixels() const { return pixels_; }

 private:
  std::size_t idx(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<double> pixels_;
};

/// {0,1} raster, one byte per pixel.
class BinaryImage {
 public:
  BinaryImage() = default;
  BinaryImage(int width, int height, std::uint8_t fill = 0);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t& at(int row, int col) { return pixels_[idx(row, col)]; }
  std::uint8_t at(int row, int col) const { return pixels_[idx(row, col)]; }

  bool in_bounds(int row, int col) const {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }
  /// Value with out-of-image cells reading as 0.
  std::uint8_t at_or_zero(int row, int col) const {
    return in_bounds(row, col) ? at(row, col) : std::uint8_t{0};
  }

  long long count_ones() const;

  std::vector<std::uint8_t>& pixels() { return pixels_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const BinaryImage&, const BinaryImage&) = default;

 private:
  std::size_t idx(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct ImageStats {
  double mean = 0.0;
  double variance = 0.0;
  double threshold = 0.0;  // mean + variance, unclamped
};

struct HsvPixel {
  double h = 0.0;  // [0, 1)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

/// Luma conversion: (0.299 R + 0.587 G + 0.114 B) / 255.
GrayImage to_grayscale(const ColorImage& img);

/// Convolution with a normalized (2*radius+1)^2 kernel exp(-0.5 d^2 / sigma^2).
/// Borders are handled by edge replication. Throws std::invalid_argument for
/// sigma <= 0 or radius < 1.
GrayImage gaussian_smooth(const GrayImage& img, double sigma, int radius);

/// Mean, population variance and their sum over all pixels. Throws on an
/// empty image.
ImageStats image_stats(const GrayImage& img);

/// Pixel = 1 iff intensity strictly exceeds min(mean + variance, 1 - 1e-6).
BinaryImage adaptive_threshold(const GrayImage& img);

/// Pixel = 1 iff intensity > t. Throws unless t is in [0, 1].
BinaryImage fixed_threshold(const GrayImage& img, double t);

/// Standard hexcone HSV; H is 0 whenever S = 0.
HsvPixel rgb_to_hsv(Rgb p);

/// Inverse hexcone mapping, channels rounded to the nearest integer.
Rgb hsv_to_rgb(const HsvPixel& p);

BinaryImage complement(const BinaryImage& img);

}  // namespace lpr
