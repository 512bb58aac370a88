// Shared helpers for building small fixture images in tests.
#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "lpr/image.hpp"

namespace lpr::test {

// Rows of '1'/'#' for foreground, anything else background. All rows must
// have equal length.
inline BinaryImage binary_from(std::initializer_list<std::string> rows) {
  std::vector<std::string> v(rows);
  BinaryImage img(static_cast<int>(v[0].size()), static_cast<int>(v.size()));
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      char ch = v[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
      img.at(r, c) = (ch == '1' || ch == '#') ? 1 : 0;
    }
  }
  return img;
}

inline BinaryImage random_binary(std::mt19937_64& rng, int width, int height,
                                 double fg_prob = 0.5) {
  BinaryImage img(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      img.at(r, c) = u < fg_prob ? 1 : 0;
    }
  }
  return img;
}

inline GrayImage random_gray(std::mt19937_64& rng, int width, int height) {
  GrayImage img(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      img.at(r, c) = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    }
  }
  return img;
}

inline bool subset_of(const BinaryImage& a, const BinaryImage& b) {
  for (int r = 0; r < a.height(); ++r) {
    for (int c = 0; c < a.width(); ++c) {
      if (a.at(r, c) && !b.at(r, c)) return false;
    }
  }
  return true;
}

}  // namespace lpr::test
