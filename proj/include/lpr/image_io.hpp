/**
 * @file image_io.hpp
 * @brief Image file readers and writers: binary PGM/PPM (P5/P6, maxval 255)
 *        and PNG. Format is detected from the file's magic bytes.
 */
#pragma once

#include <stdexcept>
#include <string>

#include "lpr/image.hpp"

namespace lpr {

struct ImageFile {
  ColorImage color;
  bool is_color = false;  // false for PGM and grayscale PNG sources
};

/// Thrown for unreadable files, unsupported formats, and malformed headers.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ImageFile load_image(const std::string& path);

void write_pgm(const std::string& path, const GrayImage& img);
void write_pgm(const std::string& path, const BinaryImage& img);
void write_ppm(const std::string& path, const ColorImage& img);

}  // namespace lpr
