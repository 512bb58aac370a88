/**
 * @file locator.hpp
 * @brief Plate candidate scoring (row transition profiles, geometry and
 *        density gates), best-candidate selection, tilt estimation, and
 *        deskewing.
 */
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lpr/image.hpp"
#include "lpr/morphology.hpp"

namespace lpr {

enum class JumpMode {
  /// Count c where pixel(r, c) != pixel(r, c+1) within the row.
  Horizontal,
  /// Count c where pixel(r, c) != pixel(r+1, c+1); the last row has no
  /// diagonal partner and scores 0.
  Diagonal,
};

/// Per-row transition counts inside bbox. Throws when bbox leaves the image
/// or is empty.
std::vector<int> jump_profile(const BinaryImage& bin, const Bbox& bbox,
                              JumpMode mode = JumpMode::Horizontal);

/// True iff some run of strictly more than min_run consecutive entries each
/// strictly exceeds min_jumps.
bool has_jump_run(const std::vector<int>& profile, int min_run, int min_jumps);

struct CandidateGates {
  JumpMode jump_mode = JumpMode::Horizontal;
  int min_run = 12;
  int min_jumps = 15;
  double ar_lo = 2.0;
  double ar_hi = 6.0;
  double min_density = 0.5;
};

struct PlateCandidate {
  int label = 0;
  Bbox bbox;
  long long area = 0;
  std::vector<int> jump_profile;
  double aspect_ratio = 0.0;   // bounding-box width / height
  double fill_density = 0.0;   // area / bounding-box area
  double tilt_degrees = 0.0;
  // Extents of the region after rotating its pixels back by tilt_degrees;
  // for level regions these coincide with the bounding-box figures, for
  // tilted plates they describe the plate itself rather than its diagonal
  // envelope.
  double oriented_width = 0.0;   // extents along the deskewed axes
  double oriented_height = 0.0;
  double oriented_aspect = 0.0;
  double oriented_density = 0.0;
  bool accepted = false;
  std::string reject_reason;  // first failed gate: jump-run, aspect, density
};

/// Measures one labeled region: profile, geometry, tilt, oriented extents.
PlateCandidate make_candidate(const LabeledRegions& regions, int label,
                              const BinaryImage& bin, JumpMode mode);

/// Applies the gates in order (jump-run, aspect, density) and records the
/// first failure. Aspect and density are tested on the tilt-corrected
/// extents.
void validate_candidate(PlateCandidate& c, const CandidateGates& gates);

/// All regions measured and validated, in label order.
std::vector<PlateCandidate> score_candidates(const LabeledRegions& regions,
                                             const BinaryImage& bin,
                                             const CandidateGates& gates);

/// The accepted candidate with the greatest bbox width; ties broken by
/// larger area, then topmost, then leftmost, then lowest label.
std::optional<PlateCandidate> select_plate(const LabeledRegions& regions,
                                           const BinaryImage& bin,
                                           const CandidateGates& gates);

/// Principal-axis angle of the mask in degrees, folded to [-45, 45].
/// Positive angles turn the content clockwise on screen (rows grow
/// downward). Degenerate masks (< 3 pixels or no dominant axis) give 0.
double estimate_tilt(const BinaryImage& mask);

/// Rotates the image content by -degrees about its center (undoing a
/// measured tilt), bilinear interpolation, canvas enlarged to hold the
/// rotated content, uncovered pixels set to the median input intensity.
/// degrees == 0 returns a pixel-identical copy; |degrees| > 45 throws.
GrayImage deskew(const GrayImage& plate, double degrees);

struct PlateRegion {
  GrayImage crop;  // deskewed grayscale plate
  std::array<std::pair<int, int>, 4> corners;  // TL, TR, BR, BL (row, col)
  double tilt_degrees = 0.0;
};

}  // namespace lpr
