/**
 * @file config.hpp
 * @brief Flat key=value configuration for the recognition pipeline.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpr/plate_color.hpp"

namespace lpr {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every tunable of the pipeline, the corpus generator and the evaluation
/// harness. Fields are addressed by dotted keys (e.g. "gaussian.sigma")
/// through config_set/config_get; unknown keys and out-of-range values are
/// rejected with ConfigError.
struct PipelineConfig {
  // preprocessing
  double gaussian_sigma = 1.0;
  int gaussian_radius = 2;
  std::string threshold_mode = "adaptive";  // adaptive | fixed
  double threshold_fixed_value = 0.4;

  // edges
  std::string edges_operator = "sobel";  // sobel | prewitt | roberts | log
  std::string edges_threshold = "auto";  // "auto" or a non-negative real

  // morphology (structuring element sizes, odd)
  int erode_width = 1;
  int erode_height = 3;
  int dilate_width = 15;
  int dilate_height = 5;

  // plate location
  std::string jump_mode = "horizontal";  // horizontal | diagonal
  std::string jump_source = "binary";    // binary | edges
  int jump_min_run = 12;
  int jump_min_count = 15;
  double plate_ar_lo = 2.0;
  double plate_ar_hi = 6.0;
  double plate_min_density = 0.5;
  // Tilts under this many degrees are measurement noise from ragged blob
  // edges; straightening them would resample the crop for no real rotation.
  double plate_deskew_min = 0.5;

  // character segmentation
  int segment_noise_area = 15;
  double segment_min_h_frac = 0.35;
  double segment_aspect_lo = 0.8;
  double segment_aspect_hi = 6.0;
  int segment_min_stroke = 20;
  double segment_wide_warn_ratio = 1.4;

  // classification
  int knn_k = 1;
  bool features_normalize = false;

  // plate color bands
  double color_red_h_lo = 0.8;
  double color_red_h_hi = 0.94;
  double color_yellow_h_lo = 0.58;
  double color_yellow_h_hi = 0.74;
  double color_chroma_s_min = 0.45;
  double color_chroma_v_min = 0.5;
  double color_white_s_max = 0.15;
  double color_white_v_min = 0.8;

  // synthetic corpus generation
  int corpus_count = 10;
  std::uint64_t corpus_seed = 1;
  std::string corpus_kind = "plates";  // plates | glyphs
  double corpus_tilt_min = 0.0;
  double corpus_tilt_max = 0.0;
  double corpus_noise = 0.0;
  std::string corpus_font = "block";  // block | bold
  std::string corpus_mix = "yellow:0.5,white:0.3,red:0.2";
  std::string corpus_labels = "0123456789";
  int corpus_samples_per_label = 20;
  int corpus_text_len = 8;
  int corpus_width = 360;
  int corpus_height = 240;
  std::string corpus_brightness = "1";  // comma-separated multipliers, cycled

  // evaluation
  std::uint64_t eval_seed = 1;
  double eval_iou = 0.5;
  int eval_workers = 0;  // 0 = all hardware threads
  std::string eval_model;

  std::string debug_dir;

  ColorBands color_bands() const;
};

/// Assigns one key from its textual value. Throws ConfigError on unknown
/// keys, malformed numbers, out-of-range values or bad enum strings.
void config_set(PipelineConfig& cfg, const std::string& key,
                const std::string& value);

/// Returns the current value of a key, formatted exactly as serialize would.
std::string config_get(const PipelineConfig& cfg, const std::string& key);

/// All known keys in serialization order.
std::vector<std::string> config_keys();

/// Reads a plain-text key=value file ('#' starts a comment, blank lines
/// ignored). Errors carry "path:LINE: message".
void config_load_file(PipelineConfig& cfg, const std::string& path);

/// One "key=value" line per key, in config_keys() order.
std::string config_serialize(const PipelineConfig& cfg);

/// Cross-field checks that single assignments cannot see (interval bounds
/// ordered, mix parseable). Throws ConfigError naming the offending keys.
void config_validate(const PipelineConfig& cfg);

}  // namespace lpr
