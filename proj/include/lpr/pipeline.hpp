/**
 * @file pipeline.hpp
 * @brief End-to-end plate recognition: image file in, labeled string out.
 */
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpr/config.hpp"
#include "lpr/knn.hpp"
#include "lpr/locator.hpp"
#include "lpr/plate_color.hpp"

namespace lpr {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wall-clock stage timings, whole microseconds on a monotonic clock.
struct StageTimings {
  std::int64_t read_us = 0;
  std::int64_t preprocess_us = 0;  // grayscale + smoothing
  std::int64_t threshold_us = 0;
  std::int64_t edges_us = 0;       // gradient + edge binarization
  std::int64_t morphology_us = 0;  // erode + dilate + fill + label
  std::int64_t locate_us = 0;      // candidate gates + crop + deskew
  std::int64_t segment_us = 0;
  std::int64_t classify_us = 0;    // features + nearest neighbours
  std::int64_t color_us = 0;
  std::int64_t total_us = 0;
};

struct GlyphResult {
  std::string label;
  double confidence = 0.0;  // mean distance to the voting neighbours
  Bbox bbox;                // in deskewed plate coordinates
};

struct PlateResult {
  std::string source;
  bool found = false;
  Bbox bbox;  // located plate region in image coordinates
  double tilt_degrees = 0.0;
  std::string text;  // glyph labels, left to right
  std::vector<GlyphResult> glyphs;
  PlateKind kind = PlateKind::Unknown;
  StageTimings timings;
  std::vector<std::string> warnings;
};

struct PipelineOptions {
  bool recognize = true;  // false: locate and segment only, no model needed
};

/// Builds the binarized edge input for the morphology stage. The default
/// operator is Sobel; prewitt, roberts and log are the comparison masks used
/// by the evaluation harness, sharing the same correlation core.
EdgeMap edge_map_for(const std::string& op, const BinaryImage& bin);

/// Runs the full stage chain on one image file. The model may be null when
/// opts.recognize is false; with recognition on, segmented glyphs without a
/// model raise PipelineError. When cfg.debug_dir is set, per-stage artifacts
/// are written there.
PlateResult run_pipeline(const std::string& image_path,
                         const PipelineConfig& cfg, const KnnModel* model,
                         const PipelineOptions& opts = {});

/// Serializes one result as a self-describing key=value record.
std::string result_record(const PlateResult& r);

/// Loads a per-label glyph dataset and reduces every image to the same
/// tight-cropped 60x30 cell the segmenter emits. Blank images are skipped;
/// an unusable (empty or all-blank) dataset raises PipelineError.
std::vector<TrainingSample> dataset_training_samples(const std::string& dir);

/// dataset_training_samples + a model trained with cfg.knn_k neighbours.
KnnModel train_from_directory(const std::string& dir,
                              const PipelineConfig& cfg);

}  // namespace lpr
