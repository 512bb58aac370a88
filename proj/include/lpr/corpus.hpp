/**
 * @file corpus.hpp
 * @brief Deterministic synthetic corpus generation and manifest handling.
 */
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "lpr/config.hpp"
#include "lpr/image.hpp"
#include "lpr/morphology.hpp"

namespace lpr {

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Ground truth for one generated plate image.
struct PlateTruth {
  std::string path;  // relative to the corpus directory
  std::string text;
  Bbox bbox;  // tight box around the composited plate
  double tilt_degrees = 0.0;
  std::string type;  // yellow | white | red
};

/// Ground truth for one generated character glyph.
struct GlyphTruth {
  std::string path;  // relative to the corpus directory
  std::string label;
};

struct CorpusManifest {
  std::string kind;  // plates | glyphs
  std::vector<PlateTruth> plates;
  std::vector<GlyphTruth> glyphs;
};

/// Renders cfg.corpus_count synthetic images into out_dir plus
/// out_dir/manifest.csv, fully determined by the corpus.* settings. Plate
/// corpora composite tilted plates over textured backgrounds; glyph corpora
/// write per-label subdirectories of raw rendered glyphs at varied scales
/// and weights. Returns the manifest it wrote.
CorpusManifest generate_corpus(const PipelineConfig& cfg,
                               const std::string& out_dir);

/// Reads dir/manifest.csv. Errors carry "path:LINE: message".
CorpusManifest load_manifest(const std::string& dir);

/// One glyph of a per-label-subdirectory dataset.
struct LabeledGlyph {
  std::string label;
  BinaryImage glyph;
  std::string path;
};

/// Loads every image under dir/<label>/ as a binary glyph (intensity > 0.5),
/// ordered by label then filename. Throws CorpusError naming the first
/// unreadable file, or if the directory yields no glyphs.
std::vector<LabeledGlyph> load_glyph_dataset(const std::string& dir);

}  // namespace lpr
