/**
 * @file knn.hpp
 * @brief Nearest-neighbor classifier over 36-component feature vectors and
 *        the line-oriented model file it persists to.
 */
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpr/features.hpp"
#include "lpr/image.hpp"

namespace lpr {

/// Euclidean distance; spans must have equal length.
double euclidean(std::span<const double> a, std::span<const double> b);
double euclidean(const FeatureVector& a, const FeatureVector& b);

struct KnnEntry {
  std::string label;
  FeatureVector features;
};

struct KnnModel {
  int k = 1;
  std::vector<KnnEntry> entries;

  /// Distinct labels, sorted.
  std::vector<std::string> label_set() const;
};

struct Classification {
  std::string label;
  int votes = 0;           // winning-label count among the k neighbors
  double mean_distance = 0.0;  // mean over the k nearest, all labels
};

/// k nearest entries by Euclidean distance (distance ties go to the lower
/// entry index); majority label wins, vote ties fall back to the single
/// nearest neighbor's label. Throws when the model is empty or k exceeds
/// the entry count.
Classification classify(const KnnModel& model, const FeatureVector& q);

struct TrainingSample {
  std::string label;
  BinaryImage glyph;  // 60x30
};

/// Stores extract_features of every sample; no aggregation (lazy learner).
/// Throws on an empty sample list or k < 1.
KnnModel train(const std::vector<TrainingSample>& samples, int k,
               bool normalize_features = false);

/// Thrown by load_model with "path:LINE: message" diagnostics and by
/// save_model on unwritable files or unserializable labels.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes: header `knn-model v1 k=<k> n=<entry count>`, then per entry
/// `<label>\t<36 space-separated shortest round-trip reals>`. Multi-char
/// labels are bracketed `[...]`.
void save_model(const KnnModel& model, const std::string& path);

/// Parses the same format back, byte-exact for values. Malformed input
/// (bad header, wrong field count, unparsable real, entry count mismatch)
/// raises ModelError naming the offending line.
KnnModel load_model(const std::string& path);

}  // namespace lpr
