#include "lpr/knn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace lpr {

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("euclidean: length mismatch");
  }
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

double euclidean(const FeatureVector& a, const FeatureVector& b) {
  return euclidean(std::span<const double>(a.values),
                   std::span<const double>(b.values));
}

std::vector<std::string> KnnModel::label_set() const {
  std::vector<std::string> labels;
  labels.reserve(entries.size());
  for (const KnnEntry& e : entries) labels.push_back(e.label);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

Classification classify(const KnnModel& model, const FeatureVector& q) {
  if (model.entries.empty()) {
    throw std::invalid_argument("classify: model has no entries");
  }
  if (model.k < 1 ||
      model.k > static_cast<int>(model.entries.size())) {
    throw std::invalid_argument("classify: k out of range for model size");
  }
  std::vector<std::pair<double, std::size_t>> ranked;
  ranked.reserve(model.entries.size());
  for (std::size_t i = 0; i < model.entries.size(); ++i) {
    ranked.emplace_back(euclidean(model.entries[i].features, q), i);
  }
  const std::size_t k = static_cast<std::size_t>(model.k);
  std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end());

  std::map<std::string, int> votes;
  double distance_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    ++votes[model.entries[ranked[i].second].label];
    distance_sum += ranked[i].first;
  }
  int best_votes = 0;
  bool tie = false;
  std::string best_label;
  for (const auto& [label, count] : votes) {
    if (count > best_votes) {
      best_votes = count;
      best_label = label;
      tie = false;
    } else if (count == best_votes) {
      tie = true;
    }
  }
  if (tie) {
    best_label = model.entries[ranked[0].second].label;
    best_votes = votes[best_label];
  }
  Classification out;
  out.label = best_label;
  out.votes = best_votes;
  out.mean_distance = distance_sum / static_cast<double>(k);
  return out;
}

KnnModel train(const std::vector<TrainingSample>& samples, int k,
               bool normalize_features) {
  if (samples.empty()) {
    throw std::invalid_argument("train: no samples");
  }
  if (k < 1) {
    throw std::invalid_argument("train: k must be >= 1");
  }
  KnnModel model;
  model.k = k;
  model.entries.reserve(samples.size());
  for (const TrainingSample& s : samples) {
    model.entries.push_back(
        {s.label, extract_features(s.glyph, normalize_features)});
  }
  return model;
}

namespace {

[[noreturn]] void model_fail(const std::string& path, int line,
                             const std::string& msg) {
  throw ModelError(path + ":" + std::to_string(line) + ": " + msg);
}

// Number of bytes in the UTF-8 sequence starting at s[0], or 0 when invalid.
std::size_t utf8_len(const std::string& s) {
  if (s.empty()) return 0;
  const auto b0 = static_cast<unsigned char>(s[0]);
  std::size_t len;
  if (b0 < 0x80) {
    len = 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
  } else {
    return 0;
  }
  if (s.size() < len) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) return 0;
  }
  return len;
}

bool single_scalar(const std::string& s) {
  const std::size_t len = utf8_len(s);
  return len > 0 && len == s.size();
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

void save_model(const KnnModel& model, const std::string& path) {
  for (const KnnEntry& e : model.entries) {
    if (e.label.empty() ||
        e.label.find_first_of("\t\n") != std::string::npos ||
        (!single_scalar(e.label) &&
         e.label.find(']') != std::string::npos)) {
      throw ModelError("save_model: unserializable label '" + e.label + "'");
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelError(path + ": cannot open for writing");
  out << "knn-model v1 k=" << model.k << " n=" << model.entries.size()
      << "\n";
  for (const KnnEntry& e : model.entries) {
    if (single_scalar(e.label)) {
      out << e.label;
    } else {
      out << '[' << e.label << ']';
    }
    out << '\t';
    for (std::size_t i = 0; i < e.features.values.size(); ++i) {
      if (i) out << ' ';
      out << format_double(e.features.values[i]);
    }
    out << '\n';
  }
  if (!out) throw ModelError(path + ": write failed");
}

KnnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelError(path + ": cannot open");

  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) model_fail(path, 1, "empty file");
  int k = 0;
  long long n = -1;
  {
    std::istringstream hdr(line);
    std::string magic, version, kf, nf;
    hdr >> magic >> version >> kf >> nf;
    if (magic != "knn-model" || version != "v1") {
      model_fail(path, 1, "expected header 'knn-model v1 k=<int> n=<int>'");
    }
    auto parse_field = [&](const std::string& field, const char* name,
                           long long lo, long long hi) -> long long {
      const std::string prefix = std::string(name) + "=";
      if (field.rfind(prefix, 0) != 0) {
        model_fail(path, 1, "expected " + prefix + "<int> in header");
      }
      long long value = 0;
      const char* b = field.data() + prefix.size();
      const char* e = field.data() + field.size();
      auto [ptr, ec] = std::from_chars(b, e, value);
      if (ec != std::errc{} || ptr != e || value < lo || value > hi) {
        model_fail(path, 1, std::string("invalid ") + name + " in header");
      }
      return value;
    };
    k = static_cast<int>(parse_field(kf, "k", 1, 1 << 20));
    n = parse_field(nf, "n", 0, 1LL << 32);
    std::string extra;
    if (hdr >> extra) model_fail(path, 1, "trailing tokens in header");
  }

  KnnModel model;
  model.k = k;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() && in.eof()) break;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) model_fail(path, line_no, "blank entry line");

    std::string label;
    std::size_t pos;
    if (line[0] == '[') {
      pos = line.find(']');
      if (pos == std::string::npos) {
        model_fail(path, line_no, "unterminated bracketed label");
      }
      label = line.substr(1, pos - 1);
      if (label.empty()) model_fail(path, line_no, "empty label");
      ++pos;
    } else {
      pos = utf8_len(line);
      if (pos == 0) model_fail(path, line_no, "invalid label encoding");
      label = line.substr(0, pos);
    }
    if (pos >= line.size() || line[pos] != '\t') {
      model_fail(path, line_no, "expected TAB after label");
    }
    ++pos;

    KnnEntry entry;
    entry.label = label;
    int count = 0;
    const char* cursor = line.data() + pos;
    const char* end = line.data() + line.size();
    while (cursor < end) {
      if (*cursor == ' ') {
        ++cursor;
        continue;
      }
      if (count == kFeatureCount) {
        model_fail(path, line_no,
                   "too many feature values (expected 36)");
      }
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(cursor, end, value);
      if (ec != std::errc{} || ptr == cursor) {
        model_fail(path, line_no,
                   "unparsable feature value at column " +
                       std::to_string(cursor - line.data() + 1));
      }
      entry.features.values[static_cast<std::size_t>(count)] = value;
      ++count;
      cursor = ptr;
      if (cursor < end && *cursor != ' ') {
        model_fail(path, line_no, "expected space between feature values");
      }
    }
    if (count != kFeatureCount) {
      model_fail(path, line_no,
                 "wrong feature count: got " + std::to_string(count) +
                     ", expected 36");
    }
    model.entries.push_back(std::move(entry));
  }
  if (n != static_cast<long long>(model.entries.size())) {
    // Too few entries: point at the line where the next one should start.
    const int at =
        static_cast<long long>(model.entries.size()) < n ? line_no + 1 : line_no;
    model_fail(path, at,
               "entry count mismatch: header says " + std::to_string(n) +
                   ", file has " + std::to_string(model.entries.size()));
  }
  return model;
}

}  // namespace lpr
