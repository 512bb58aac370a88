#include "lpr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <variant>

namespace lpr {

namespace {

using DoubleField = double PipelineConfig::*;
using IntField = int PipelineConfig::*;
using U64Field = std::uint64_t PipelineConfig::*;
using BoolField = bool PipelineConfig::*;
using StringField = std::string PipelineConfig::*;

struct KeySpec {
  const char* name;
  std::variant<DoubleField, IntField, U64Field, BoolField, StringField> field;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<const char*> allowed;  // enum strings; empty = free-form
  bool odd = false;                  // integer must be odd
};

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = {
      {"gaussian.sigma", &PipelineConfig::gaussian_sigma, 1e-9, 100.0},
      {"gaussian.radius", &PipelineConfig::gaussian_radius, 1, 64},
      {"threshold.mode", &PipelineConfig::threshold_mode, 0, 0,
       {"adaptive", "fixed"}},
      {"threshold.fixed_value", &PipelineConfig::threshold_fixed_value, 0.0,
       1.0},
      {"edges.operator", &PipelineConfig::edges_operator, 0, 0,
       {"sobel", "prewitt", "roberts", "log"}},
      {"edges.threshold", &PipelineConfig::edges_threshold},
      {"morph.erode_width", &PipelineConfig::erode_width, 1, 99, {}, true},
      {"morph.erode_height", &PipelineConfig::erode_height, 1, 99, {}, true},
      {"morph.dilate_width", &PipelineConfig::dilate_width, 1, 99, {}, true},
      {"morph.dilate_height", &PipelineConfig::dilate_height, 1, 99, {}, true},
      {"jump.mode", &PipelineConfig::jump_mode, 0, 0,
       {"horizontal", "diagonal"}},
      {"jump.source", &PipelineConfig::jump_source, 0, 0, {"binary", "edges"}},
      {"jump.min_run", &PipelineConfig::jump_min_run, 0, 10000},
      {"jump.min_count", &PipelineConfig::jump_min_count, 0, 10000},
      {"plate.ar_lo", &PipelineConfig::plate_ar_lo, 0.01, 100.0},
      {"plate.ar_hi", &PipelineConfig::plate_ar_hi, 0.01, 100.0},
      {"plate.min_density", &PipelineConfig::plate_min_density, 0.0, 1.0},
      {"plate.deskew_min", &PipelineConfig::plate_deskew_min, 0.0, 45.0},
      {"segment.noise_area", &PipelineConfig::segment_noise_area, 0, 1000000},
      {"segment.min_h_frac", &PipelineConfig::segment_min_h_frac, 0.0, 1.0},
      {"segment.aspect_lo", &PipelineConfig::segment_aspect_lo, 0.01, 100.0},
      {"segment.aspect_hi", &PipelineConfig::segment_aspect_hi, 0.01, 100.0},
      {"segment.min_stroke", &PipelineConfig::segment_min_stroke, 0, 1000000},
      {"segment.wide_warn_ratio", &PipelineConfig::segment_wide_warn_ratio,
       1.0, 100.0},
      {"knn.k", &PipelineConfig::knn_k, 1, 1 << 20},
      {"features.normalize", &PipelineConfig::features_normalize},
      {"color.red_h_lo", &PipelineConfig::color_red_h_lo, 0.0, 1.0},
      {"color.red_h_hi", &PipelineConfig::color_red_h_hi, 0.0, 1.0},
      {"color.yellow_h_lo", &PipelineConfig::color_yellow_h_lo, 0.0, 1.0},
      {"color.yellow_h_hi", &PipelineConfig::color_yellow_h_hi, 0.0, 1.0},
      {"color.chroma_s_min", &PipelineConfig::color_chroma_s_min, 0.0, 1.0},
      {"color.chroma_v_min", &PipelineConfig::color_chroma_v_min, 0.0, 1.0},
      {"color.white_s_max", &PipelineConfig::color_white_s_max, 0.0, 1.0},
      {"color.white_v_min", &PipelineConfig::color_white_v_min, 0.0, 1.0},
      {"corpus.count", &PipelineConfig::corpus_count, 0, 1000000},
      {"corpus.seed", &PipelineConfig::corpus_seed},
      {"corpus.kind", &PipelineConfig::corpus_kind, 0, 0, {"plates", "glyphs"}},
      {"corpus.tilt_min", &PipelineConfig::corpus_tilt_min, -45.0, 45.0},
      {"corpus.tilt_max", &PipelineConfig::corpus_tilt_max, -45.0, 45.0},
      {"corpus.noise", &PipelineConfig::corpus_noise, 0.0, 1.0},
      {"corpus.font", &PipelineConfig::corpus_font, 0, 0, {"block", "bold"}},
      {"corpus.mix", &PipelineConfig::corpus_mix},
      {"corpus.labels", &PipelineConfig::corpus_labels},
      {"corpus.samples_per_label", &PipelineConfig::corpus_samples_per_label,
       1, 100000},
      {"corpus.text_len", &PipelineConfig::corpus_text_len, 1, 16},
      {"corpus.width", &PipelineConfig::corpus_width, 64, 4096},
      {"corpus.height", &PipelineConfig::corpus_height, 48, 4096},
      {"corpus.brightness", &PipelineConfig::corpus_brightness},
      {"eval.seed", &PipelineConfig::eval_seed},
      {"eval.iou", &PipelineConfig::eval_iou, 0.01, 1.0},
      {"eval.workers", &PipelineConfig::eval_workers, 0, 1024},
      {"eval.model", &PipelineConfig::eval_model},
      {"debug.dir", &PipelineConfig::debug_dir},
  };
  return keys;
}

const KeySpec& find_key(const std::string& key) {
  for (const KeySpec& spec : registry()) {
    if (key == spec.name) return spec;
  }
  throw ConfigError("unknown configuration key '" + key + "'");
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* b = value.data();
  const char* e = b + value.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e || std::isnan(out)) {
    throw ConfigError(key + ": expected a real number, got '" + value + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* b = value.data();
  const char* e = b + value.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e) {
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  }
  return out;
}

void check_range(const KeySpec& spec, double v) {
  if (v < spec.lo || v > spec.hi) {
    throw ConfigError(std::string(spec.name) + ": value " + format_double(v) +
                      " outside [" + format_double(spec.lo) + ", " +
                      format_double(spec.hi) + "]");
  }
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// "kind:weight,kind:weight" with known kinds and non-negative weights.
void check_mix(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  std::string part;
  double total = 0.0;
  while (std::getline(in, part, ',')) {
    const std::size_t colon = part.find(':');
    if (colon == std::string::npos) {
      throw ConfigError(key + ": expected kind:weight, got '" + part + "'");
    }
    const std::string kind = trim(part.substr(0, colon));
    if (kind != "yellow" && kind != "white" && kind != "red") {
      throw ConfigError(key + ": unknown plate kind '" + kind + "'");
    }
    const double w = parse_double(key, trim(part.substr(colon + 1)));
    if (w < 0.0) throw ConfigError(key + ": negative weight");
    total += w;
  }
  if (total <= 0.0) throw ConfigError(key + ": weights sum to zero");
}

void check_brightness(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  std::string part;
  int n = 0;
  while (std::getline(in, part, ',')) {
    const double b = parse_double(key, trim(part));
    if (b <= 0.0 || b > 2.0) {
      throw ConfigError(key + ": brightness multiplier " + trim(part) +
                        " outside (0, 2]");
    }
    ++n;
  }
  if (n == 0) throw ConfigError(key + ": empty list");
}

}  // namespace

ColorBands PipelineConfig::color_bands() const {
  ColorBands bands;
  bands.red_h_lo = color_red_h_lo;
  bands.red_h_hi = color_red_h_hi;
  bands.yellow_h_lo = color_yellow_h_lo;
  bands.yellow_h_hi = color_yellow_h_hi;
  bands.chroma_s_min = color_chroma_s_min;
  bands.chroma_v_min = color_chroma_v_min;
  bands.white_s_max = color_white_s_max;
  bands.white_v_min = color_white_v_min;
  return bands;
}

void config_set(PipelineConfig& cfg, const std::string& key,
                const std::string& value) {
  const KeySpec& spec = find_key(key);
  if (auto* f = std::get_if<DoubleField>(&spec.field)) {
    const double v = parse_double(key, value);
    check_range(spec, v);
    cfg.*(*f) = v;
    return;
  }
  if (auto* f = std::get_if<IntField>(&spec.field)) {
    const long long v = parse_int(key, value);
    check_range(spec, static_cast<double>(v));
    if (spec.odd && v % 2 == 0) {
      throw ConfigError(key + ": structuring element size must be odd");
    }
    cfg.*(*f) = static_cast<int>(v);
    return;
  }
  if (auto* f = std::get_if<U64Field>(&spec.field)) {
    std::uint64_t v = 0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr != e) {
      throw ConfigError(key + ": expected an unsigned integer, got '" + value +
                        "'");
    }
    cfg.*(*f) = v;
    return;
  }
  if (auto* f = std::get_if<BoolField>(&spec.field)) {
    if (value == "true" || value == "1") {
      cfg.*(*f) = true;
    } else if (value == "false" || value == "0") {
      cfg.*(*f) = false;
    } else {
      throw ConfigError(key + ": expected true/false/1/0, got '" + value +
                        "'");
    }
    return;
  }
  auto* f = std::get_if<StringField>(&spec.field);
  if (!spec.allowed.empty()) {
    bool ok = false;
    for (const char* a : spec.allowed) ok = ok || value == a;
    if (!ok) {
      std::string options;
      for (const char* a : spec.allowed) {
        if (!options.empty()) options += ", ";
        options += a;
      }
      throw ConfigError(key + ": '" + value + "' is not one of {" + options +
                        "}");
    }
  }
  if (key == "edges.threshold" && value != "auto") {
    const double t = parse_double(key, value);
    if (t < 0.0) throw ConfigError(key + ": threshold must be non-negative");
  }
  if (key == "corpus.mix") check_mix(key, value);
  if (key == "corpus.brightness") check_brightness(key, value);
  if (key == "corpus.labels" && value.empty()) {
    throw ConfigError(key + ": label alphabet must not be empty");
  }
  cfg.*(*f) = value;
}

std::string config_get(const PipelineConfig& cfg, const std::string& key) {
  const KeySpec& spec = find_key(key);
  if (auto* f = std::get_if<DoubleField>(&spec.field)) {
    return format_double(cfg.*(*f));
  }
  if (auto* f = std::get_if<IntField>(&spec.field)) {
    return std::to_string(cfg.*(*f));
  }
  if (auto* f = std::get_if<U64Field>(&spec.field)) {
    return std::to_string(cfg.*(*f));
  }
  if (auto* f = std::get_if<BoolField>(&spec.field)) {
    return cfg.*(*f) ? "true" : "false";
  }
  return cfg.*std::get<StringField>(spec.field);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const KeySpec& spec : registry()) out.emplace_back(spec.name);
  return out;
}

void config_load_file(PipelineConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) +
                        ": expected key=value");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    try {
      config_set(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
}

std::string config_serialize(const PipelineConfig& cfg) {
  std::string out;
  for (const KeySpec& spec : registry()) {
    out += spec.name;
    out += '=';
    out += config_get(cfg, spec.name);
    out += '\n';
  }
  return out;
}

void config_validate(const PipelineConfig& cfg) {
  auto ordered = [](const char* lo_key, double lo, const char* hi_key,
                    double hi) {
    if (lo > hi) {
      throw ConfigError(std::string(lo_key) + " (" + format_double(lo) +
                        ") exceeds " + hi_key + " (" + format_double(hi) +
                        ")");
    }
  };
  ordered("plate.ar_lo", cfg.plate_ar_lo, "plate.ar_hi", cfg.plate_ar_hi);
  ordered("segment.aspect_lo", cfg.segment_aspect_lo, "segment.aspect_hi",
          cfg.segment_aspect_hi);
  ordered("corpus.tilt_min", cfg.corpus_tilt_min, "corpus.tilt_max",
          cfg.corpus_tilt_max);
  ordered("color.red_h_lo", cfg.color_red_h_lo, "color.red_h_hi",
          cfg.color_red_h_hi);
  ordered("color.yellow_h_lo", cfg.color_yellow_h_lo, "color.yellow_h_hi",
          cfg.color_yellow_h_hi);
}

}  // namespace lpr
