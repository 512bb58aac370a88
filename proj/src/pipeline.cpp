/**
 * @file pipeline.cpp
 * @brief Stage orchestration: one image file through preprocessing, edge
 *        morphology, plate location, segmentation and classification.
 */
#include "lpr/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "lpr/corpus.hpp"
#include "lpr/features.hpp"
#include "lpr/image_io.hpp"
#include "lpr/morphology.hpp"
#include "lpr/segmenter.hpp"

namespace lpr {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t since_us(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() -
                                                               t0)
      .count();
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

GradientKernel make_kernel(int width, int height, int origin_row,
                           int origin_col, std::vector<double> weights) {
  GradientKernel k;
  k.width = width;
  k.height = height;
  k.origin_row = origin_row;
  k.origin_col = origin_col;
  k.weights = std::move(weights);
  return k;
}

double parse_edge_threshold(const std::string& text, const EdgeMap& em) {
  if (text == "auto") return auto_edge_threshold(em);
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || v < 0.0) {
    throw PipelineError("bad edge threshold '" + text + "'");
  }
  return v;
}

JumpMode jump_mode_of(const std::string& name) {
  return name == "diagonal" ? JumpMode::Diagonal : JumpMode::Horizontal;
}

GrayImage crop_gray(const GrayImage& img, const Bbox& b) {
  GrayImage out(b.width(), b.height());
  for (int r = 0; r < b.height(); ++r) {
    for (int c = 0; c < b.width(); ++c) {
      out.at(r, c) = img.at(b.row0 + r, b.col0 + c);
    }
  }
  return out;
}

ColorImage crop_color(const ColorImage& img, const Bbox& b) {
  ColorImage out(b.width(), b.height());
  for (int r = 0; r < b.height(); ++r) {
    for (int c = 0; c < b.width(); ++c) {
      out.at(r, c) = img.at(b.row0 + r, b.col0 + c);
    }
  }
  return out;
}

BinaryImage tight_crop(const BinaryImage& img) {
  Bbox b;
  b.row0 = img.height();
  b.col0 = img.width();
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!img.at(r, c)) continue;
      b.row0 = std::min(b.row0, r);
      b.col0 = std::min(b.col0, c);
      b.row1 = std::max(b.row1, r);
      b.col1 = std::max(b.col1, c);
    }
  }
  if (b.row1 < b.row0) return img;  // blank: caller deals with it
  BinaryImage out(b.width(), b.height());
  for (int r = 0; r < b.height(); ++r) {
    for (int c = 0; c < b.width(); ++c) {
      out.at(r, c) = img.at(b.row0 + r, b.col0 + c);
    }
  }
  return out;
}

GrayImage edge_map_as_gray(const EdgeMap& em) {
  double peak = 0.0;
  for (double m : em.magnitudes) peak = std::max(peak, m);
  GrayImage out(em.width, em.height);
  if (peak <= 0.0) return out;
  for (int r = 0; r < em.height; ++r) {
    for (int c = 0; c < em.width; ++c) out.at(r, c) = em.at(r, c) / peak;
  }
  return out;
}

/// Per-stage artifact writer; inert when the directory name is empty.
class DebugSink {
 public:
  DebugSink(const std::string& dir, const std::string& source) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    base_ = dir + "/" + std::filesystem::path(source).stem().string();
    active_ = true;
  }

  bool active() const { return active_; }

  std::string path(const char* name) const { return base_ + "_" + name; }

  void gray(const char* name, const GrayImage& img) const {
    if (active_) write_pgm(path(name), img);
  }
  void binary(const char* name, const BinaryImage& img) const {
    if (active_) write_pgm(path(name), img);
  }
  void color(const char* name, const ColorImage& img) const {
    if (active_) write_ppm(path(name), img);
  }
  void text(const char* name, const std::string& body) const {
    if (!active_) return;
    std::ofstream out(path(name), std::ios::binary);
    out << body;
  }

 private:
  std::string base_;
  bool active_ = false;
};

void draw_box(ColorImage& img, const Bbox& b, Rgb color) {
  for (int c = b.col0; c <= b.col1; ++c) {
    img.at(b.row0, c) = color;
    img.at(b.row1, c) = color;
  }
  for (int r = b.row0; r <= b.row1; ++r) {
    img.at(r, b.col0) = color;
    img.at(r, b.col1) = color;
  }
}

ColorImage candidates_overlay(const BinaryImage& blobs,
                              const std::vector<PlateCandidate>& candidates,
                              const PlateCandidate* selected) {
  ColorImage out(blobs.width(), blobs.height());
  for (int r = 0; r < blobs.height(); ++r) {
    for (int c = 0; c < blobs.width(); ++c) {
      const std::uint8_t v = blobs.at(r, c) ? 96 : 0;
      out.at(r, c) = {v, v, v};
    }
  }
  for (const PlateCandidate& cand : candidates) {
    draw_box(out, cand.bbox,
             cand.accepted ? Rgb{255, 255, 0} : Rgb{255, 0, 0});
  }
  if (selected) draw_box(out, selected->bbox, Rgb{0, 255, 0});
  return out;
}

std::string projection_csv(const BinaryImage& bin) {
  const Projection rows = projection(bin, ProjectionAxis::Horizontal);
  const Projection cols = projection(bin, ProjectionAxis::Vertical);
  std::string out = "axis,index,count\n";
  for (std::size_t i = 0; i < rows.counts.size(); ++i) {
    out += "row," + std::to_string(i) + "," + std::to_string(rows.counts[i]) +
           "\n";
  }
  for (std::size_t i = 0; i < cols.counts.size(); ++i) {
    out += "col," + std::to_string(i) + "," + std::to_string(cols.counts[i]) +
           "\n";
  }
  return out;
}

}  // namespace

EdgeMap edge_map_for(const std::string& op, const BinaryImage& bin) {
  if (op == "sobel") return sobel_edges(bin, EdgeDirection::Both);
  if (op == "prewitt") {
    static const GradientKernel kx =
        make_kernel(3, 3, 1, 1, {-1, 0, 1, -1, 0, 1, -1, 0, 1});
    static const GradientKernel ky =
        make_kernel(3, 3, 1, 1, {-1, -1, -1, 0, 0, 0, 1, 1, 1});
    return kernel_magnitude(bin, kx, ky);
  }
  if (op == "roberts") {
    static const GradientKernel kx = make_kernel(2, 2, 0, 0, {1, 0, 0, -1});
    static const GradientKernel ky = make_kernel(2, 2, 0, 0, {0, 1, -1, 0});
    return kernel_magnitude(bin, kx, ky);
  }
  if (op == "log") {
    // 5x5 Laplacian-of-Gaussian sign-flipped so the center is positive;
    // the single-kernel form takes |response| anyway.
    static const GradientKernel k = make_kernel(
        5, 5, 2, 2, {0,  0,  -1, 0,  0,  0,  -1, -2, -1, 0,  -1, -2, 16,
                     -2, -1, 0,  -1, -2, -1, 0,  0,  0,  -1, 0,  0});
    return kernel_magnitude(bin, k);
  }
  throw PipelineError("unknown edge operator '" + op + "'");
}

PlateResult run_pipeline(const std::string& image_path,
                         const PipelineConfig& cfg, const KnnModel* model,
                         const PipelineOptions& opts) {
  config_validate(cfg);
  const DebugSink dbg(cfg.debug_dir, image_path);

  PlateResult res;
  res.source = image_path;
  const auto t_total = Clock::now();

  auto t = Clock::now();
  const ImageFile file = load_image(image_path);
  res.timings.read_us = since_us(t);

  t = Clock::now();
  const GrayImage gray = to_grayscale(file.color);
  const GrayImage smooth =
      gaussian_smooth(gray, cfg.gaussian_sigma, cfg.gaussian_radius);
  res.timings.preprocess_us = since_us(t);
  dbg.gray("01_gray.pgm", gray);
  dbg.gray("02_smooth.pgm", smooth);

  t = Clock::now();
  const BinaryImage bin = cfg.threshold_mode == "fixed"
                              ? fixed_threshold(smooth, cfg.threshold_fixed_value)
                              : adaptive_threshold(smooth);
  res.timings.threshold_us = since_us(t);
  dbg.binary("03_threshold.pgm", bin);

  t = Clock::now();
  const EdgeMap edges = edge_map_for(cfg.edges_operator, bin);
  const BinaryImage bin_edges =
      binarize_edges(edges, parse_edge_threshold(cfg.edges_threshold, edges));
  res.timings.edges_us = since_us(t);
  if (dbg.active()) {
    dbg.gray("04_edges.pgm", edge_map_as_gray(edges));
    dbg.binary("05_edges_bin.pgm", bin_edges);
  }

  t = Clock::now();
  const BinaryImage eroded = erode(
      bin_edges, StructuringElement::full_rect(cfg.erode_width,
                                               cfg.erode_height));
  const BinaryImage dilated = dilate(
      eroded, StructuringElement::full_rect(cfg.dilate_width,
                                            cfg.dilate_height));
  const BinaryImage blobs = fill_holes(dilated);
  const LabeledRegions regions = label_components(blobs, 8);
  res.timings.morphology_us = since_us(t);
  dbg.binary("06_blobs.pgm", blobs);

  t = Clock::now();
  CandidateGates gates;
  gates.jump_mode = jump_mode_of(cfg.jump_mode);
  gates.min_run = cfg.jump_min_run;
  gates.min_jumps = cfg.jump_min_count;
  gates.ar_lo = cfg.plate_ar_lo;
  gates.ar_hi = cfg.plate_ar_hi;
  gates.min_density = cfg.plate_min_density;
  const BinaryImage& jump_src = cfg.jump_source == "edges" ? bin_edges : bin;
  const std::optional<PlateCandidate> plate =
      select_plate(regions, jump_src, gates);

  if (dbg.active()) {
    const std::vector<PlateCandidate> all =
        score_candidates(regions, jump_src, gates);
    dbg.color("07_candidates.ppm",
              candidates_overlay(blobs, all, plate ? &*plate : nullptr));
  }

  if (!plate) {
    res.timings.locate_us = since_us(t);
    res.found = false;
    res.warnings.push_back("no plate candidate passed the gates");
    res.timings.total_us = since_us(t_total);
    return res;
  }

  res.found = true;
  res.bbox = plate->bbox;
  res.tilt_degrees = plate->tilt_degrees;
  const double applied_tilt =
      std::abs(plate->tilt_degrees) < cfg.plate_deskew_min
          ? 0.0
          : plate->tilt_degrees;
  GrayImage plate_gray = deskew(crop_gray(smooth, plate->bbox), applied_tilt);
  // The straightened plate sits centered in the expanded rotation canvas
  // and the swept-out corners are background. Cut back to the plate's own
  // extents so the stroke threshold is computed from plate pixels, not
  // from a corner-dominated mix.
  {
    const int pw = std::min(plate_gray.width(),
                            static_cast<int>(std::lround(plate->oriented_width)) + 6);
    const int ph = std::min(plate_gray.height(),
                            static_cast<int>(std::lround(plate->oriented_height)) + 6);
    const int pr = (plate_gray.height() - ph) / 2;
    const int pc = (plate_gray.width() - pw) / 2;
    GrayImage cut(pw, ph);
    for (int r = 0; r < ph; ++r) {
      for (int c = 0; c < pw; ++c) {
        cut.at(r, c) = plate_gray.at(pr + r, pc + c);
      }
    }
    plate_gray = std::move(cut);
  }
  res.timings.locate_us = since_us(t);
  dbg.gray("08_plate.pgm", plate_gray);

  t = Clock::now();
  SegmentParams sp;
  sp.noise_area = cfg.segment_noise_area;
  sp.min_h_frac = cfg.segment_min_h_frac;
  sp.aspect_lo = cfg.segment_aspect_lo;
  sp.aspect_hi = cfg.segment_aspect_hi;
  sp.min_stroke = cfg.segment_min_stroke;
  sp.wide_warn_ratio = cfg.segment_wide_warn_ratio;
  sp.reference_height = static_cast<int>(std::lround(plate->oriented_height));
  const BinaryImage strokes = prepare_plate(plate_gray, sp.noise_area);
  SegmentResult seg = segment_chars(strokes, sp);
  res.timings.segment_us = since_us(t);
  for (std::string& w : seg.warnings) res.warnings.push_back(std::move(w));
  if (dbg.active()) {
    dbg.binary("09_strokes.pgm", strokes);
    dbg.text("10_projection.csv", projection_csv(strokes));
    for (std::size_t i = 0; i < seg.glyphs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "11_glyph_%02zu.pgm", i);
      dbg.binary(name, seg.glyphs[i].pixels);
    }
  }

  t = Clock::now();
  if (opts.recognize && !seg.glyphs.empty()) {
    if (!model) {
      throw PipelineError(image_path + ": " +
                          std::to_string(seg.glyphs.size()) +
                          " glyphs segmented but no model is loaded");
    }
    for (const CharGlyph& g : seg.glyphs) {
      const FeatureVector fv =
          extract_features(g.pixels, cfg.features_normalize);
      const Classification c = classify(*model, fv);
      GlyphResult gr;
      gr.label = c.label;
      gr.confidence = c.mean_distance;
      gr.bbox = g.source_bbox;
      res.text += gr.label;
      res.glyphs.push_back(std::move(gr));
    }
  }
  res.timings.classify_us = since_us(t);

  t = Clock::now();
  const PlateType type =
      classify_plate_color(crop_color(file.color, plate->bbox),
                           cfg.color_bands());
  res.kind = type.kind;
  res.timings.color_us = since_us(t);

  res.timings.total_us = since_us(t_total);
  return res;
}

std::string result_record(const PlateResult& r) {
  std::string out;
  out += "source=" + r.source + "\n";
  out += std::string("found=") + (r.found ? "true" : "false") + "\n";
  if (r.found) {
    out += "plate.bbox=" + std::to_string(r.bbox.row0) + "," +
           std::to_string(r.bbox.col0) + "," + std::to_string(r.bbox.row1) +
           "," + std::to_string(r.bbox.col1) + "\n";
    out += "plate.tilt_degrees=" + format_double(r.tilt_degrees) + "\n";
    out += std::string("plate.kind=") + plate_kind_name(r.kind) + "\n";
  }
  out += "text=" + r.text + "\n";
  out += "glyph.count=" + std::to_string(r.glyphs.size()) + "\n";
  for (std::size_t i = 0; i < r.glyphs.size(); ++i) {
    const GlyphResult& g = r.glyphs[i];
    const std::string p = "glyph." + std::to_string(i) + ".";
    out += p + "label=" + g.label + "\n";
    out += p + "confidence=" + format_double(g.confidence) + "\n";
    out += p + "bbox=" + std::to_string(g.bbox.row0) + "," +
           std::to_string(g.bbox.col0) + "," + std::to_string(g.bbox.row1) +
           "," + std::to_string(g.bbox.col1) + "\n";
  }
  for (std::size_t i = 0; i < r.warnings.size(); ++i) {
    out += "warning." + std::to_string(i) + "=" + r.warnings[i] + "\n";
  }
  const StageTimings& ti = r.timings;
  out += "time.read_us=" + std::to_string(ti.read_us) + "\n";
  out += "time.preprocess_us=" + std::to_string(ti.preprocess_us) + "\n";
  out += "time.threshold_us=" + std::to_string(ti.threshold_us) + "\n";
  out += "time.edges_us=" + std::to_string(ti.edges_us) + "\n";
  out += "time.morphology_us=" + std::to_string(ti.morphology_us) + "\n";
  out += "time.locate_us=" + std::to_string(ti.locate_us) + "\n";
  out += "time.segment_us=" + std::to_string(ti.segment_us) + "\n";
  out += "time.classify_us=" + std::to_string(ti.classify_us) + "\n";
  out += "time.color_us=" + std::to_string(ti.color_us) + "\n";
  out += "time.total_us=" + std::to_string(ti.total_us) + "\n";
  return out;
}

KnnModel train_from_directory(const std::string& dir,
                              const PipelineConfig& cfg) {
  const std::vector<LabeledGlyph> raw = load_glyph_dataset(dir);
  std::vector<TrainingSample> samples;
  samples.reserve(raw.size());
  for (const LabeledGlyph& g : raw) {
    if (g.glyph.count_ones() == 0) continue;  // all-background image
    TrainingSample s;
    s.label = g.label;
    // Datasets store raw renders; reduce to the same tight-crop cell the
    // segmenter produces.
    s.glyph = normalize_glyph(tight_crop(g.glyph));
    samples.push_back(std::move(s));
  }
  if (samples.empty()) {
    throw PipelineError(dir + ": no usable glyphs in dataset");
  }
  return train(samples, cfg.knn_k, cfg.features_normalize);
}

}  // namespace lpr
