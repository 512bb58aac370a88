#include "lpr/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>

#include "lpr/font.hpp"
#include "lpr/image_io.hpp"
#include "lpr/locator.hpp"

namespace lpr {

namespace {

namespace fs = std::filesystem;

constexpr char kPlateHeader[] = "path,text,row0,col0,row1,col1,tilt_degrees,type";
constexpr char kGlyphHeader[] = "path,label";

// mt19937_64 with hand-rolled mappings; std::uniform_*_distribution is not
// bit-stable across standard libraries, and corpora must be.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int n) {
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }

 private:
  std::mt19937_64 eng_;
};

struct Mix {
  std::vector<std::string> kinds;
  std::vector<double> cumulative;  // normalized, last == 1
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_real(const std::string& text, const std::string& context) {
  double out = 0.0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e) {
    throw CorpusError(context + ": bad real '" + text + "'");
  }
  return out;
}

int parse_integer(const std::string& text, const std::string& context) {
  int out = 0;
  const char* b = text.data();
  const char* e = b + text.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || ptr != e) {
    throw CorpusError(context + ": bad integer '" + text + "'");
  }
  return out;
}

Mix parse_mix(const std::string& text) {
  Mix mix;
  std::istringstream in(text);
  std::string part;
  double total = 0.0;
  while (std::getline(in, part, ',')) {
    const std::size_t colon = part.find(':');
    if (colon == std::string::npos) {
      throw CorpusError("corpus.mix: expected kind:weight in '" + part + "'");
    }
    mix.kinds.push_back(trim(part.substr(0, colon)));
    total += parse_real(trim(part.substr(colon + 1)), "corpus.mix");
    mix.cumulative.push_back(total);
  }
  if (mix.kinds.empty() || total <= 0.0) {
    throw CorpusError("corpus.mix: no usable weights");
  }
  for (double& c : mix.cumulative) c /= total;
  return mix;
}

std::vector<double> parse_brightness(const std::string& text) {
  std::vector<double> levels;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    levels.push_back(parse_real(trim(part), "corpus.brightness"));
  }
  if (levels.empty()) throw CorpusError("corpus.brightness: empty list");
  return levels;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Rgb plate_rgb(const std::string& kind) {
  // Values sit comfortably inside the classifier's bands and leave the plate
  // brighter in luma than both the glyph ink and the background texture.
  if (kind == "yellow") return hsv_to_rgb({0.66, 0.5, 0.95});
  if (kind == "red") return hsv_to_rgb({0.87, 0.55, 0.8});
  if (kind == "white") return hsv_to_rgb({0.0, 0.05, 0.92});
  throw CorpusError("corpus.mix: unknown plate kind '" + kind + "'");
}

// Well below any plausible adaptive threshold even after smoothing spreads
// the surrounding plate field into thin strokes.
const Rgb kInk = hsv_to_rgb({0.0, 0.1, 0.05});

// Smooth value-noise backdrop: a coarse random lattice interpolated
// bilinearly, dark enough to stay under the adaptive threshold at every
// brightness level the generator emits.
ColorImage make_background(int width, int height, Rng& rng) {
  const int cell = 24;
  const int nx = width / cell + 2;
  const int ny = height / cell + 2;
  std::vector<double> lattice(static_cast<std::size_t>(nx * ny));
  for (double& v : lattice) v = rng.uniform();
  const double hue = rng.uniform();
  const double sat = rng.uniform(0.05, 0.25);

  ColorImage img(width, height);
  for (int r = 0; r < height; ++r) {
    const int gy = r / cell;
    const double fy = static_cast<double>(r % cell) / cell;
    for (int c = 0; c < width; ++c) {
      const int gx = c / cell;
      const double fx = static_cast<double>(c % cell) / cell;
      const double v00 = lattice[static_cast<std::size_t>(gy * nx + gx)];
      const double v01 = lattice[static_cast<std::size_t>(gy * nx + gx + 1)];
      const double v10 = lattice[static_cast<std::size_t>((gy + 1) * nx + gx)];
      const double v11 =
          lattice[static_cast<std::size_t>((gy + 1) * nx + gx + 1)];
      const double n = (1 - fy) * ((1 - fx) * v00 + fx * v01) +
                       fy * ((1 - fx) * v10 + fx * v11);
      img.at(r, c) = hsv_to_rgb({hue, sat, 0.10 + 0.06 * n});
    }
  }
  return img;
}

ColorImage render_plate(const std::string& text, int scale, const Rgb& field,
                        bool bold) {
  const int margin = 8;
  // Wide enough that thresholding the plate crop never bleeds neighboring
  // characters together, narrow enough that the locator's dilation still
  // bridges adjacent glyph rails into one blob.
  const int gap = 6;
  const int n = static_cast<int>(text.size());
  const int width = 2 * margin + n * kFontCols * scale + (n - 1) * gap;
  const int height = kFontRows * scale + 2 * margin;
  ColorImage img(width, height, field);
  int x = margin;
  for (char ch : text) {
    const BinaryImage glyph = render_glyph(ch, scale, bold);
    for (int r = 0; r < glyph.height(); ++r) {
      for (int c = 0; c < glyph.width(); ++c) {
        if (glyph.at(r, c)) img.at(margin + r, x + c) = kInk;
      }
    }
    x += kFontCols * scale + gap;
  }
  return img;
}

std::uint8_t clamp_channel(double v) {
  return static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
}

void check_alphabet(const std::string& labels) {
  for (char ch : labels) {
    if (!font_has(ch)) {
      throw CorpusError(std::string("corpus.labels: no font glyph for '") +
                        ch + "'");
    }
  }
}

CorpusManifest generate_plates(const PipelineConfig& cfg,
                               const std::string& out_dir) {
  check_alphabet(cfg.corpus_labels);
  const Mix mix = parse_mix(cfg.corpus_mix);
  const std::vector<double> levels = parse_brightness(cfg.corpus_brightness);
  Rng rng(cfg.corpus_seed);

  CorpusManifest mf;
  mf.kind = "plates";
  for (int i = 0; i < cfg.corpus_count; ++i) {
    std::string text;
    for (int t = 0; t < cfg.corpus_text_len; ++t) {
      text += cfg.corpus_labels[static_cast<std::size_t>(
          rng.below(static_cast<int>(cfg.corpus_labels.size())))];
    }
    const int scale = 3 + rng.below(2);
    const double pick = rng.uniform();
    std::size_t ki = 0;
    while (ki + 1 < mix.cumulative.size() && pick >= mix.cumulative[ki]) ++ki;
    const std::string& kind = mix.kinds[ki];
    const double tilt = rng.uniform(cfg.corpus_tilt_min, cfg.corpus_tilt_max);

    const ColorImage plate =
        render_plate(text, scale, plate_rgb(kind), cfg.corpus_font == "bold");
    ColorImage canvas = make_background(cfg.corpus_width, cfg.corpus_height, rng);

    const double rad = tilt * std::numbers::pi / 180.0;
    const double ca = std::cos(rad);
    const double sa = std::sin(rad);
    const double hw = plate.width() / 2.0;
    const double hh = plate.height() / 2.0;
    const int ex = static_cast<int>(
        std::ceil(hw * std::abs(ca) + hh * std::abs(sa)));
    const int ey = static_cast<int>(
        std::ceil(hw * std::abs(sa) + hh * std::abs(ca)));
    const int rlo = ey + 4;
    const int rhi = cfg.corpus_height - 1 - ey - 4;
    const int clo = ex + 4;
    const int chi = cfg.corpus_width - 1 - ex - 4;
    if (rhi < rlo || chi < clo) {
      throw CorpusError("corpus canvas too small for the plate (plate " +
                        std::to_string(plate.width()) + "x" +
                        std::to_string(plate.height()) + ", canvas " +
                        std::to_string(cfg.corpus_width) + "x" +
                        std::to_string(cfg.corpus_height) + ")");
    }
    const int cy = rlo + rng.below(rhi - rlo + 1);
    const int cx = clo + rng.below(chi - clo + 1);

    // Inverse-mapped composite; the tight truth box comes from the pixels
    // that actually landed.
    int r0 = cfg.corpus_height, c0 = cfg.corpus_width, r1 = -1, c1 = -1;
    for (int r = cy - ey; r <= cy + ey; ++r) {
      for (int c = cx - ex; c <= cx + ex; ++c) {
        if (r < 0 || c < 0 || r >= canvas.height() || c >= canvas.width()) {
          continue;
        }
        const double dy = r - cy;
        const double dx = c - cx;
        const int sx = static_cast<int>(std::floor(dx * ca + dy * sa + hw));
        const int sy = static_cast<int>(std::floor(-dx * sa + dy * ca + hh));
        if (sx < 0 || sy < 0 || sx >= plate.width() || sy >= plate.height()) {
          continue;
        }
        canvas.at(r, c) = plate.at(sy, sx);
        r0 = std::min(r0, r);
        c0 = std::min(c0, c);
        r1 = std::max(r1, r);
        c1 = std::max(c1, c);
      }
    }

    const double level = levels[static_cast<std::size_t>(i) % levels.size()];
    if (level != 1.0) {
      for (int r = 0; r < canvas.height(); ++r) {
        for (int c = 0; c < canvas.width(); ++c) {
          Rgb& p = canvas.at(r, c);
          p.r = clamp_channel(std::lround(p.r * level));
          p.g = clamp_channel(std::lround(p.g * level));
          p.b = clamp_channel(std::lround(p.b * level));
        }
      }
    }
    if (cfg.corpus_noise > 0.0) {
      for (int r = 0; r < canvas.height(); ++r) {
        for (int c = 0; c < canvas.width(); ++c) {
          const double d =
              255.0 * cfg.corpus_noise * 0.3 * rng.uniform(-1.0, 1.0);
          Rgb& p = canvas.at(r, c);
          p.r = clamp_channel(std::lround(p.r + d));
          p.g = clamp_channel(std::lround(p.g + d));
          p.b = clamp_channel(std::lround(p.b + d));
        }
      }
    }

    char name[32];
    std::snprintf(name, sizeof name, "img_%04d.ppm", i);
    write_ppm((fs::path(out_dir) / name).string(), canvas);
    mf.plates.push_back(
        {name, text, Bbox{r0, c0, r1, c1}, tilt, kind});
  }
  return mf;
}

double luma(const Rgb& p) {
  return (0.299 * p.r + 0.587 * p.g + 0.114 * p.b) / 255.0;
}

// Same inverse-mapped nearest-neighbour rotation the plate compositor uses,
// on a canvas big enough for the turned patch.
ColorImage rotate_patch(const ColorImage& src, double degrees,
                        const Rgb& fill) {
  const double rad = degrees * std::numbers::pi / 180.0;
  const double ca = std::cos(rad);
  const double sa = std::sin(rad);
  const double hw = src.width() / 2.0;
  const double hh = src.height() / 2.0;
  const int ex =
      static_cast<int>(std::ceil(hw * std::abs(ca) + hh * std::abs(sa)));
  const int ey =
      static_cast<int>(std::ceil(hw * std::abs(sa) + hh * std::abs(ca)));
  ColorImage out(2 * ex, 2 * ey, fill);
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) {
      const double dy = r - ey;
      const double dx = c - ex;
      const int sx = static_cast<int>(std::floor(dx * ca + dy * sa + hw));
      const int sy = static_cast<int>(std::floor(-dx * sa + dy * ca + hh));
      if (sx >= 0 && sy >= 0 && sx < src.width() && sy < src.height()) {
        out.at(r, c) = src.at(sy, sx);
      }
    }
  }
  return out;
}

// One dataset sample's rendering knobs. The fatten fraction is where the
// ink-to-field transition is cut when re-binarizing, sweeping the stroke
// widths that adaptive thresholds produce across plate colors, exposures
// and crop framings; tilt bakes in the shear and staircase marks that
// straightening a turned plate leaves behind; dscale widens the size range.
struct GlyphVariant {
  double fatten;
  double tilt;
  int dscale;
};

constexpr GlyphVariant kGlyphVariants[] = {
    // Upright, both plate scales. The fractions crowd toward the top of the
    // range because stroke gaps start closing there and small threshold
    // shifts change the shapes fastest.
    {0.66, 0.0, 0}, {0.74, 0.0, 0}, {0.80, 0.0, 0},
    {0.84, 0.0, 0}, {0.87, 0.0, 0}, {0.90, 0.0, 0},
    {0.66, 0.0, 1}, {0.74, 0.0, 1}, {0.80, 0.0, 1},
    {0.84, 0.0, 1}, {0.87, 0.0, 1}, {0.90, 0.0, 1},
    // Turned both ways at both scales.
    {0.70, 20.0, 0},  {0.77, 20.0, 0},  {0.84, 20.0, 0},
    {0.70, 20.0, 1},  {0.77, 20.0, 1},  {0.84, 20.0, 1},
    {0.70, -20.0, 0}, {0.77, -20.0, 0}, {0.84, -20.0, 0},
    {0.70, -20.0, 1}, {0.77, -20.0, 1}, {0.84, -20.0, 1},
};
constexpr int kGlyphVariantCount =
    static_cast<int>(std::size(kGlyphVariants));

// Dataset samples mimic what the recognizer actually sees: strokes on a
// plate field, blurred by the preprocessing filter, then re-binarized; raw
// font masters would sit a constant stroke width away from every segmented
// crop.
BinaryImage photographed_glyph(char ch, int scale, int variant,
                               const PipelineConfig& cfg) {
  const BinaryImage raw = render_glyph(ch, scale, false);
  const int m = 8;
  const Rgb field = plate_rgb("yellow");
  ColorImage flat(raw.width() + 2 * m, raw.height() + 2 * m, field);
  for (int r = 0; r < raw.height(); ++r) {
    for (int c = 0; c < raw.width(); ++c) {
      if (raw.at(r, c)) flat.at(m + r, m + c) = kInk;
    }
  }

  const GlyphVariant& v = kGlyphVariants[variant % kGlyphVariantCount];
  GrayImage gray;
  if (v.tilt == 0.0) {
    gray = gaussian_smooth(to_grayscale(flat), cfg.gaussian_sigma,
                           cfg.gaussian_radius);
  } else {
    gray = deskew(
        gaussian_smooth(to_grayscale(rotate_patch(flat, v.tilt, field)),
                        cfg.gaussian_sigma, cfg.gaussian_radius),
        v.tilt);
  }
  const double ink = luma(kInk);
  const BinaryImage mask = complement(
      fixed_threshold(gray, ink + v.fatten * (luma(field) - ink)));

  // Center crop so every variant shares deterministic dimensions.
  const int cw = raw.width() + 8;
  const int ch2 = raw.height() + 8;
  const int r0 = (mask.height() - ch2) / 2;
  const int c0 = (mask.width() - cw) / 2;
  BinaryImage out(cw, ch2);
  for (int r = 0; r < ch2; ++r) {
    for (int c = 0; c < cw; ++c) {
      out.at(r, c) = mask.at(r0 + r, c0 + c);
    }
  }
  return out;
}

CorpusManifest generate_glyphs(const PipelineConfig& cfg,
                               const std::string& out_dir) {
  check_alphabet(cfg.corpus_labels);
  Rng rng(cfg.corpus_seed);
  CorpusManifest mf;
  mf.kind = "glyphs";
  for (char ch : cfg.corpus_labels) {
    const std::string label(1, ch);
    fs::create_directories(fs::path(out_dir) / label);
    for (int i = 0; i < cfg.corpus_samples_per_label; ++i) {
      // Each index gets its own fattening/tilt/scale triple so the
      // letterboxed 60x30 rasterizations differ across samples.
      const int scale = 3 + kGlyphVariants[i % kGlyphVariantCount].dscale +
                        2 * ((i / kGlyphVariantCount) % 2);
      BinaryImage glyph = photographed_glyph(ch, scale, i, cfg);
      if (cfg.corpus_noise > 0.0) {
        for (int r = 0; r < glyph.height(); ++r) {
          for (int c = 0; c < glyph.width(); ++c) {
            if (rng.uniform() < cfg.corpus_noise * 0.05) {
              glyph.at(r, c) = glyph.at(r, c) ? 0 : 1;
            }
          }
        }
      }
      char name[32];
      std::snprintf(name, sizeof name, "g%04d.pgm", i);
      const std::string rel = label + "/" + name;
      write_pgm((fs::path(out_dir) / rel).string(), glyph);
      mf.glyphs.push_back({rel, label});
    }
  }
  return mf;
}

void write_manifest(const CorpusManifest& mf, const std::string& out_dir) {
  const std::string path = (fs::path(out_dir) / "manifest.csv").string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CorpusError(path + ": cannot write");
  if (mf.kind == "plates") {
    out << kPlateHeader << '\n';
    for (const PlateTruth& t : mf.plates) {
      out << t.path << ',' << t.text << ',' << t.bbox.row0 << ','
          << t.bbox.col0 << ',' << t.bbox.row1 << ',' << t.bbox.col1 << ','
          << format_real(t.tilt_degrees) << ',' << t.type << '\n';
    }
  } else {
    out << kGlyphHeader << '\n';
    for (const GlyphTruth& t : mf.glyphs) {
      out << t.path << ',' << t.label << '\n';
    }
  }
  out.close();
  if (!out) throw CorpusError(path + ": write failed");
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

CorpusManifest generate_corpus(const PipelineConfig& cfg,
                               const std::string& out_dir) {
  config_validate(cfg);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw CorpusError(out_dir + ": cannot create directory");
  CorpusManifest mf = cfg.corpus_kind == "plates"
                          ? generate_plates(cfg, out_dir)
                          : generate_glyphs(cfg, out_dir);
  write_manifest(mf, out_dir);
  return mf;
}

CorpusManifest load_manifest(const std::string& dir) {
  const std::string path = (fs::path(dir) / "manifest.csv").string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(path + ": cannot open");

  auto fail = [&](int line_no, const std::string& msg) {
    throw CorpusError(path + ":" + std::to_string(line_no) + ": " + msg);
  };

  std::string line;
  if (!std::getline(in, line)) fail(1, "empty manifest");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  CorpusManifest mf;
  int line_no = 1;
  if (line == kPlateHeader) {
    mf.kind = "plates";
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::vector<std::string> f = split_csv(line);
      if (f.size() != 8) fail(line_no, "expected 8 fields");
      const std::string ctx = path + ":" + std::to_string(line_no);
      PlateTruth t;
      t.path = f[0];
      t.text = f[1];
      t.bbox = Bbox{parse_integer(f[2], ctx), parse_integer(f[3], ctx),
                    parse_integer(f[4], ctx), parse_integer(f[5], ctx)};
      t.tilt_degrees = parse_real(f[6], ctx);
      t.type = f[7];
      mf.plates.push_back(std::move(t));
    }
  } else if (line == kGlyphHeader) {
    mf.kind = "glyphs";
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::vector<std::string> f = split_csv(line);
      if (f.size() != 2) fail(line_no, "expected 2 fields");
      mf.glyphs.push_back({f[0], f[1]});
    }
  } else {
    fail(1, "unrecognized manifest header");
  }
  return mf;
}

std::vector<LabeledGlyph> load_glyph_dataset(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw CorpusError(dir + ": not a directory");
  }
  std::vector<std::string> labels;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory()) {
      labels.push_back(entry.path().filename().string());
    }
  }
  std::sort(labels.begin(), labels.end());

  std::vector<LabeledGlyph> out;
  for (const std::string& label : labels) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(fs::path(dir) / label)) {
      if (!entry.is_regular_file()) continue;
      const std::string ext = entry.path().extension().string();
      if (ext == ".pgm" || ext == ".ppm" || ext == ".png") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    for (const std::string& file : files) {
      try {
        const ImageFile img = load_image(file);
        out.push_back({label, fixed_threshold(to_grayscale(img.color), 0.5),
                       file});
      } catch (const std::exception& e) {
        throw CorpusError(file + ": " + e.what());
      }
    }
  }
  if (out.empty()) {
    throw CorpusError(dir + ": no glyph images found");
  }
  return out;
}

}  // namespace lpr
