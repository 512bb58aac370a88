#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include <doctest.h>

#include "lpr/config.hpp"

using namespace lpr;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    static int n = 0;
    path = fs::temp_directory_path() /
           ("lpr_cfg_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("defaults are exposed through get") {
  PipelineConfig cfg;
  CHECK(config_get(cfg, "gaussian.sigma") == "1");
  CHECK(config_get(cfg, "gaussian.radius") == "2");
  CHECK(config_get(cfg, "threshold.mode") == "adaptive");
  CHECK(config_get(cfg, "threshold.fixed_value") == "0.4");
  CHECK(config_get(cfg, "edges.operator") == "sobel");
  CHECK(config_get(cfg, "morph.erode_height") == "3");
  CHECK(config_get(cfg, "morph.dilate_width") == "15");
  CHECK(config_get(cfg, "jump.min_run") == "12");
  CHECK(config_get(cfg, "jump.min_count") == "15");
  CHECK(config_get(cfg, "plate.ar_lo") == "2");
  CHECK(config_get(cfg, "plate.ar_hi") == "6");
  CHECK(config_get(cfg, "plate.min_density") == "0.5");
  CHECK(config_get(cfg, "segment.noise_area") == "15");
  CHECK(config_get(cfg, "knn.k") == "1");
  CHECK(config_get(cfg, "features.normalize") == "false");
  CHECK(config_get(cfg, "color.red_h_lo") == "0.8");
  CHECK(config_get(cfg, "eval.iou") == "0.5");
  CHECK(config_get(cfg, "eval.workers") == "0");
  CHECK(config_get(cfg, "debug.dir") == "");
}

TEST_CASE("set parses and stores every field kind") {
  PipelineConfig cfg;
  config_set(cfg, "gaussian.sigma", "2.5");
  CHECK(cfg.gaussian_sigma == 2.5);
  config_set(cfg, "gaussian.radius", "3");
  CHECK(cfg.gaussian_radius == 3);
  config_set(cfg, "threshold.mode", "fixed");
  CHECK(cfg.threshold_mode == "fixed");
  config_set(cfg, "features.normalize", "true");
  CHECK(cfg.features_normalize);
  config_set(cfg, "features.normalize", "0");
  CHECK_FALSE(cfg.features_normalize);
  config_set(cfg, "corpus.seed", "18446744073709551615");
  CHECK(cfg.corpus_seed == 18446744073709551615ULL);
  config_set(cfg, "debug.dir", "/tmp/stages");
  CHECK(cfg.debug_dir == "/tmp/stages");
  config_set(cfg, "edges.threshold", "1.25");
  CHECK(cfg.edges_threshold == "1.25");
  config_set(cfg, "edges.threshold", "auto");
  CHECK(cfg.edges_threshold == "auto");
}

TEST_CASE("unknown keys and bad values are rejected") {
  PipelineConfig cfg;
  CHECK_THROWS_AS(config_set(cfg, "gaussian.sgima", "1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "", "1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "gaussian.sigma", "abc"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "gaussian.sigma", "1.5x"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "gaussian.sigma", ""), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "gaussian.sigma", "-1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "gaussian.radius", "0"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "gaussian.radius", "2.5"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "threshold.mode", "otsu"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "threshold.fixed_value", "1.01"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "plate.min_density", "-0.1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "knn.k", "0"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "features.normalize", "yes"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "edges.threshold", "-2"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "edges.operator", "canny"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "corpus.seed", "-1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "corpus.labels", ""), ConfigError);

  // Structuring element sizes must stay odd.
  CHECK_THROWS_AS(config_set(cfg, "morph.erode_height", "4"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "morph.dilate_width", "14"), ConfigError);
  config_set(cfg, "morph.dilate_width", "17");
  CHECK(cfg.dilate_width == 17);

  // Failed assignments must not clobber previous values.
  CHECK(cfg.gaussian_sigma == 1.0);
}

TEST_CASE("mix and brightness lists are validated") {
  PipelineConfig cfg;
  config_set(cfg, "corpus.mix", "red:1");
  config_set(cfg, "corpus.mix", "yellow:0.5,white:0.25,red:0.25");
  CHECK_THROWS_AS(config_set(cfg, "corpus.mix", "blue:1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "corpus.mix", "red"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "corpus.mix", "red:-1"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "corpus.mix", "red:0,white:0"), ConfigError);

  config_set(cfg, "corpus.brightness", "0.55,1,1.45");
  CHECK(cfg.corpus_brightness == "0.55,1,1.45");
  CHECK_THROWS_AS(config_set(cfg, "corpus.brightness", "0"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "corpus.brightness", "1,oops"), ConfigError);
  CHECK_THROWS_AS(config_set(cfg, "corpus.brightness", "2.5"), ConfigError);
}

TEST_CASE("serialize emits every key once and round-trips") {
  PipelineConfig cfg;
  config_set(cfg, "gaussian.sigma", "0.75");
  config_set(cfg, "jump.mode", "diagonal");
  config_set(cfg, "corpus.count", "123");
  const std::string text = config_serialize(cfg);

  std::set<std::string> seen;
  PipelineConfig parsed;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    const std::string line = text.substr(start, end - start);
    start = end + 1;
    const std::size_t eq = line.find('=');
    REQUIRE(eq != std::string::npos);
    const std::string key = line.substr(0, eq);
    CHECK(seen.insert(key).second);
    config_set(parsed, key, line.substr(eq + 1));
  }
  CHECK(seen.size() == config_keys().size());
  CHECK(config_serialize(parsed) == text);
  CHECK(parsed.gaussian_sigma == 0.75);
  CHECK(parsed.jump_mode == "diagonal");
  CHECK(parsed.corpus_count == 123);
}

TEST_CASE("config files parse with comments and report line numbers") {
  TempDir dir;
  const fs::path good = dir.path / "good.conf";
  {
    std::ofstream out(good);
    out << "# pipeline overrides\n";
    out << "\n";
    out << "gaussian.sigma = 1.5   # trailing comment\n";
    out << "knn.k=3\n";
    out << "  jump.mode =  diagonal\n";
  }
  PipelineConfig cfg;
  config_load_file(cfg, good.string());
  CHECK(cfg.gaussian_sigma == 1.5);
  CHECK(cfg.knn_k == 3);
  CHECK(cfg.jump_mode == "diagonal");

  const fs::path bad = dir.path / "bad.conf";
  {
    std::ofstream out(bad);
    out << "knn.k=2\n";
    out << "gaussian.sigma\n";
  }
  try {
    config_load_file(cfg, bad.string());
    FAIL_CHECK("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(bad.string() + ":2") !=
          std::string::npos);
  }

  const fs::path bad2 = dir.path / "bad2.conf";
  {
    std::ofstream out(bad2);
    out << "\n\nknn.k=zero\n";
  }
  try {
    config_load_file(cfg, bad2.string());
    FAIL_CHECK("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(bad2.string() + ":3") !=
          std::string::npos);
  }

  CHECK_THROWS_AS(config_load_file(cfg, (dir.path / "missing.conf").string()),
                  ConfigError);
}

TEST_CASE("validate catches inverted intervals") {
  PipelineConfig cfg;
  config_validate(cfg);  // defaults are coherent
  config_set(cfg, "plate.ar_lo", "7");
  CHECK_THROWS_AS(config_validate(cfg), ConfigError);
  config_set(cfg, "plate.ar_lo", "2");
  config_validate(cfg);
  config_set(cfg, "corpus.tilt_min", "10");
  config_set(cfg, "corpus.tilt_max", "-10");
  CHECK_THROWS_AS(config_validate(cfg), ConfigError);
}

TEST_CASE("color bands copy into the classifier struct") {
  PipelineConfig cfg;
  config_set(cfg, "color.white_v_min", "0.75");
  config_set(cfg, "color.red_h_hi", "0.9");
  const ColorBands bands = cfg.color_bands();
  CHECK(bands.white_v_min == 0.75);
  CHECK(bands.red_h_hi == 0.9);
  CHECK(bands.yellow_h_lo == 0.58);
  CHECK(bands.chroma_s_min == 0.45);
}
