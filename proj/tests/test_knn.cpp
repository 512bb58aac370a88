#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>

#include "lpr/features.hpp"
#include "lpr/knn.hpp"
#include "test_util.hpp"

using namespace lpr;

namespace {

namespace fs = std::filesystem;

FeatureVector fv_from(std::initializer_list<double> head) {
  FeatureVector fv{};
  int i = 0;
  for (double v : head) fv.values[i++] = v;
  return fv;
}

FeatureVector random_fv(std::mt19937_64& rng) {
  FeatureVector fv{};
  for (double& v : fv.values) {
    v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * 12.0;
  }
  return fv;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lpr_knn_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

std::string write_lines(const fs::path& p, const std::vector<std::string>& lines) {
  std::ofstream out(p, std::ios::binary);
  for (const auto& l : lines) out << l << '\n';
  out.close();
  return p.string();
}

}  // namespace

TEST_CASE("euclidean distance basics") {
  FeatureVector a = fv_from({0.0, 0.0});
  FeatureVector b = fv_from({3.0, 4.0});
  CHECK(euclidean(a, b) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(euclidean(a, a) == 0.0);
  std::vector<double> short_vec{1.0, 2.0};
  std::vector<double> long_vec{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(euclidean(short_vec, long_vec), std::invalid_argument);

  std::mt19937_64 rng(901);
  for (int iter = 0; iter < 500; ++iter) {
    FeatureVector x = random_fv(rng);
    FeatureVector y = random_fv(rng);
    double sum = 0.0;
    for (int i = 0; i < kFeatureCount; ++i) {
      const double d = x.values[i] - y.values[i];
      sum += d * d;
    }
    CHECK(euclidean(x, y) == doctest::Approx(std::sqrt(sum)).epsilon(1e-12));
    CHECK(euclidean(x, y) == doctest::Approx(euclidean(y, x)).epsilon(1e-15));
  }
}

TEST_CASE("k=1 classification matches brute-force nearest neighbour") {
  std::mt19937_64 rng(902);
  const std::vector<std::string> labels{"0", "1", "2", "3", "4",
                                        "5", "6", "7", "8", "9"};
  for (int iter = 0; iter < 200; ++iter) {
    KnnModel model;
    model.k = 1;
    const int n = 5 + static_cast<int>(rng() % 40);
    for (int i = 0; i < n; ++i) {
      model.entries.push_back({labels[rng() % labels.size()], random_fv(rng)});
    }
    for (int probe = 0; probe < 10; ++probe) {
      FeatureVector q = random_fv(rng);
      std::size_t best = 0;
      double best_d = euclidean(q, model.entries[0].features);
      for (std::size_t i = 1; i < model.entries.size(); ++i) {
        const double d = euclidean(q, model.entries[i].features);
        if (d < best_d) {
          best_d = d;
          best = i;
        }
      }
      Classification got = classify(model, q);
      CHECK(got.label == model.entries[best].label);
      CHECK(got.votes == 1);
      CHECK(got.mean_distance == doctest::Approx(best_d).epsilon(1e-12));
    }
  }
}

TEST_CASE("equidistant neighbours rank by entry order") {
  KnnModel model;
  model.k = 1;
  FeatureVector probe = fv_from({0.0});
  model.entries.push_back({"far", fv_from({2.0})});
  model.entries.push_back({"first", fv_from({1.0})});
  model.entries.push_back({"second", fv_from({-1.0})});  // same distance as "first"
  CHECK(classify(model, probe).label == "first");
}

TEST_CASE("k=2 with two different labels falls back to the nearest") {
  KnnModel model;
  model.k = 2;
  model.entries.push_back({"A", fv_from({1.0})});
  model.entries.push_back({"B", fv_from({3.0})});
  model.entries.push_back({"B", fv_from({9.0})});
  Classification got = classify(model, fv_from({0.0}));
  CHECK(got.label == "A");
  CHECK(got.votes == 1);
  CHECK(got.mean_distance == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("k=3 majority vote wins over a closer singleton") {
  KnnModel model;
  model.k = 3;
  model.entries.push_back({"lone", fv_from({0.5})});
  model.entries.push_back({"pair", fv_from({1.0})});
  model.entries.push_back({"pair", fv_from({1.5})});
  model.entries.push_back({"ignored", fv_from({50.0})});
  Classification got = classify(model, fv_from({0.0}));
  CHECK(got.label == "pair");
  CHECK(got.votes == 2);
  CHECK(got.mean_distance == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("classification is invariant to entry permutation when distances differ") {
  std::mt19937_64 rng(903);
  for (int iter = 0; iter < 100; ++iter) {
    std::vector<KnnEntry> entries;
    for (int i = 0; i < 12; ++i) {
      entries.push_back({std::string(1, static_cast<char>('a' + i % 4)),
                         random_fv(rng)});
    }
    FeatureVector q = random_fv(rng);
    KnnModel m1;
    m1.k = 3;
    m1.entries = entries;
    Classification base = classify(m1, q);
    std::shuffle(entries.begin(), entries.end(), rng);
    KnnModel m2;
    m2.k = 3;
    m2.entries = entries;
    Classification got = classify(m2, q);
    CHECK(got.label == base.label);
    CHECK(got.votes == base.votes);
    CHECK(got.mean_distance == doctest::Approx(base.mean_distance).epsilon(1e-12));
  }
}

TEST_CASE("classify validates its inputs") {
  KnnModel empty;
  empty.k = 1;
  CHECK_THROWS_AS(classify(empty, FeatureVector{}), std::invalid_argument);
  KnnModel tiny;
  tiny.k = 5;
  tiny.entries.push_back({"x", FeatureVector{}});
  CHECK_THROWS_AS(classify(tiny, FeatureVector{}), std::invalid_argument);
}

TEST_CASE("train records one entry per sample in order") {
  BinaryImage g1(kGlyphCols, kGlyphRows);
  g1.at(5, 5) = 1;
  BinaryImage g2(kGlyphCols, kGlyphRows);
  for (int r = 0; r < 60; ++r) g2.at(r, 2) = 1;
  std::vector<TrainingSample> samples{{"7", g1}, {"7", g1}, {"1", g2}};
  KnnModel model = train(samples, 2);
  CHECK(model.k == 2);
  REQUIRE(model.entries.size() == 3);
  CHECK(model.entries[0].label == "7");
  CHECK(model.entries[1].label == "7");
  CHECK(model.entries[2].label == "1");
  CHECK(model.entries[0].features == model.entries[1].features);
  CHECK(model.entries[0].features == extract_features(g1));
  CHECK(model.label_set() == std::vector<std::string>{"1", "7"});

  CHECK_THROWS_AS(train({}, 1), std::invalid_argument);
  CHECK_THROWS_AS(train(samples, 0), std::invalid_argument);
}

TEST_CASE("model files round-trip bit for bit") {
  std::mt19937_64 rng(904);
  KnnModel model;
  model.k = 3;
  const std::vector<std::string> labels{"0", "7", "\xD9\xA5", "two words",
                                        "B"};
  for (int i = 0; i < 40; ++i) {
    model.entries.push_back({labels[i % labels.size()], random_fv(rng)});
  }
  // Exercise awkward doubles explicitly.
  model.entries[0].features.values[0] = 0.1;
  model.entries[0].features.values[1] = 1.0 / 3.0;
  model.entries[0].features.values[2] = 12.727922061357855;
  model.entries[0].features.values[3] = 0.0;
  model.entries[0].features.values[4] = 1e-17;

  TempDir dir;
  const std::string path = (dir.path / "model.knn").string();
  save_model(model, path);
  KnnModel loaded = load_model(path);
  CHECK(loaded.k == model.k);
  REQUIRE(loaded.entries.size() == model.entries.size());
  for (std::size_t i = 0; i < model.entries.size(); ++i) {
    CHECK(loaded.entries[i].label == model.entries[i].label);
    for (int j = 0; j < kFeatureCount; ++j) {
      // Bit-exact: shortest round-trip formatting must reproduce the double.
      CHECK(loaded.entries[i].features.values[j] ==
            model.entries[i].features.values[j]);
    }
  }
}

TEST_CASE("save_model rejects unserializable labels") {
  TempDir dir;
  KnnModel model;
  model.k = 1;
  model.entries.push_back({"", FeatureVector{}});
  CHECK_THROWS_AS(save_model(model, (dir.path / "a").string()), ModelError);
  model.entries[0].label = "a\tb";
  CHECK_THROWS_AS(save_model(model, (dir.path / "b").string()), ModelError);
  model.entries[0].label = "ab]c";
  CHECK_THROWS_AS(save_model(model, (dir.path / "c").string()), ModelError);
}

TEST_CASE("malformed model files are rejected with line numbers") {
  TempDir dir;
  const std::string feat_zeros = [] {
    std::string s;
    for (int i = 0; i < kFeatureCount; ++i) {
      if (i) s += ' ';
      s += '0';
    }
    return s;
  }();

  auto expect_error = [&](const std::string& name,
                          const std::vector<std::string>& lines,
                          const std::string& want_line) {
    const std::string path = write_lines(dir.path / name, lines);
    try {
      load_model(path);
      FAIL_CHECK("expected ModelError for " << name);
    } catch (const ModelError& e) {
      const std::string msg = e.what();
      CHECK(msg.find(path + ":" + want_line) != std::string::npos);
    }
  };

  expect_error("magic.knn", {"nn-model v1 k=1 n=1", "0\t" + feat_zeros}, "1");
  expect_error("version.knn", {"knn-model v2 k=1 n=1", "0\t" + feat_zeros}, "1");
  expect_error("badk.knn", {"knn-model v1 k=zero n=1", "0\t" + feat_zeros}, "1");
  expect_error("notab.knn", {"knn-model v1 k=1 n=1", "0 " + feat_zeros}, "2");
  expect_error("badreal.knn",
               {"knn-model v1 k=1 n=1", "0\t0 0 frog" + feat_zeros.substr(5)},
               "2");
  expect_error("shortrow.knn", {"knn-model v1 k=1 n=1", "0\t0 0 0"}, "2");
  expect_error("count.knn", {"knn-model v1 k=1 n=2", "0\t" + feat_zeros}, "3");
  expect_error("bracket.knn",
               {"knn-model v1 k=1 n=1", "[oops\t" + feat_zeros}, "2");
  expect_error("blankmid.knn",
               {"knn-model v1 k=1 n=2", "", "0\t" + feat_zeros,
                "1\t" + feat_zeros},
               "2");
  CHECK_THROWS_AS(load_model((dir.path / "missing.knn").string()), ModelError);
}

TEST_CASE("a trained model survives a save/load round trip functionally") {
  std::mt19937_64 rng(905);
  std::vector<TrainingSample> samples;
  for (int digit = 0; digit < 4; ++digit) {
    for (int rep = 0; rep < 3; ++rep) {
      BinaryImage g(kGlyphCols, kGlyphRows);
      for (int r = 0; r < 60; ++r) {
        g.at(r, 3 + digit * 6 + static_cast<int>(rng() % 2)) = 1;
      }
      samples.push_back({std::to_string(digit), g});
    }
  }
  KnnModel model = train(samples, 1);
  TempDir dir;
  const std::string path = (dir.path / "trained.knn").string();
  save_model(model, path);
  KnnModel loaded = load_model(path);
  for (const auto& s : samples) {
    FeatureVector q = extract_features(s.glyph);
    CHECK(classify(loaded, q).label == classify(model, q).label);
  }
}
