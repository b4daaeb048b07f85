#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "ruq/data.hpp"
#include "ruq/errors.hpp"

using namespace ruq;
namespace fs = std::filesystem;

namespace {

fs::path scratch_file(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "ruq_test_data";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << content;
  return p;
}

double residual_std(const Dataset& d, const SineConfig& cfg, double lo, double hi) {
  double sum = 0.0, sq = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x = d.features(i, 0);
    if (x < lo || x >= hi) continue;
    const double r = d.targets(i, 0) - cfg.amplitude * std::sin(x);
    sum += r;
    sq += r * r;
    ++n;
  }
  const double mean = sum / n;
  return std::sqrt(sq / n - mean * mean);
}

}  // namespace

TEST_CASE("sine generator") {
  SineConfig cfg;
  CHECK_NOTHROW(cfg.validate());

  SUBCASE("invalid configurations are rejected") {
    SineConfig zero = cfg;
    zero.sigma_lo = zero.sigma_hi = 0.0;
    CHECK_THROWS_AS(zero.validate(), ConfigError);
    SineConfig inverted = cfg;
    inverted.sigma_lo = 1.0;
    inverted.sigma_hi = 0.5;
    CHECK_THROWS_AS(inverted.validate(), ConfigError);
    SineConfig empty_range = cfg;
    empty_range.x_max = empty_range.x_min;
    CHECK_THROWS_AS(gen_sine(empty_range, 0), ConfigError);
  }
  SUBCASE("noise-free limit") {
    SineConfig quiet = cfg;
    quiet.sigma_lo = quiet.sigma_hi = 1e-9;
    quiet.amplitude = 2.5;
    const Dataset d = gen_sine(quiet, 3);
    REQUIRE(d.size() == quiet.n);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double x = d.features(i, 0);
      CHECK(x >= quiet.x_min);
      CHECK(x <= quiet.x_max);
      CHECK(std::fabs(d.targets(i, 0) - 2.5 * std::sin(x)) < 1e-6);
      CHECK_FALSE(d.outlier_mask[i]);
    }
  }
  SUBCASE("determinism") {
    CHECK(gen_sine(cfg, 11) == gen_sine(cfg, 11));
    CHECK_FALSE(gen_sine(cfg, 11) == gen_sine(cfg, 12));
  }
  SUBCASE("noise profile grows along x") {
    SineConfig big = cfg;
    big.n = 5000;
    const Dataset d = gen_sine(big, 7);
    const double width = (big.x_max - big.x_min) / 10.0;
    const double top = residual_std(d, big, big.x_max - width, big.x_max + 1.0);
    CHECK(std::fabs(top - big.sigma_hi) < 0.15 * big.sigma_hi);
    double prev = 0.0;
    for (int k = 0; k < 10; ++k) {
      const double lo = big.x_min + k * width;
      const double s = residual_std(d, big, lo, k == 9 ? big.x_max + 1.0 : lo + width);
      CHECK(s >= 0.9 * prev);  // sampling noise allowance between neighbouring deciles
      prev = s;
    }
    CHECK(big.noise_sigma(big.x_min) == big.sigma_lo);
    CHECK(big.noise_sigma(big.x_max) == big.sigma_hi);
  }
}

TEST_CASE("outlier injection") {
  const Dataset clean = gen_sine(SineConfig{}, 1);

  SUBCASE("eta = 0 is the identity") {
    CHECK(inject_outliers(clean, {0.0}, 5) == clean);
  }
  SUBCASE("counts are exact across the eta grid") {
    for (int k = 0; k <= 10; ++k) {
      const double eta = 0.05 * k;
      for (OutlierModel m : {OutlierModel::uniform_y, OutlierModel::sensor_dropout}) {
        const Dataset d = inject_outliers(clean, {eta, m}, 100 + k);
        CHECK(d.outlier_count() == static_cast<std::size_t>(std::llround(eta * clean.size())));
        CHECK(d.features == clean.features);
        for (std::size_t i = 0; i < d.size(); ++i) {
          if (!d.outlier_mask[i]) CHECK(d.targets(i, 0) == clean.targets(i, 0));
          if (d.outlier_mask[i] && m == OutlierModel::sensor_dropout) CHECK(d.targets(i, 0) == 0.0);
        }
      }
    }
    CHECK(inject_outliers(clean, {0.1}, 3).outlier_count() == 100);
  }
  SUBCASE("uniform_y targets stay inside the envelope") {
    const auto [lo_it, hi_it] =
        std::minmax_element(clean.targets.values().begin(), clean.targets.values().end());
    const double range = *hi_it - *lo_it;
    const Dataset d = inject_outliers(clean, {0.5, OutlierModel::uniform_y, 0.5}, 9);
    bool outside_clean_range = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (!d.outlier_mask[i]) continue;
      const double y = d.targets(i, 0);
      CHECK(y >= *lo_it - 0.5 * range);
      CHECK(y <= *hi_it + 0.5 * range);
      outside_clean_range = outside_clean_range || y < *lo_it || y > *hi_it;
    }
    CHECK(outside_clean_range);
  }
  SUBCASE("errors and determinism") {
    CHECK_THROWS_AS(inject_outliers(clean, {0.51}, 1), ConfigError);
    CHECK_THROWS_AS(inject_outliers(clean, {-0.01}, 1), ConfigError);
    const Dataset once = inject_outliers(clean, {0.2}, 4);
    CHECK(once == inject_outliers(clean, {0.2}, 4));
    CHECK_THROWS_AS(inject_outliers(once, {0.2}, 4), ConfigError);
    CHECK(once.clean_rows().size() == clean.size() - 200);
  }
  SUBCASE("outlier model names") {
    CHECK(parse_outlier_model(outlier_model_name(OutlierModel::sensor_dropout)) ==
          OutlierModel::sensor_dropout);
    CHECK_THROWS_AS(parse_outlier_model("gross"), ConfigError);
  }
}

TEST_CASE("CSV ingestion") {
  SUBCASE("known values round trip") {
    const fs::path p = scratch_file("three.csv", "a,y,b\n1.5,2,-3\n0.25,1e3,4\n-7,0,8.125\n");
    const Dataset d = load_csv(p, "y");
    REQUIRE(d.size() == 3);
    REQUIRE(d.features.cols() == 2);
    CHECK(d.features(0, 0) == 1.5);
    CHECK(d.features(0, 1) == -3.0);
    CHECK(d.features(2, 1) == 8.125);
    CHECK(d.targets(1, 0) == 1000.0);
    CHECK(d.outlier_count() == 0);

    const fs::path q = fs::temp_directory_path() / "ruq_test_data" / "three_out.csv";
    write_csv(q, d, {"a", "b"}, "y");
    CHECK(load_csv(q, "y").features == d.features);
    CHECK(load_csv(q, "y").targets == d.targets);
  }
  SUBCASE("generated data round trips bit for bit") {
    const Dataset d = gen_sine(SineConfig{}, 2);
    const fs::path p = fs::temp_directory_path() / "ruq_test_data" / "sine.csv";
    write_csv(p, d, {"x"}, "y");
    const Dataset back = load_csv(p, "y");
    CHECK(back.features == d.features);
    CHECK(back.targets == d.targets);
  }
  SUBCASE("missing target column names the column") {
    const fs::path p = scratch_file("nocol.csv", "a,b\n1,2\n");
    try {
      load_csv(p, "price");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("price") != std::string::npos);
      CHECK(e.row() == 1);
    }
  }
  SUBCASE("non-numeric cell cites its row") {
    const fs::path p =
        scratch_file("bad.csv", "x,y\n1,1\n2,2\n3,3\n4,4\n5,5\n6,oops\n7,7\n");
    try {
      load_csv(p, "y");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.row() == 7);
      CHECK(e.column() == 2);
      CHECK(std::string(e.what()).find("row 7") != std::string::npos);
    }
  }
  SUBCASE("structural errors") {
    CHECK_THROWS_AS(load_csv(scratch_file("empty.csv", ""), "y"), ParseError);
    CHECK_THROWS_AS(load_csv(scratch_file("header.csv", "x,y\n"), "y"), ParseError);
    CHECK_THROWS_AS(load_csv(scratch_file("ragged.csv", "x,y\n1,2\n3\n"), "y"), ParseError);
    CHECK_THROWS_AS(load_csv(fs::temp_directory_path() / "ruq_no_such_file.csv", "y"),
                    ParseError);
  }
}

TEST_CASE("seeded split") {
  const Dataset d = gen_sine(SineConfig{}, 0);
  const auto [train, test] = split(d, 0.1, 42);
  CHECK(test.size() == 100);
  CHECK(train.size() + test.size() == d.size());

  const auto [train2, test2] = split(d, 0.1, 42);
  CHECK(train == train2);
  CHECK(test == test2);

  SUBCASE("disjoint and exhaustive across many seeds") {
    SineConfig small;
    small.n = 100;
    Dataset base = gen_sine(small, 0);
    for (std::size_t i = 0; i < base.size(); ++i) base.features(i, 0) = static_cast<double>(i);
    std::set<std::vector<double>> orders;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto [tr, te] = split(base, 0.3, seed);
      REQUIRE(te.size() == 30);
      std::vector<double> ids;
      for (std::size_t i = 0; i < tr.size(); ++i) ids.push_back(tr.features(i, 0));
      for (std::size_t i = 0; i < te.size(); ++i) ids.push_back(te.features(i, 0));
      orders.insert(ids);
      std::sort(ids.begin(), ids.end());
      for (std::size_t i = 0; i < ids.size(); ++i) CHECK(ids[i] == static_cast<double>(i));
      const auto [tr2, te2] = split(base, 0.3, seed);
      CHECK(tr == tr2);
    }
    CHECK(orders.size() == 1000);
  }
  SUBCASE("masks travel with rows") {
    const Dataset dirty = inject_outliers(d, {0.3}, 1);
    const auto [tr, te] = split(dirty, 0.25, 8);
    CHECK(tr.outlier_count() + te.outlier_count() == 300);
  }
  SUBCASE("degenerate fractions") {
    CHECK_THROWS_AS(split(d, 0.0, 1), ConfigError);
    CHECK_THROWS_AS(split(d, 1.0, 1), ConfigError);
    CHECK_THROWS_AS(split(d, 0.0001, 1), ConfigError);
  }
}

TEST_CASE("standardizer") {
  TabularConfig tc;
  tc.n = 500;
  Dataset d = gen_tabular(tc, 3);
  for (std::size_t i = 0; i < d.size(); ++i) d.features(i, 2) = 4.5;  // constant column

  const Standardizer s = Standardizer::fit(d);
  CHECK(s.feature_std()[2] == 1.0);
  CHECK(s.feature_mean()[2] == 4.5);

  const Dataset z = s.apply(d);
  for (std::size_t c = 0; c < d.features.cols(); ++c) {
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) sum += z.features(i, c);
    const double mean = sum / z.size();
    for (std::size_t i = 0; i < z.size(); ++i) sq += (z.features(i, c) - mean) * (z.features(i, c) - mean);
    const double sd = std::sqrt(sq / z.size());
    CHECK(std::fabs(mean) < 1e-10);
    if (c == 2) {
      CHECK(sd == 0.0);
    } else {
      CHECK(std::fabs(sd - 1.0) < 1e-10);
    }
  }

  const Dataset back = s.invert(z);
  for (std::size_t i = 0; i < d.features.values().size(); ++i) {
    CHECK(std::fabs(back.features.values()[i] - d.features.values()[i]) < 1e-12);
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    CHECK(std::fabs(back.targets(i, 0) - d.targets(i, 0)) < 1e-12);
    CHECK(std::fabs(s.invert_target(s.apply_target(d.targets(i, 0))) - d.targets(i, 0)) < 1e-12);
  }
  CHECK_THROWS_AS(s.apply_features(Tensor2(2, 3)), InvalidInput);
}

TEST_CASE("tabular generator") {
  TabularConfig tc;
  CHECK_NOTHROW(tc.validate());
  const Dataset d = gen_tabular(tc, 1);
  CHECK(d.size() == 1000);
  CHECK(d.features.cols() == 4);
  CHECK(d.name == "synthetic");
  double sq = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double x0 = d.features(i, 0), x1 = d.features(i, 1), x2 = d.features(i, 2),
                 x3 = d.features(i, 3);
    for (std::size_t c = 0; c < 4; ++c) {
      CHECK(d.features(i, c) >= -2.0);
      CHECK(d.features(i, c) <= 2.0);
    }
    const double r = d.targets(i, 0) - (std::sin(x0) + 0.5 * x1 - 0.25 * x2 * x2 + 0.3 * x1 * x3);
    sq += r * r;
  }
  CHECK(std::sqrt(sq / d.size()) == doctest::Approx(1.0).epsilon(0.08));
  CHECK(gen_tabular(tc, 1) == d);
  TabularConfig narrow = tc;
  narrow.features = 3;
  CHECK_THROWS_AS(gen_tabular(narrow, 1), ConfigError);
}

TEST_CASE("dataset validation") {
  Dataset d = gen_sine(SineConfig{}, 0);
  CHECK_NOTHROW(d.validate());
  d.outlier_mask.pop_back();
  CHECK_THROWS_AS(d.validate(), InvalidInput);
}
