#include <doctest.h>

#include <cmath>
#include <random>

#include "sdi/errors.hpp"
#include "sdi/features.hpp"

using namespace sdi;

namespace {

constexpr double kPi = 3.14159265358979323846;

// feature order in the full vector
enum { kFft = 0, kMax, kMean, kMin, kAvgDev, kRms, kStdDev, kZcr };

Window make_window(std::vector<double> values) {
  Window w;
  w.values = std::move(values);
  w.rate_hz = 200.0;
  return w;
}

Trace trace_from(const std::vector<Vec3>& vs) {
  Trace t;
  t.nominal_rate_hz = 200.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    t.samples.push_back({static_cast<std::int64_t>(i) * 5'000'000, vs[i]});
  }
  return t;
}

} // namespace

TEST_CASE("l2_series basics") {
  const Trace t345 = trace_from({{3, 4, 0}, {3, 4, 0}, {0, 3, 4}});
  const Window w = l2_series(t345);
  CHECK(w.values == std::vector<double>{5.0, 5.0, 5.0});

  const Trace zeros = trace_from({{0, 0, 0}, {0, 0, 0}});
  for (const double v : l2_series(zeros).values) CHECK(v == 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<Vec3> vs;
  for (int i = 0; i < 64; ++i) vs.push_back({u(rng), u(rng), u(rng)});
  const Trace random_trace = trace_from(vs);
  const Window wl = l2_series(random_trace);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const double bound =
        std::max({std::fabs(vs[i].x), std::fabs(vs[i].y), std::fabs(vs[i].z)});
    CHECK(wl.values[i] >= bound - 1e-12);
  }
}

TEST_CASE("constant window features") {
  const FeatureVector fv =
      extract_features(make_window(std::vector<double>(100, 7.0)), FeatureVariant::Full);
  CHECK(fv.values[kMax] == 7.0);
  CHECK(fv.values[kMin] == 7.0);
  CHECK(fv.values[kMean] == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(fv.values[kStdDev] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fv.values[kAvgDev] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fv.values[kRms] == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(fv.values[kZcr] == 0.0);
  CHECK(fv.values[kFft] < 1e-9); // DC excluded
}

TEST_CASE("pure sine window statistics") {
  const std::size_t n = 1000;
  const std::size_t cycles = 10;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = 2.0 * std::sin(2.0 * kPi * static_cast<double>(cycles * i) /
                          static_cast<double>(n));
  }
  const FeatureVector fv = extract_features(make_window(v), FeatureVariant::Full);
  CHECK(fv.values[kRms] == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(std::fabs(fv.values[kMean]) < 1e-12);
  const double expected_zcr = 2.0 * static_cast<double>(cycles) /
                              static_cast<double>(n - 1);
  CHECK(std::fabs(fv.values[kZcr] - expected_zcr) <= 2.0 / static_cast<double>(n - 1));
  // single-bin sinusoid: unnormalized DFT peak N*A/2
  CHECK(fv.values[kFft] ==
        doctest::Approx(static_cast<double>(n) * 2.0 / 2.0).epsilon(1e-6));
}

TEST_CASE("alternating window has zcr exactly one") {
  std::vector<double> v(64);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 == 0 ? 1.0 : -1.0;
  const FeatureVector fv = extract_features(make_window(v), FeatureVariant::Full);
  CHECK(fv.values[kZcr] == 1.0);
}

TEST_CASE("windows shorter than the variant minimum are rejected") {
  CHECK_THROWS_AS(extract_features(make_window({1.0}), FeatureVariant::Iot5), DataError);
  CHECK_THROWS_AS(extract_features(make_window({1.0, 2.0, 3.0}), FeatureVariant::Full),
                  DataError);
  CHECK_NOTHROW(extract_features(make_window({1.0, 2.0, 3.0}), FeatureVariant::Iot5));
}

TEST_CASE("per-axis features: symmetry, shape and motion localization") {
  std::vector<Vec3> same;
  for (int i = 0; i < 32; ++i) {
    const double v = std::sin(0.3 * i);
    same.push_back({v, v, v});
  }
  const FeatureVector sym = features_per_axis(trace_from(same));
  REQUIRE(sym.values.size() == 18);
  for (int f = 0; f < 6; ++f) {
    CHECK(sym.values[static_cast<std::size_t>(f)] ==
          sym.values[static_cast<std::size_t>(6 + f)]);
    CHECK(sym.values[static_cast<std::size_t>(f)] ==
          sym.values[static_cast<std::size_t>(12 + f)]);
  }

  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<Vec3> xonly;
  for (int i = 0; i < 256; ++i) {
    xonly.push_back({2.0 * std::sin(0.2 * i), noise(rng), noise(rng)});
  }
  const FeatureVector fv = features_per_axis(trace_from(xonly));
  const std::size_t std_dev_in_block = 5;
  CHECK(fv.values[std_dev_in_block] > 10.0 * fv.values[6 + std_dev_in_block]);
  CHECK(fv.values[std_dev_in_block] > 10.0 * fv.values[12 + std_dev_in_block]);
}

TEST_CASE("rest and rocked-rest traces separate on std_dev alone at zero noise") {
  Trace rest;
  rest.nominal_rate_hz = 200.0;
  for (int i = 0; i < 400; ++i) {
    rest.samples.push_back({static_cast<std::int64_t>(i) * 5'000'000, {0, 0, 0}});
  }
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  Trace rocked = rest;
  for (auto& s : rocked.samples) s.v = {u(rng), u(rng), u(rng)};

  const std::size_t std_dev_idx = 6;
  const double benign = extract_features(l2_series(rest), FeatureVariant::Full)
                            .values[std_dev_idx];
  const double attacked = extract_features(l2_series(rocked), FeatureVariant::Full)
                              .values[std_dev_idx];
  CHECK(benign == 0.0);
  CHECK(attacked > 1.0);
}

TEST_CASE("feature names match the variant layout") {
  CHECK(feature_names(FeatureVariant::Full) ==
        std::vector<std::string>{"max_val_fft", "max", "mean", "min", "avg_dev",
                                 "rms", "std_dev", "zcr"});
  CHECK(feature_names(FeatureVariant::Iot5) ==
        std::vector<std::string>{"max", "mean", "min", "std_dev", "avg_dev"});
  const auto per_axis = feature_names(FeatureVariant::PerAxis6);
  REQUIRE(per_axis.size() == 18);
  CHECK(per_axis.front() == "x_max");
  CHECK(per_axis[6] == "y_max");
  CHECK(per_axis.back() == "z_std_dev");
}

TEST_CASE("scaling and shift properties") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(60);
    for (auto& x : v) x = u(rng);
    const FeatureVector base = extract_features(make_window(v), FeatureVariant::Full);

    const double alpha = 2.5;
    std::vector<double> scaled(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = alpha * v[i];
    const FeatureVector fs = extract_features(make_window(scaled), FeatureVariant::Full);
    for (const int idx : {kFft, kMax, kMean, kMin, kAvgDev, kRms, kStdDev}) {
      CHECK(fs.values[static_cast<std::size_t>(idx)] ==
            doctest::Approx(alpha * base.values[static_cast<std::size_t>(idx)])
                .epsilon(1e-9));
    }
    CHECK(fs.values[kZcr] == base.values[kZcr]);

    // negative scaling swaps max/min and keeps zcr
    std::vector<double> negated(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) negated[i] = -1.7 * v[i];
    const FeatureVector fn = extract_features(make_window(negated), FeatureVariant::Full);
    CHECK(fn.values[kMax] == doctest::Approx(1.7 * -base.values[kMin]).epsilon(1e-9));
    CHECK(fn.values[kMin] == doctest::Approx(1.7 * -base.values[kMax]).epsilon(1e-9));
    CHECK(fn.values[kZcr] == base.values[kZcr]);

    const double c = 4.2;
    std::vector<double> shifted(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) shifted[i] = v[i] + c;
    const FeatureVector fsh = extract_features(make_window(shifted), FeatureVariant::Full);
    CHECK(fsh.values[kMax] == doctest::Approx(base.values[kMax] + c).epsilon(1e-9));
    CHECK(fsh.values[kMin] == doctest::Approx(base.values[kMin] + c).epsilon(1e-9));
    CHECK(fsh.values[kMean] == doctest::Approx(base.values[kMean] + c).epsilon(1e-9));
    CHECK(fsh.values[kStdDev] == doctest::Approx(base.values[kStdDev]).epsilon(1e-9));
    CHECK(fsh.values[kAvgDev] == doctest::Approx(base.values[kAvgDev]).epsilon(1e-9));
    CHECK(fsh.values[kZcr] == base.values[kZcr]);
  }
}
