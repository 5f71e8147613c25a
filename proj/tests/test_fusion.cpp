#include <doctest.h>

#include <cmath>
#include <random>

#include "sdi/errors.hpp"
#include "sdi/fusion.hpp"

using namespace sdi;

namespace {

MotionProfile noiseless(Activity kind, std::uint64_t seed) {
  MotionProfile p = default_profile(kind, seed);
  p.gyro_noise_std = 0.0;
  return p;
}

MagneticEnvironment env_of(Vec3 b, double noise) {
  MagneticEnvironment env;
  env.b_world = b;
  env.sensor_noise_std = noise;
  return env;
}

double mean_residual(const FusionSeries& fs) {
  double acc = 0.0;
  for (std::size_t i = 0; i < fs.zeta.size(); ++i) {
    acc += (fs.zeta[i] - fs.eta[i]).norm();
  }
  return acc / static_cast<double>(fs.zeta.size());
}

} // namespace

TEST_CASE("static pair: both fusion sides vanish") {
  const auto [gyro, mag] = simulate_benign_pair(noiseless(Activity::Rest, 2),
                                                env_of({50, 0, 0}, 0.0), 3.0, 2);
  const FusionSeries fs = build_fusion_series(gyro, mag, 100.0);
  for (std::size_t i = 0; i < fs.zeta.size(); ++i) {
    CHECK(fs.zeta[i].norm() < 1e-9);
    CHECK(fs.eta[i].norm() < 1e-9);
  }
}

TEST_CASE("pure yaw pair matches the cross-product closed form") {
  Trajectory traj;
  traj.psi.drift = 1.0;
  MotionProfile p = noiseless(Activity::ToFro, 5);
  const auto [gyro, mag] =
      simulate_pair_from_trajectory(traj, p, env_of({50, 0, 0}, 0.0), 5.0, 5);
  const FusionSeries fs = build_fusion_series(gyro, mag, 100.0);

  // zeta(t) = (-50 sin t, -50 cos t, 0); first kept sample is t = 10 ms
  CHECK(fs.zeta.front().y == doctest::Approx(-50.0).epsilon(0.01));
  CHECK(std::fabs(fs.zeta.front().x) < 1.0);
  for (std::size_t i = 0; i < fs.zeta.size(); ++i) {
    CHECK((fs.zeta[i] - fs.eta[i]).norm() < 1.0); // O(dt) agreement
  }
}

TEST_CASE("rolling pairs raise the mean fusion residual at least tenfold") {
  std::vector<Trace> gyros, mags;
  double benign_mean = 0.0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto [g, m] = simulate_benign_pair(noiseless(Activity::ToFro, 100 + s),
                                             env_of({30, 0, 40}, 0.0), 6.0, 100 + s);
    benign_mean += mean_residual(build_fusion_series(g, m, 100.0));
    gyros.push_back(g);
    mags.push_back(m);
  }
  benign_mean /= 6.0;

  double rolling_mean = 0.0;
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto [g, m] = make_rolling_pair(gyros, mags, s);
    rolling_mean += mean_residual(build_fusion_series(g, m, 100.0));
  }
  rolling_mean /= 6.0;

  CHECK(rolling_mean >= 10.0 * benign_mean);
}

TEST_CASE("gyro rocking raises the median MSE at least tenfold at default noise") {
  MotionProfile p = default_profile(Activity::Walking, 7); // default noise on
  MagneticEnvironment env; // default B and noise
  const auto [gyro, mag] = simulate_benign_pair(p, env, 8.0, 7);

  AttackConfig cfg;
  cfg.seed = 7;
  const Trace attacked = apply_rocking_attack(gyro, cfg);

  auto median_mse = [&](const Trace& g) {
    const MseStream stream = mse(build_fusion_series(g, mag, 100.0), 10);
    std::vector<double> v = stream.values;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median_mse(attacked) >= 10.0 * median_mse(gyro));
}

TEST_CASE("mse arithmetic on constructed series") {
  FusionSeries fs;
  fs.rate_hz = 100.0;
  for (int i = 0; i < 40; ++i) {
    fs.t_ns.push_back(i * 10'000'000);
    fs.zeta.push_back({1.0, 2.0, 2.0});
    fs.eta.push_back({0.0, 0.0, 0.0});
  }
  const MseStream every10 = mse(fs, 10);
  REQUIRE(every10.values.size() == 4);
  for (const double v : every10.values) CHECK(v == doctest::Approx(9.0));

  for (auto& z : fs.zeta) z = z * 2.0; // doubling the difference quadruples MSE
  const MseStream doubled = mse(fs, 10);
  for (const double v : doubled.values) CHECK(v == doctest::Approx(36.0));

  FusionSeries equal = fs;
  equal.eta = equal.zeta;
  for (const double v : mse(equal, 10).values) CHECK(v == 0.0);

  CHECK_THROWS_AS(mse(fs, 50), DataError);
}

TEST_CASE("learn_threshold on separable and overlapping values") {
  const Stump s = learn_threshold({0.1, 0.2}, {5.0, 6.0});
  CHECK(s.threshold > 0.2);
  CHECK(s.threshold < 5.0);
  CHECK(predict(s, 0.2) == 0);
  CHECK(predict(s, 5.0) == 1);

  // overlapping data: compare with exhaustive search over all midpoints
  std::mt19937_64 rng(14);
  std::normal_distribution<double> benign_dist(1.0, 0.5);
  std::normal_distribution<double> attack_dist(2.0, 0.5);
  std::vector<double> benign, attack;
  for (int i = 0; i < 50; ++i) {
    benign.push_back(std::fabs(benign_dist(rng)));
    attack.push_back(std::fabs(attack_dist(rng)));
  }
  const Stump learned = learn_threshold(benign, attack);

  std::vector<double> all = benign;
  all.insert(all.end(), attack.begin(), attack.end());
  std::sort(all.begin(), all.end());
  double best_score = 1e18, best_thr = 0.0;
  const double n = static_cast<double>(all.size());
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    if (all[i] == all[i + 1]) continue;
    const double thr = (all[i] + all[i + 1]) / 2.0;
    double bl = 0, al = 0;
    for (const double v : benign) bl += v <= thr ? 1 : 0;
    for (const double v : attack) al += v <= thr ? 1 : 0;
    const double nl = bl + al, nr = n - nl;
    const double gl = 1.0 - (bl / nl) * (bl / nl) - (al / nl) * (al / nl);
    const double br = static_cast<double>(benign.size()) - bl;
    const double ar = static_cast<double>(attack.size()) - al;
    const double gr = 1.0 - (br / nr) * (br / nr) - (ar / nr) * (ar / nr);
    const double score = (nl * gl + nr * gr) / n;
    if (score < best_score) {
      best_score = score;
      best_thr = thr;
    }
  }
  CHECK(learned.threshold == doctest::Approx(best_thr));

  // positive scaling moves the threshold with the data
  std::vector<double> benign2 = benign, attack2 = attack;
  for (auto& v : benign2) v *= 3.0;
  for (auto& v : attack2) v *= 3.0;
  const Stump scaled = learn_threshold(benign2, attack2);
  int below_before = 0, below_after = 0;
  for (const double v : benign) below_before += v <= learned.threshold ? 1 : 0;
  for (const double v : attack) below_before += v <= learned.threshold ? 1 : 0;
  for (const double v : benign2) below_after += v <= scaled.threshold ? 1 : 0;
  for (const double v : attack2) below_after += v <= scaled.threshold ? 1 : 0;
  CHECK(below_before == below_after); // split index invariant

  CHECK_THROWS_AS(learn_threshold({1.0}, {1.0}), DataError);
}

TEST_CASE("80 percent rule boundaries") {
  MseStream stream;
  stream.window_samples = 1;
  for (int i = 0; i < 10; ++i) {
    stream.window_start_ns.push_back(i * 1'000'000);
    stream.values.push_back(i < 8 ? 10.0 : 0.0); // exactly 80% above
  }
  FusionDetectorConfig cfg{5.0, 10, 0.8};
  CHECK(windowed_fusion_detect(stream, cfg).front().verdict == 1);

  MseStream stream79;
  stream79.window_samples = 1;
  for (int i = 0; i < 100; ++i) {
    stream79.window_start_ns.push_back(i * 1'000'000);
    stream79.values.push_back(i < 79 ? 10.0 : 0.0);
  }
  FusionDetectorConfig cfg100{5.0, 100, 0.8};
  CHECK(windowed_fusion_detect(stream79, cfg100).front().verdict == 0);

  MseStream quiet;
  quiet.window_samples = 1;
  for (int i = 0; i < 10; ++i) {
    quiet.window_start_ns.push_back(i * 1'000'000);
    quiet.values.push_back(1.0);
  }
  CHECK(windowed_fusion_detect(quiet, cfg).front().verdict == 0);
}

TEST_CASE("raising the threshold never flips a verdict to attack") {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  MseStream stream;
  stream.window_samples = 1;
  for (int i = 0; i < 200; ++i) {
    stream.window_start_ns.push_back(i * 1'000'000);
    stream.values.push_back(u(rng));
  }
  std::vector<int> previous(20, 1);
  for (double tau = 0.0; tau <= 10.5; tau += 0.5) {
    FusionDetectorConfig cfg{tau, 10, 0.8};
    const auto verdicts = windowed_fusion_detect(stream, cfg);
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      CHECK(verdicts[i].verdict <= previous[i]);
      previous[i] = verdicts[i].verdict;
    }
  }
}

TEST_CASE("world-frame rotation leaves the benign MSE distribution in place") {
  // at default sensor noise the MSE floor dominates, so the distribution
  // must not move beyond noise under a world-frame rotation of B
  auto median_benign_mse = [](const Vec3& b_world) {
    const auto [gyro, mag] = simulate_benign_pair(
        default_profile(Activity::Walking, 33), env_of(b_world, 0.1), 6.0, 33);
    std::vector<double> v = mse(build_fusion_series(gyro, mag, 100.0), 10).values;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };

  const double reference = median_benign_mse({30.0, 0.0, 40.0});
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  for (int i = 0; i < 10; ++i) {
    const Mat3 r = compose_rotation({angle(rng), angle(rng) / 2.0, angle(rng)});
    const Vec3 rotated = r * Vec3{30.0, 0.0, 40.0};
    const double ratio = median_benign_mse(rotated) / reference;
    CHECK(ratio >= 0.5);
    CHECK(ratio <= 2.0);
  }
}

TEST_CASE("mse feature detection agrees with the threshold rule when separated") {
  // benign streams near zero, attacked streams far above
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> lo(0.0, 1.0), hi(50.0, 60.0);

  LearnDataset train;
  train.feature_names = feature_names(FeatureVariant::Full);
  auto window_features = [&](bool attacked) {
    Window w;
    for (int i = 0; i < 8; ++i) w.values.push_back(attacked ? hi(rng) : lo(rng));
    return extract_features(w, FeatureVariant::Full).values;
  };
  for (int i = 0; i < 40; ++i) {
    train.x.push_back(window_features(false));
    train.y.push_back(0);
    train.x.push_back(window_features(true));
    train.y.push_back(1);
  }
  const DecisionTree tree = train_tree(train, 4, 1);

  MseStream stream;
  stream.window_samples = 1;
  for (int i = 0; i < 64; ++i) {
    stream.window_start_ns.push_back(i * 1'000'000);
    stream.values.push_back(i < 32 ? lo(rng) : hi(rng));
  }
  const auto ml = mse_feature_detect(stream, 8, tree);
  const auto thr = windowed_fusion_detect(stream, {10.0, 8, 0.8});
  REQUIRE(ml.size() == thr.size());
  for (std::size_t i = 0; i < ml.size(); ++i) {
    CHECK(ml[i].verdict == thr[i].verdict);
  }

  // constant stream: zero variance features land in the benign leaf
  MseStream constant;
  constant.window_samples = 1;
  for (int i = 0; i < 8; ++i) {
    constant.window_start_ns.push_back(i);
    constant.values.push_back(0.5);
  }
  CHECK(mse_feature_detect(constant, 8, tree).front().verdict == 0);
}
