#include "sdi/fusion.hpp"

#include <cmath>

#include "sdi/errors.hpp"

namespace sdi {

FusionSeries build_fusion_series(const Trace& gyro, const Trace& mag,
                                 double grid_rate_hz) {
  if (gyro.sensor != SensorKind::Gyroscope)
    throw DataError("fusion expects a gyroscope trace first");
  if (mag.sensor != SensorKind::Magnetometer)
    throw DataError("fusion expects a magnetometer trace second");

  const AlignedSeries grid = resample_to_common_grid(gyro, mag, grid_rate_hz);
  if (grid.t_ns.size() < 2)
    throw DataError("fewer than 2 aligned samples for fusion");

  FusionSeries fs;
  fs.rate_hz = grid_rate_hz;
  const std::size_t n = grid.t_ns.size();
  fs.t_ns.reserve(n - 1);
  fs.zeta.reserve(n - 1);
  fs.eta.reserve(n - 1);

  for (std::size_t i = 1; i < n; ++i) {
    const double dt = static_cast<double>(grid.t_ns[i] - grid.t_ns[i - 1]) * 1e-9;
    fs.t_ns.push_back(grid.t_ns[i]);
    fs.zeta.push_back(-grid.gyro[i].cross(grid.mag[i]));
    fs.eta.push_back((grid.mag[i] - grid.mag[i - 1]) / dt);
  }
  return fs;
}

MseStream mse(const FusionSeries& fs, int window_samples) {
  if (window_samples < 1) throw UsageError("MSE window must be >= 1 sample");
  const std::size_t w = static_cast<std::size_t>(window_samples);
  if (w > fs.t_ns.size()) throw DataError("MSE window exceeds series length");

  MseStream out;
  out.window_samples = window_samples;
  for (std::size_t start = 0; start + w <= fs.t_ns.size(); start += w) {
    double acc = 0.0;
    for (std::size_t i = start; i < start + w; ++i) {
      const Vec3 d = fs.zeta[i] - fs.eta[i];
      acc += d.x * d.x + d.y * d.y + d.z * d.z;
    }
    out.window_start_ns.push_back(fs.t_ns[start]);
    out.values.push_back(acc / static_cast<double>(w));
  }
  return out;
}

Stump learn_threshold(const std::vector<double>& benign_mse,
                      const std::vector<double>& attack_mse) {
  if (benign_mse.empty() || attack_mse.empty())
    throw DataError("threshold learning needs both benign and attack MSE values");

  LearnDataset ds;
  ds.feature_names = {"mse"};
  for (const double v : benign_mse) {
    ds.x.push_back({v});
    ds.y.push_back(0);
  }
  for (const double v : attack_mse) {
    ds.x.push_back({v});
    ds.y.push_back(1);
  }

  const DecisionTree tree = train_tree(ds, 1, 1);
  if (tree.nodes.front().is_leaf())
    throw DataError("MSE values admit no split between the classes");
  return Stump{0, tree.nodes.front().threshold};
}

std::vector<WindowVerdict> windowed_fusion_detect(const MseStream& stream,
                                                  const FusionDetectorConfig& cfg) {
  if (stream.values.empty()) throw DataError("empty MSE stream");
  if (cfg.window < 1) throw UsageError("verdict window must be >= 1 MSE value");
  if (!(cfg.trip_fraction > 0.0 && cfg.trip_fraction <= 1.0))
    throw UsageError("trip fraction must be in (0,1]");

  const std::size_t w = static_cast<std::size_t>(cfg.window);
  std::vector<WindowVerdict> verdicts;
  for (std::size_t start = 0; start + w <= stream.values.size(); start += w) {
    std::size_t above = 0;
    for (std::size_t i = start; i < start + w; ++i) {
      if (stream.values[i] > cfg.threshold) ++above;
    }
    const double fraction = static_cast<double>(above) / static_cast<double>(w);
    verdicts.push_back(
        {stream.window_start_ns[start], fraction >= cfg.trip_fraction ? 1 : 0});
  }
  return verdicts;
}

std::vector<MseFeatureVerdict> mse_feature_detect(const MseStream& stream,
                                                  int window,
                                                  const DecisionTree& model) {
  if (window < 4) throw UsageError("MSE feature window must be >= 4 values");
  const std::size_t w = static_cast<std::size_t>(window);
  if (w > stream.values.size())
    throw DataError("MSE feature window exceeds stream length");

  std::vector<MseFeatureVerdict> out;
  for (std::size_t start = 0; start + w <= stream.values.size(); start += w) {
    Window win;
    win.values.assign(stream.values.begin() + static_cast<std::ptrdiff_t>(start),
                      stream.values.begin() + static_cast<std::ptrdiff_t>(start + w));
    MseFeatureVerdict v;
    v.window_start_ns = stream.window_start_ns[start];
    v.features = extract_features(win, FeatureVariant::Full);
    v.verdict = predict(model, v.features);
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace sdi
