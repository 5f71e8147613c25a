#ifndef SDI_FUSION_HPP_
#define SDI_FUSION_HPP_

#include <cstdint>
#include <vector>

#include "sdi/learn.hpp"
#include "sdi/sim.hpp"
#include "sdi/trace.hpp"

namespace sdi {

// Aligned per-timestep fusion signals on a shared uniform grid:
//   zeta = -omega_d x B_d            (from the gyro + mag readings)
//   eta  = (B_i - B_{i-1}) / dt      (backward difference of the mag)
// Units: microtesla per second. The first grid sample is dropped so both
// series align.
struct FusionSeries {
  std::vector<std::int64_t> t_ns;
  std::vector<Vec3> zeta;
  std::vector<Vec3> eta;
  double rate_hz = 0.0;
};

// Resamples both traces to grid_rate_hz (default 100 Hz, the magnetometer
// rate) and evaluates both sides of the fusion relation.
FusionSeries build_fusion_series(const Trace& gyro, const Trace& mag,
                                 double grid_rate_hz = 100.0);

// Per-tumbling-window mean of the squared 3-component difference:
//   (1/W) * sum over window of ((zx-ex)^2 + (zy-ey)^2 + (zz-ez)^2)
struct MseStream {
  std::vector<std::int64_t> window_start_ns;
  std::vector<double> values; // microtesla^2 / s^2
  int window_samples = 0;
};

MseStream mse(const FusionSeries& fs, int window_samples);

// Threshold selection: a depth-1 Gini tree over the pooled 1-D MSE values.
Stump learn_threshold(const std::vector<double>& benign_mse,
                      const std::vector<double>& attack_mse);

struct FusionDetectorConfig {
  double threshold = 0.0;
  int window = 10;            // MSE values per verdict window
  double trip_fraction = 0.8; // attack when >= this fraction exceed threshold
};

// Tumbling verdict windows over the MSE stream; a trailing partial window is
// dropped. The trip comparison is inclusive: exactly 80% above trips.
std::vector<WindowVerdict> windowed_fusion_detect(const MseStream& stream,
                                                  const FusionDetectorConfig& cfg);

// ML reinforcement: the Table-2 feature set extracted from MSE values inside
// a verdict window, classified by a tree trained on such features.
struct MseFeatureVerdict {
  std::int64_t window_start_ns = 0;
  FeatureVector features;
  int verdict = 0;
};

std::vector<MseFeatureVerdict> mse_feature_detect(const MseStream& stream,
                                                  int window,
                                                  const DecisionTree& model);

} // namespace sdi

#endif // SDI_FUSION_HPP_
