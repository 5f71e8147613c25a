#ifndef SDI_EXPERIMENT_HPP_
#define SDI_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sdi/features.hpp"
#include "sdi/fusion.hpp"
#include "sdi/learn.hpp"
#include "sdi/sim.hpp"

namespace sdi {

// End-to-end experiment parameters. Every stage is deterministic in `seed`;
// the dataset counts default to the full collection shape (500 benign / 500
// rocking / 500 solenoid / 500 rolling at scale 1).
struct ExperimentConfig {
  std::uint64_t seed = 42;
  DatasetConfig dataset;
  FeatureVariant gyro_variant = FeatureVariant::Full;
  FeatureVariant mag_variant = FeatureVariant::Full;
  // Streaming detection retrains on window-length features; per-axis avoids
  // the window-length dependence of the spectral feature.
  FeatureVariant realtime_variant = FeatureVariant::PerAxis6;
  int max_depth = 8;
  int min_leaf = 5;
  int kfold = 10;
  int relieff_k = 20;
  double one_sided_quantile = 0.99;
  std::vector<int> windows_ms = {1000, 2000, 5000};
  double fusion_grid_rate_hz = 100.0;
  int mse_window = 50;          // samples per MSE value
  double trip_fraction = 0.8;
  int mse_feature_window = 8;   // MSE values per ML-on-MSE window
  std::string out_dir;
};

// Flat key=value text with section prefixes (`sim.duration_s=10`). Missing
// `seed` falls back to the SDI_SEED environment variable.
ExperimentConfig load_experiment_config(const std::string& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key,
                       const std::string& value);

// Feature rows for a set of traces; window_ms = 0 extracts one row per
// whole trace, otherwise one row per tumbling window. Labels: benign = 0,
// any attack = 1.
LearnDataset features_dataset(const std::vector<Trace>& traces,
                              FeatureVariant variant, int window_ms = 0);

struct Quantiles {
  double min = 0.0, p25 = 0.0, median = 0.0, p75 = 0.0, p90 = 0.0, max = 0.0;
};

Quantiles quantiles_of(std::vector<double> values);

struct Report {
  struct Entry {
    std::string defense;
    int window_ms = 0; // 0 = offline
    EvalResult cell;
  };
  std::vector<Entry> entries;

  Quantiles benign_mse, rocking_mse, solenoid_mse, rolling_mse;
  double fusion_threshold = 0.0;
  std::vector<std::string> relieff_order; // gyro features, best first
  std::vector<double> relieff_weights;

  // Console-only; never serialized, so written artifacts stay byte-stable.
  double runtime_seconds = 0.0;

  const Entry* find(const std::string& defense, int window_ms) const;
};

// Dataset -> features -> SDI-1 trees + one-sided + SDI-2 stump -> k-fold and
// windowed streaming evaluation. Writes models, report.csv and report.txt
// under cfg.out_dir when it is non-empty.
Report run_experiment(const ExperimentConfig& cfg);

void write_report_csv(const Report& report, const std::string& path);
void write_report_text(const Report& report, const std::string& path);
Report read_report_csv(const std::string& path);

} // namespace sdi

#endif // SDI_EXPERIMENT_HPP_
