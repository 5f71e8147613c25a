#ifndef SDI_FEATURES_HPP_
#define SDI_FEATURES_HPP_

#include <string>
#include <vector>

#include "sdi/trace.hpp"

namespace sdi {

enum class WindowSource { L2, AxisX, AxisY, AxisZ };

// A scalar signal window feeding feature extraction.
struct Window {
  std::vector<double> values;
  double rate_hz = 0.0;
  WindowSource source = WindowSource::L2;
};

// full:      max_val_fft, max, mean, min, avg_dev, rms, std_dev, zcr
// per_axis6: the six non-spectral features over each of X, Y, Z (18 total)
// iot5:      max, mean, min, std_dev, avg_dev
enum class FeatureVariant { Full, PerAxis6, Iot5 };

struct FeatureVector {
  std::vector<double> values;
};

FeatureVariant variant_from_string(const std::string& s);
const char* to_string(FeatureVariant v);

// Column names for the variant, snake_case; per-axis names are prefixed
// x_/y_/z_.
std::vector<std::string> feature_names(FeatureVariant variant);

// Per-sample Euclidean norm of a trace, preserving order and rate.
Window l2_series(const Trace& trace);

// One axis of a trace as a scalar window (axis: 0=X, 1=Y, 2=Z).
Window axis_series(const Trace& trace, int axis);

// Statistics over a window:
//   std_dev  population standard deviation (divide by N)
//   rms      sqrt(mean of squares)
//   avg_dev  mean absolute deviation from the mean
//   zcr      sign changes of the mean-removed signal / (N-1)
//   max_val_fft  max unnormalized DFT magnitude over bins 1..N/2
// Requires >= 2 samples, >= 4 when the variant includes max_val_fft.
FeatureVector extract_features(const Window& w, FeatureVariant variant);

// 18-feature vector: six features per axis, axis order X, Y, Z.
FeatureVector features_per_axis(const Trace& trace);

// Dispatch: Full/Iot5 extract from the L2 norm, PerAxis6 from the axes.
FeatureVector features_for_trace(const Trace& trace, FeatureVariant variant);

} // namespace sdi

#endif // SDI_FEATURES_HPP_
