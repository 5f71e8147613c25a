#include "sdi/features.hpp"

#include <algorithm>
#include <cmath>

#include "sdi/dsp.hpp"
#include "sdi/errors.hpp"

namespace sdi {

FeatureVariant variant_from_string(const std::string& s) {
  if (s == "full") return FeatureVariant::Full;
  if (s == "per_axis6") return FeatureVariant::PerAxis6;
  if (s == "iot5") return FeatureVariant::Iot5;
  throw UsageError("unknown feature variant: " + s);
}

const char* to_string(FeatureVariant v) {
  switch (v) {
    case FeatureVariant::Full: return "full";
    case FeatureVariant::PerAxis6: return "per_axis6";
    case FeatureVariant::Iot5: return "iot5";
  }
  return "?";
}

namespace {

const std::vector<std::string> kAxis6Names = {"max", "mean",    "min",
                                              "avg_dev", "rms", "std_dev"};

struct Stats {
  double max, mean, min, avg_dev, rms, std_dev, zcr;
};

Stats basic_stats(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  Stats s{};
  s.max = *std::max_element(v.begin(), v.end());
  s.min = *std::min_element(v.begin(), v.end());

  double sum = 0.0, sumsq = 0.0;
  for (const double x : v) {
    sum += x;
    sumsq += x * x;
  }
  s.mean = sum / n;
  s.rms = std::sqrt(sumsq / n);

  double absdev = 0.0, sqdev = 0.0;
  for (const double x : v) {
    const double d = x - s.mean;
    absdev += std::fabs(d);
    sqdev += d * d;
  }
  s.avg_dev = absdev / n;
  s.std_dev = std::sqrt(sqdev / n);

  std::size_t flips = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if ((v[i - 1] - s.mean) * (v[i] - s.mean) < 0.0) ++flips;
  }
  s.zcr = static_cast<double>(flips) / (n - 1.0);
  return s;
}

} // namespace

std::vector<std::string> feature_names(FeatureVariant variant) {
  switch (variant) {
    case FeatureVariant::Full:
      return {"max_val_fft", "max", "mean", "min", "avg_dev", "rms", "std_dev", "zcr"};
    case FeatureVariant::Iot5:
      return {"max", "mean", "min", "std_dev", "avg_dev"};
    case FeatureVariant::PerAxis6: {
      std::vector<std::string> names;
      for (const char* axis : {"x", "y", "z"}) {
        for (const auto& f : kAxis6Names) names.push_back(std::string(axis) + "_" + f);
      }
      return names;
    }
  }
  throw UsageError("unknown feature variant");
}

Window l2_series(const Trace& trace) {
  if (trace.samples.empty()) throw DataError("l2_series of empty trace");
  Window w;
  w.rate_hz = trace.nominal_rate_hz;
  w.source = WindowSource::L2;
  w.values.reserve(trace.samples.size());
  for (const auto& s : trace.samples) w.values.push_back(s.v.norm());
  return w;
}

Window axis_series(const Trace& trace, int axis) {
  if (trace.samples.empty()) throw DataError("axis_series of empty trace");
  if (axis < 0 || axis > 2) throw UsageError("axis must be 0, 1 or 2");
  Window w;
  w.rate_hz = trace.nominal_rate_hz;
  w.source = axis == 0 ? WindowSource::AxisX
                       : (axis == 1 ? WindowSource::AxisY : WindowSource::AxisZ);
  w.values.reserve(trace.samples.size());
  for (const auto& s : trace.samples) w.values.push_back(s.v[axis]);
  return w;
}

FeatureVector extract_features(const Window& w, FeatureVariant variant) {
  if (variant == FeatureVariant::PerAxis6)
    throw UsageError("per_axis6 requires a full trace; use features_per_axis");
  if (w.values.size() < 2) throw DataError("window too short for features");

  const Stats s = basic_stats(w.values);
  FeatureVector fv;
  if (variant == FeatureVariant::Full) {
    const double max_val_fft = dsp::max_spectral_magnitude(w.values);
    fv.values = {max_val_fft, s.max, s.mean, s.min, s.avg_dev, s.rms, s.std_dev, s.zcr};
  } else {
    fv.values = {s.max, s.mean, s.min, s.std_dev, s.avg_dev};
  }
  return fv;
}

FeatureVector features_per_axis(const Trace& trace) {
  FeatureVector fv;
  fv.values.reserve(18);
  for (int axis = 0; axis < 3; ++axis) {
    const Window w = axis_series(trace, axis);
    if (w.values.size() < 2) throw DataError("window too short for features");
    const Stats s = basic_stats(w.values);
    const double block[] = {s.max, s.mean, s.min, s.avg_dev, s.rms, s.std_dev};
    fv.values.insert(fv.values.end(), std::begin(block), std::end(block));
  }
  return fv;
}

FeatureVector features_for_trace(const Trace& trace, FeatureVariant variant) {
  if (variant == FeatureVariant::PerAxis6) return features_per_axis(trace);
  return extract_features(l2_series(trace), variant);
}

} // namespace sdi
