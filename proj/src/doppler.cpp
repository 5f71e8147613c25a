#include "sdi/doppler.hpp"

#include <cmath>
#include <random>

#include "sdi/errors.hpp"

namespace sdi {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::vector<double> time_axis(double duration_s, double rate_hz) {
  const auto n = static_cast<std::size_t>(std::floor(duration_s * rate_hz)) + 1;
  if (n < 2) throw DataError("duration too short for 2 samples");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / rate_hz;
  return t;
}
} // namespace

RadialMotion sinusoidal_motion(double amp_m, double freq_hz, double duration_s,
                               double rate_hz, double r0) {
  const auto t = time_axis(duration_s, rate_hz);
  RadialMotion m;
  m.r0 = r0;
  m.rate_hz = rate_hz;
  m.r.resize(t.size());
  m.v.resize(t.size());
  m.a.resize(t.size());
  const double w = 2.0 * kPi * freq_hz;
  for (std::size_t i = 0; i < t.size(); ++i) {
    m.r[i] = amp_m * std::sin(w * t[i]);
    m.v[i] = amp_m * w * std::cos(w * t[i]);
    m.a[i] = -amp_m * w * w * std::sin(w * t[i]);
  }
  return m;
}

RadialMotion constant_velocity_motion(double v_mps, double duration_s,
                                      double rate_hz, double r0) {
  const auto t = time_axis(duration_s, rate_hz);
  RadialMotion m;
  m.r0 = r0;
  m.rate_hz = rate_hz;
  m.r.resize(t.size());
  m.v.assign(t.size(), v_mps);
  m.a.assign(t.size(), 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) m.r[i] = v_mps * t[i];
  return m;
}

std::vector<double> design_fir(const FilterSpec& spec, double sample_rate_hz) {
  if (!(spec.cutoff_hz > 0.0 && spec.cutoff_hz < sample_rate_hz / 2.0))
    throw NumericError("filter cutoff must lie in (0, Nyquist)");
  int taps = spec.taps;
  if (taps == 0) {
    const double transition =
        std::min(spec.cutoff_hz, sample_rate_hz / 2.0 - spec.cutoff_hz);
    taps = dsp::taps_for_transition(sample_rate_hz, transition);
  }
  return spec.kind == FilterSpec::Kind::LowPass
             ? dsp::lowpass_fir(taps, spec.cutoff_hz, sample_rate_hz)
             : dsp::highpass_fir(taps, spec.cutoff_hz, sample_rate_hz);
}

BasebandSignal synthesize_baseband_analytic(const RadarConfig& cfg,
                                            const RadialMotion& motion,
                                            double noise_std,
                                            std::uint64_t seed) {
  if (motion.r.empty()) throw DataError("empty motion series");
  if (std::fabs(motion.rate_hz - cfg.sample_rate_hz) > 1e-9)
    throw DataError("motion must be sampled at the baseband rate");

  BasebandSignal bb;
  bb.rate_hz = cfg.sample_rate_hz;
  bb.i.resize(motion.r.size());
  bb.q.resize(motion.r.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_std);
  const double half = cfg.a0 / 2.0;
  for (std::size_t k = 0; k < motion.r.size(); ++k) {
    const double phi = 4.0 * kPi * cfg.f0 * (motion.r0 + motion.r[k]) / cfg.c;
    bb.i[k] = half * std::cos(phi);
    bb.q[k] = -half * std::sin(phi);
    if (noise_std > 0.0) {
      bb.i[k] += noise(rng);
      bb.q[k] += noise(rng);
    }
  }
  return bb;
}

std::vector<double> synthesize_surveillance(const RadarConfig& cfg,
                                            const RadialMotion& motion,
                                            double noise_std,
                                            std::uint64_t seed) {
  if (motion.r.empty()) throw DataError("empty motion series");
  if (cfg.carrier_rate_hz < 8.0 * cfg.f0)
    throw NumericError("carrier_rate_hz must be >= 8*f0 to avoid aliasing");
  if (std::fabs(motion.rate_hz - cfg.carrier_rate_hz) > 1e-9)
    throw DataError("motion must be sampled at the carrier rate");

  std::vector<double> y(motion.r.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_std);
  for (std::size_t k = 0; k < motion.r.size(); ++k) {
    const double t = static_cast<double>(k) / cfg.carrier_rate_hz;
    const double phi = 4.0 * kPi * cfg.f0 * (motion.r0 + motion.r[k]) / cfg.c;
    y[k] = cfg.a0 * std::cos(2.0 * kPi * cfg.f0 * t + phi);
    if (noise_std > 0.0) y[k] += noise(rng);
  }
  return y;
}

BasebandSignal iq_demodulate(const std::vector<double>& received,
                             const RadarConfig& cfg, const FilterSpec& lp1) {
  if (received.size() < 2) throw DataError("received series too short");
  if (cfg.carrier_rate_hz <= 0.0)
    throw UsageError("iq_demodulate needs cfg.carrier_rate_hz");
  const double ratio = cfg.carrier_rate_hz / cfg.sample_rate_hz;
  const int factor = static_cast<int>(std::llround(ratio));
  if (factor < 1 || std::fabs(ratio - factor) > 1e-6)
    throw UsageError("carrier rate must be an integer multiple of the baseband rate");

  std::vector<double> xi(received.size()), xq(received.size());
  for (std::size_t k = 0; k < received.size(); ++k) {
    const double t = static_cast<double>(k) / cfg.carrier_rate_hz;
    const double arg = 2.0 * kPi * cfg.f0 * t;
    xi[k] = received[k] * std::cos(arg);
    xq[k] = received[k] * std::sin(arg);
  }

  const auto taps = design_fir(lp1, cfg.carrier_rate_hz);
  BasebandSignal bb;
  bb.rate_hz = cfg.sample_rate_hz;
  bb.i = dsp::decimate(dsp::filter_same(xi, taps), factor);
  bb.q = dsp::decimate(dsp::filter_same(xq, taps), factor);
  return bb;
}

std::vector<double> extract_phase(const BasebandSignal& bb,
                                  const FilterSpec& lp2, const FilterSpec& hp) {
  if (bb.i.size() != bb.q.size()) throw DataError("baseband I/Q length mismatch");
  if (bb.i.size() < 2) throw DataError("baseband too short");

  double peak = 0.0;
  for (std::size_t k = 0; k < bb.i.size(); ++k)
    peak = std::max(peak, std::fabs(bb.i[k]) + std::fabs(bb.q[k]));
  const double eps = 1e-6 * peak;

  std::vector<double> raw(bb.i.size());
  std::size_t degenerate_run = 0;
  for (std::size_t k = 0; k < bb.i.size(); ++k) {
    if (std::fabs(bb.i[k]) + std::fabs(bb.q[k]) <= eps) {
      if (++degenerate_run > 10)
        throw NumericError("signal lost: baseband envelope degenerate");
    } else {
      degenerate_run = 0;
    }
    raw[k] = std::atan2(-bb.q[k], bb.i[k]);
  }

  raw = dsp::unwrap_phase(std::move(raw));
  raw = dsp::filter_same(raw, design_fir(lp2, bb.rate_hz));
  raw = dsp::filter_same(raw, design_fir(hp, bb.rate_hz));
  return raw;
}

std::vector<double> displacement_from_phase(const std::vector<double>& phase,
                                            const RadarConfig& cfg) {
  std::vector<double> r(phase.size());
  const double scale = cfg.c / (4.0 * kPi * cfg.f0);
  for (std::size_t k = 0; k < phase.size(); ++k) r[k] = phase[k] * scale;
  return r;
}

namespace {

std::vector<double> central_derivative(const std::vector<double>& x, double dt) {
  std::vector<double> d(x.size(), 0.0);
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    d[k] = (x[k + 1] - x[k - 1]) / (2.0 * dt);
  }
  if (x.size() >= 2) {
    d[0] = d[1];
    d[x.size() - 1] = d[x.size() - 2];
  }
  return d;
}

} // namespace

std::vector<double> doppler_shift(const std::vector<double>& phase,
                                  const RadarConfig& cfg) {
  if (phase.size() < 2) throw DataError("phase series too short");
  const double dt = 1.0 / cfg.sample_rate_hz;
  auto d = central_derivative(phase, dt);
  for (auto& v : d) v = -v / (4.0 * kPi);
  return d;
}

std::vector<double> reconstruct_acceleration(const std::vector<double>& phase,
                                             const RadarConfig& cfg,
                                             AccelRoute route,
                                             const FilterSpec& lp2) {
  if (phase.size() < 5) throw DataError("phase series too short for acceleration");
  const double dt = 1.0 / cfg.sample_rate_hz;

  std::vector<double> a;
  if (route == AccelRoute::Displacement) {
    const auto r = displacement_from_phase(phase, cfg);
    a.assign(r.size(), 0.0);
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
      a[k] = (r[k + 1] - 2.0 * r[k] + r[k - 1]) / (dt * dt);
    }
    a[0] = a[1];
    a[r.size() - 1] = a[r.size() - 2];
  } else {
    // The shift-derivative form; negated so both routes report d^2R/dt^2.
    const auto shift = doppler_shift(phase, cfg);
    a = central_derivative(shift, dt);
    for (auto& v : a) v = -v * cfg.c / cfg.f0;
  }
  return dsp::filter_same(a, design_fir(lp2, cfg.sample_rate_hz));
}

double accel_integral_compare(const std::vector<double>& accel,
                              const std::vector<double>& phase,
                              const RadarConfig& cfg, const FilterSpec& hp) {
  if (accel.size() != phase.size())
    throw DataError("accelerometer and phase series spans differ");
  if (accel.size() < 5) throw DataError("series too short to compare");

  const double dt = 1.0 / cfg.sample_rate_hz;
  std::vector<double> vel(accel.size(), 0.0), disp(accel.size(), 0.0);
  for (std::size_t k = 1; k < accel.size(); ++k) {
    vel[k] = vel[k - 1] + 0.5 * (accel[k] + accel[k - 1]) * dt;
  }
  for (std::size_t k = 1; k < accel.size(); ++k) {
    disp[k] = disp[k - 1] + 0.5 * (vel[k] + vel[k - 1]) * dt;
  }

  const auto taps = design_fir(hp, cfg.sample_rate_hz);
  disp = dsp::filter_same(disp, taps);
  const double scale = 4.0 * kPi * cfg.f0 / cfg.c;

  // Compare over the filter-settled interior.
  const std::size_t margin = std::min(taps.size() / 2, accel.size() / 4);
  const std::size_t lo = margin, hi = accel.size() - margin;
  if (hi <= lo) throw DataError("series too short for the high-pass settling span");

  double acc = 0.0;
  for (std::size_t k = lo; k < hi; ++k) {
    const double d = disp[k] * scale - phase[k];
    acc += d * d;
  }
  return acc / static_cast<double>(hi - lo);
}

} // namespace sdi
