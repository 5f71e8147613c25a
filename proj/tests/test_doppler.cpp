#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "sdi/doppler.hpp"
#include "sdi/errors.hpp"

using namespace sdi;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Phase of a real series at one frequency via correlation.
double tone_phase(const std::vector<double>& x, double freq_hz, double fs) {
  std::complex<double> acc(0.0, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ang = -2.0 * kPi * freq_hz * static_cast<double>(i) / fs;
    acc += x[i] * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return std::arg(acc);
}

double max_abs_in(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
  double m = 0.0;
  for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::fabs(x[i]));
  return m;
}

} // namespace

TEST_CASE("static target gives constant I/Q at the mixer closed form") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  RadialMotion still = sinusoidal_motion(0.0, 1.0, 2.0, cfg.sample_rate_hz, 1.25);
  const BasebandSignal bb = synthesize_baseband_analytic(cfg, still);

  const double phi0 = 4.0 * kPi * cfg.f0 * 1.25 / cfg.c;
  for (std::size_t i = 0; i < bb.i.size(); ++i) {
    CHECK(bb.i[i] == doctest::Approx(0.5 * std::cos(phi0)).epsilon(1e-12));
    CHECK(bb.q[i] == doctest::Approx(-0.5 * std::sin(phi0)).epsilon(1e-12));
  }
}

TEST_CASE("approaching motion: positive Doppler shift and -90 degree I/Q relation") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  const double speed = 0.1; // m/s
  // approaching: R(t) decreasing
  RadialMotion approach = constant_velocity_motion(-speed, 10.0, cfg.sample_rate_hz, 3.0);
  const BasebandSignal bb = synthesize_baseband_analytic(cfg, approach);

  // raw unwrapped phase slope: 4*pi*f0*dR/dt / c, shift = -slope/(4*pi)
  std::vector<double> raw(bb.i.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = std::atan2(-bb.q[i], bb.i[i]);
  raw = dsp::unwrap_phase(std::move(raw));
  const double duration = static_cast<double>(raw.size() - 1) / cfg.sample_rate_hz;
  const double slope = (raw.back() - raw.front()) / duration;
  const double shift = -slope / (4.0 * kPi);
  CHECK(shift == doctest::Approx(speed / cfg.c * cfg.f0).epsilon(1e-6));
  CHECK(shift > 0.0);

  // baseband tone at 2*f0*v/c; Q lags I by 90 degrees when approaching
  const double tone = 2.0 * cfg.f0 * speed / cfg.c;
  const std::size_t n = 10000; // integer number of cycles at 1.6 Hz
  std::vector<double> i_trim(bb.i.begin(), bb.i.begin() + n);
  std::vector<double> q_trim(bb.q.begin(), bb.q.begin() + n);
  double delta = tone_phase(q_trim, tone, cfg.sample_rate_hz) -
                 tone_phase(i_trim, tone, cfg.sample_rate_hz);
  while (delta > kPi) delta -= 2.0 * kPi;
  while (delta < -kPi) delta += 2.0 * kPi;
  CHECK(delta == doctest::Approx(-kPi / 2.0).epsilon(1e-3));

  // receding: +90 degrees
  RadialMotion recede = constant_velocity_motion(speed, 10.0, cfg.sample_rate_hz, 3.0);
  const BasebandSignal bbr = synthesize_baseband_analytic(cfg, recede);
  std::vector<double> ir(bbr.i.begin(), bbr.i.begin() + n);
  std::vector<double> qr(bbr.q.begin(), bbr.q.begin() + n);
  double delta_r = tone_phase(qr, tone, cfg.sample_rate_hz) -
                   tone_phase(ir, tone, cfg.sample_rate_hz);
  while (delta_r > kPi) delta_r -= 2.0 * kPi;
  while (delta_r < -kPi) delta_r += 2.0 * kPi;
  CHECK(delta_r == doctest::Approx(kPi / 2.0).epsilon(1e-3));
}

TEST_CASE("extracted phase amplitude matches 4*pi*f0*A/c") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  const double amp = 0.05;
  RadialMotion motion = sinusoidal_motion(amp, 1.0, 12.0, cfg.sample_rate_hz);
  const BasebandSignal bb = synthesize_baseband_analytic(cfg, motion);
  const auto phase = extract_phase(bb);

  const double expected = 4.0 * kPi * cfg.f0 * amp / cfg.c; // 5.0265 rad
  CHECK(expected == doctest::Approx(5.0265).epsilon(1e-4));
  const std::size_t lo = phase.size() * 2 / 5, hi = phase.size() * 3 / 5;
  CHECK(max_abs_in(phase, lo, hi) == doctest::Approx(expected).epsilon(0.02));

  // recovered displacement tracks the true motion in the settled interior
  const auto recovered = displacement_from_phase(phase, cfg);
  double dot = 0.0, nr = 0.0, nt = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    dot += recovered[i] * motion.r[i];
    nr += recovered[i] * recovered[i];
    nt += motion.r[i] * motion.r[i];
  }
  CHECK(dot / std::sqrt(nr * nt) >= 0.99);
}

TEST_CASE("zero motion leaves no phase after high-pass settling") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  RadialMotion still = sinusoidal_motion(0.0, 1.0, 12.0, cfg.sample_rate_hz, 2.0);
  const auto phase = extract_phase(synthesize_baseband_analytic(cfg, still));
  const std::size_t lo = phase.size() * 2 / 5, hi = phase.size() * 3 / 5;
  CHECK(max_abs_in(phase, lo, hi) < 1e-9);
}

TEST_CASE("phase extraction reports a lost signal on a dead envelope") {
  BasebandSignal bb;
  bb.rate_hz = 1000.0;
  for (int i = 0; i < 3000; ++i) {
    const bool dead = i > 1000 && i < 1100;
    bb.i.push_back(dead ? 0.0 : 0.5);
    bb.q.push_back(0.0);
  }
  CHECK_THROWS_AS(extract_phase(bb), NumericError);
}

TEST_CASE("reconstructed acceleration amplitude within 5 percent") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  const double amp = 0.05, freq = 1.0;
  RadialMotion motion = sinusoidal_motion(amp, freq, 12.0, cfg.sample_rate_hz);
  const auto phase = extract_phase(synthesize_baseband_analytic(cfg, motion));
  const auto accel = reconstruct_acceleration(phase, cfg);

  const double expected = amp * std::pow(2.0 * kPi * freq, 2.0); // peak of A*w^2
  const std::size_t lo = accel.size() * 2 / 5, hi = accel.size() * 3 / 5;
  CHECK(max_abs_in(accel, lo, hi) == doctest::Approx(expected).epsilon(0.05));

  // against the simulated accelerometer: RMSE <= 10% of peak
  double err2 = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double d = accel[i] - motion.a[i];
    err2 += d * d;
  }
  const double rmse = std::sqrt(err2 / static_cast<double>(hi - lo));
  CHECK(rmse <= 0.10 * expected);

  // both acceleration routes agree in sign and scale
  const auto via_shift = reconstruct_acceleration(phase, cfg, AccelRoute::ViaShift);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    dot += accel[i] * via_shift[i];
    na += accel[i] * accel[i];
    nb += via_shift[i] * via_shift[i];
  }
  CHECK(dot / std::sqrt(na * nb) >= 0.99);
}

TEST_CASE("constant-velocity motion reconstructs to near-zero acceleration") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  RadialMotion motion = constant_velocity_motion(0.02, 12.0, cfg.sample_rate_hz, 5.0);
  const auto phase = extract_phase(synthesize_baseband_analytic(cfg, motion));
  const auto accel = reconstruct_acceleration(phase, cfg);
  const std::size_t lo = accel.size() * 2 / 5, hi = accel.size() * 3 / 5;
  // relative to the acceleration a 1 Hz motion of equal phase swing would have
  CHECK(max_abs_in(accel, lo, hi) < 0.05);
}

TEST_CASE("full-rate demodulation matches the analytic mixer identities") {
  RadarConfig cfg;
  cfg.f0 = 10e3;
  cfg.sample_rate_hz = 1000.0;
  cfg.carrier_rate_hz = 80e3;

  RadialMotion still = sinusoidal_motion(0.0, 1.0, 2.0, cfg.carrier_rate_hz, 40.0);
  const auto received = synthesize_surveillance(cfg, still);
  const BasebandSignal bb = iq_demodulate(received, cfg);

  const double phi0 = 4.0 * kPi * cfg.f0 * 40.0 / cfg.c;
  const std::size_t lo = bb.i.size() / 4, hi = bb.i.size() * 3 / 4;
  for (std::size_t i = lo; i < hi; ++i) {
    CHECK(bb.i[i] == doctest::Approx(0.5 * std::cos(phi0)).epsilon(1e-3));
    CHECK(bb.q[i] == doctest::Approx(-0.5 * std::sin(phi0)).epsilon(1e-3));
    // 2*f0 images suppressed: envelope pinned to (A/2)^2
    const double env2 = bb.i[i] * bb.i[i] + bb.q[i] * bb.q[i];
    CHECK(env2 == doctest::Approx(0.25).epsilon(2e-3));
  }

  RadarConfig bad = cfg;
  bad.carrier_rate_hz = 4.0 * cfg.f0;
  CHECK_THROWS_AS(synthesize_surveillance(bad, still), NumericError);
}

TEST_CASE("noise-only input passes the FIR noise-gain oracle") {
  RadarConfig cfg;
  cfg.f0 = 10e3;
  cfg.sample_rate_hz = 1000.0;
  cfg.carrier_rate_hz = 80e3;

  const double sigma = 0.3;
  std::mt19937_64 rng(20);
  std::normal_distribution<double> noise(0.0, sigma);
  std::vector<double> received(160000);
  for (auto& v : received) v = noise(rng);

  const auto taps = design_fir(FilterSpec::low_pass(500.0), cfg.carrier_rate_hz);
  double gain2 = 0.0;
  for (const double h : taps) gain2 += h * h;

  const BasebandSignal bb = iq_demodulate(received, cfg);
  double var = 0.0;
  for (const double v : bb.i) var += v * v;
  var /= static_cast<double>(bb.i.size());

  const double expected = sigma * sigma / 2.0 * gain2;
  CHECK(var == doctest::Approx(expected).epsilon(0.25));
}

TEST_CASE("phase chain is linear: superposition of two motions") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  const double rate = cfg.sample_rate_hz;
  RadialMotion m1 = sinusoidal_motion(0.0008, 1.0, 12.0, rate);
  RadialMotion m2 = sinusoidal_motion(0.0005, 2.5, 12.0, rate);
  RadialMotion sum = m1;
  for (std::size_t i = 0; i < sum.r.size(); ++i) {
    sum.r[i] += m2.r[i];
    sum.v[i] += m2.v[i];
    sum.a[i] += m2.a[i];
  }

  const auto p1 = extract_phase(synthesize_baseband_analytic(cfg, m1));
  const auto p2 = extract_phase(synthesize_baseband_analytic(cfg, m2));
  const auto ps = extract_phase(synthesize_baseband_analytic(cfg, sum));

  const std::size_t lo = ps.size() * 2 / 5, hi = ps.size() * 3 / 5;
  double err2 = 0.0, ref2 = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double d = ps[i] - (p1[i] + p2[i]);
    err2 += d * d;
    ref2 += ps[i] * ps[i];
  }
  CHECK(std::sqrt(err2 / ref2) < 1e-6);
}

TEST_CASE("accelerometer integral comparison flags corrupted accelerometers") {
  RadarConfig cfg;
  cfg.f0 = 2.4e9;
  const double amp = 0.05, freq = 1.0;
  RadialMotion motion = sinusoidal_motion(amp, freq, 12.0, cfg.sample_rate_hz);
  const auto phase = extract_phase(synthesize_baseband_analytic(cfg, motion));

  // consistent accelerometer: true radial acceleration plus mild noise
  std::mt19937_64 rng(21);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> accel = motion.a;
  for (auto& v : accel) v += noise(rng);
  const double benign = accel_integral_compare(accel, phase, cfg);

  // rocking-attacked accelerometer: replacement noise
  std::uniform_real_distribution<double> attack(-4.0, 4.0);
  std::vector<double> attacked(accel.size());
  for (auto& v : attacked) v = attack(rng);
  const double corrupted = accel_integral_compare(attacked, phase, cfg);
  CHECK(corrupted >= 10.0 * benign);

  // zero motion on both sensors: residual near zero
  RadialMotion still = sinusoidal_motion(0.0, 1.0, 12.0, cfg.sample_rate_hz, 2.0);
  const auto still_phase = extract_phase(synthesize_baseband_analytic(cfg, still));
  const std::vector<double> still_accel(still_phase.size(), 0.0);
  CHECK(accel_integral_compare(still_accel, still_phase, cfg) < 1e-12);

  std::vector<double> short_accel(10, 0.0);
  CHECK_THROWS_AS(accel_integral_compare(short_accel, phase, cfg), DataError);
}
