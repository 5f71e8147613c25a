#ifndef SDI_DOPPLER_HPP_
#define SDI_DOPPLER_HPP_

#include <cstdint>
#include <vector>

#include "sdi/dsp.hpp"

namespace sdi {

// Continuous-wave radar parameters. The reference signal is
// a0*cos(2*pi*f0*t); a scatterer at distance R(t) returns a surveillance
// signal with phase 4*pi*f0*R(t)/c.
struct RadarConfig {
  double f0 = 2.4e9;            // carrier, Hz
  double a0 = 1.0;              // transmit amplitude
  double c = 3.0e8;             // propagation speed, m/s
  double sample_rate_hz = 1000.0;  // baseband processing rate
  double carrier_rate_hz = 0.0;    // full-rate synthesis; needs >= 8*f0
};

// Purely radial motion: R(t) = r0 + r(t), uniform sampling at rate_hz.
// v and a are the first and second time derivatives of r (positive away
// from the transmitter).
struct RadialMotion {
  double r0 = 1.0; // m
  std::vector<double> r;
  std::vector<double> v;
  std::vector<double> a;
  double rate_hz = 0.0;
};

RadialMotion sinusoidal_motion(double amp_m, double freq_hz, double duration_s,
                               double rate_hz, double r0 = 1.0);
RadialMotion constant_velocity_motion(double v_mps, double duration_s,
                                      double rate_hz, double r0 = 1.0);

// In-phase and quadrature baseband components; the complex form is
// z = x_i + i*(-x_q).
struct BasebandSignal {
  std::vector<double> i;
  std::vector<double> q;
  double rate_hz = 0.0;
};

struct FilterSpec {
  enum class Kind { LowPass, HighPass };
  Kind kind = Kind::LowPass;
  double cutoff_hz = 0.0;
  int taps = 0; // 0 = choose from the cutoff (Hamming windowed sinc)

  static FilterSpec low_pass(double cutoff_hz, int taps = 0) {
    return {Kind::LowPass, cutoff_hz, taps};
  }
  static FilterSpec high_pass(double cutoff_hz, int taps = 0) {
    return {Kind::HighPass, cutoff_hz, taps};
  }
};

std::vector<double> design_fir(const FilterSpec& spec, double sample_rate_hz);

// Baseband synthesized directly from the mixer identities
//   x_i = (a_r/2) cos(phi(t)),  x_q = -(a_r/2) sin(phi(t))
// at cfg.sample_rate_hz; full-rate carrier synthesis at GHz carriers is
// infeasible, and the identities are exact. Motion must be sampled at the
// baseband rate.
BasebandSignal synthesize_baseband_analytic(const RadarConfig& cfg,
                                            const RadialMotion& motion,
                                            double noise_std = 0.0,
                                            std::uint64_t seed = 0);

// Full-rate received signal a_r*cos(2*pi*f0*t + phi(t)) + w(t) at
// cfg.carrier_rate_hz (validation mode for low carriers). Motion must be
// sampled at the carrier rate. Errors when carrier_rate < 8*f0.
std::vector<double> synthesize_surveillance(const RadarConfig& cfg,
                                            const RadialMotion& motion,
                                            double noise_std = 0.0,
                                            std::uint64_t seed = 0);

// Mix with the reference and its quadrature copy, low-pass (2*f0 images
// attenuated), then decimate to cfg.sample_rate_hz.
BasebandSignal iq_demodulate(const std::vector<double>& received,
                             const RadarConfig& cfg,
                             const FilterSpec& lp1 = FilterSpec::low_pass(500.0));

// Four-quadrant phase with +-2*pi jump correction, then low-pass, then
// high-pass to strip the DC 4*pi*f0*r0/c term:
//   phase(t) ~= (4*pi/c) * f0 * r(t)
// Errors when the envelope |x_i|+|x_q| stays degenerate for more than 10
// consecutive samples.
std::vector<double> extract_phase(const BasebandSignal& bb,
                                  const FilterSpec& lp2 = FilterSpec::low_pass(100.0),
                                  const FilterSpec& hp = FilterSpec::high_pass(0.5));

// Doppler shift series, positive for motion toward the transmitter.
std::vector<double> doppler_shift(const std::vector<double>& phase,
                                  const RadarConfig& cfg);

// Reconstructed radial acceleration d^2R/dt^2 (positive away), low-passed.
// Displacement route: double-differentiate r_hat = phase*c/(4*pi*f0).
// Shift route: differentiate the Doppler shift (noisier; sign-adjusted to
// the same output convention).
enum class AccelRoute { Displacement, ViaShift };

std::vector<double> reconstruct_acceleration(
    const std::vector<double>& phase, const RadarConfig& cfg,
    AccelRoute route = AccelRoute::Displacement,
    const FilterSpec& lp2 = FilterSpec::low_pass(100.0));

// Displacement recovered from the extracted phase, meters.
std::vector<double> displacement_from_phase(const std::vector<double>& phase,
                                            const RadarConfig& cfg);

// Cross-check against the accelerometer: double-integrate the co-timed
// accelerometer series, high-pass, scale to phase units, and return the MSE
// against the extracted phase over the filter-settled interior.
double accel_integral_compare(const std::vector<double>& accel,
                              const std::vector<double>& phase,
                              const RadarConfig& cfg,
                              const FilterSpec& hp = FilterSpec::high_pass(0.5));

} // namespace sdi

#endif // SDI_DOPPLER_HPP_
