#ifndef SDI_SIM_HPP_
#define SDI_SIM_HPP_

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "sdi/kinematics.hpp"
#include "sdi/trace.hpp"

namespace sdi {

// One sinusoidal component of an Euler-angle track.
struct Sinusoid {
  double amp = 0.0;      // rad
  double freq_hz = 0.0;
  double phase = 0.0;    // rad
};

// angle(t) = offset + drift*t + sum amp*sin(2*pi*f*t + phase); rate(t) is
// the exact analytic derivative, so simulated gyro samples carry no
// discretization bias.
struct AngleTrack {
  double offset = 0.0;
  double drift = 0.0; // rad/s
  std::vector<Sinusoid> parts;

  double value(double t) const;
  double rate(double t) const;
};

struct Trajectory {
  AngleTrack phi, theta, psi;

  EulerAngles angles(double t) const;
  EulerRates rates(double t) const;
};

struct MotionProfile {
  Activity kind = Activity::Rest;
  double amplitude_rad = 0.0;   // master angle amplitude
  double base_freq_hz = 0.0;    // dominant motion frequency
  double gyro_noise_std = 0.005; // rad/s, per axis
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  std::int64_t jitter_ns = 0;   // uniform timestamp jitter, 0 = regular grid
  double gyro_rate_hz = 200.0;
  double mag_rate_hz = 100.0;
};

// Preset parameterization per activity; amplitude/frequency stay tunable.
MotionProfile default_profile(Activity kind, std::uint64_t seed);

struct MagneticEnvironment {
  Vec3 b_world{30.0, 0.0, 40.0}; // microtesla, |B| = 50
  double sensor_noise_std = 0.1; // microtesla, per axis
};

enum class AttackMode { Rocking, Rolling };
enum class RockingWaveform { Sine, UniformNoise };

struct AttackConfig {
  AttackMode mode = AttackMode::Rocking;
  RockingWaveform waveform = RockingWaveform::Sine;
  double freq_hz = 15.0;   // Sine waveform only
  double amplitude = 12.0; // sensor units (rad/s for gyro)
  double duty = 1.0;       // trailing fraction of the trace attacked, (0,1]
  std::uint64_t seed = 0;
};

// Additive low-frequency magnetic interference aimed at the magnetometer.
// Models a 1 Hz solenoid source whose coupling per axis follows `orientation`.
struct SolenoidConfig {
  Vec3 orientation{0.0, 0.0, 1.0}; // unit vector, per-axis coupling
  double amplitude_ut = 30.0;
  double freq_hz = 1.0;
  double duty = 1.0;
  std::uint64_t seed = 0;
};

// Build the smooth Euler-angle trajectory for a profile (deterministic in
// profile.seed). Exposed so oracle tests can also drive custom trajectories.
Trajectory make_trajectory(const MotionProfile& profile);

// Sample a gyroscope/magnetometer pair along a trajectory sharing one world
// timeline. Gyro samples are angular_velocity_device + Gaussian noise at
// gyro_rate_hz; mag samples are R(t)*B_world + Gaussian noise at mag_rate_hz.
std::pair<Trace, Trace> simulate_pair_from_trajectory(
    const Trajectory& traj, const MotionProfile& profile,
    const MagneticEnvironment& env, double duration_s, std::uint64_t seed);

// Convenience wrapper: trajectory from profile, then sample. `duration_s`
// and `seed` override the profile's own fields.
std::pair<Trace, Trace> simulate_benign_pair(const MotionProfile& profile,
                                             const MagneticEnvironment& env,
                                             double duration_s,
                                             std::uint64_t seed);

// Replace readings in the trailing cfg.duty fraction of the trace with the
// configured waveform (resonance takeover: output is unrelated to motion).
// Label becomes RockingAttack.
Trace apply_rocking_attack(const Trace& trace, const AttackConfig& cfg);

// Per-axis gains applied to the Sine rocking waveform, derived from cfg.seed.
Vec3 rocking_axis_mix(const AttackConfig& cfg);

// Add the solenoid sinusoid to the trailing cfg.duty fraction of a
// magnetometer trace. Label becomes RockingAttack.
Trace apply_solenoid_attack(const Trace& trace, const SolenoidConfig& cfg);

// Draw one gyro and one mag trace from different sessions; labels become
// RollingAttack. Never pairs a trace with its own session partner.
std::pair<Trace, Trace> make_rolling_pair(const std::vector<Trace>& gyro_pool,
                                          const std::vector<Trace>& mag_pool,
                                          std::uint64_t seed);

// Both traces linearly interpolated onto a shared uniform grid covering the
// intersection of their spans.
struct AlignedSeries {
  std::vector<std::int64_t> t_ns;
  std::vector<Vec3> gyro;
  std::vector<Vec3> mag;
  double rate_hz = 0.0;
};

AlignedSeries resample_to_common_grid(const Trace& gyro, const Trace& mag,
                                      double rate_hz);

// Linear interpolation of one trace at arbitrary query times inside its span.
Vec3 interpolate_at(const Trace& trace, std::int64_t t_ns);

// Dataset generation mirroring the collection methodology: per benign
// activity `per_activity` sessions, `per_rocking_variant` gyro corruption
// traces per waveform, `solenoid_traces` magnetometer interference traces,
// and `rolling_pairs` cross-session pairings.
struct DatasetConfig {
  int per_activity = 100;
  int per_rocking_variant = 250;
  int solenoid_traces = 500;
  int rolling_pairs = 500;
  double duration_s = 10.0;
  std::uint64_t seed = 0;
  MagneticEnvironment env;
  double gyro_noise_std = 0.005;
  std::int64_t jitter_ns = 0;
  double rocking_sine_freq_hz = 15.0;
  double rocking_amplitude = 12.0;
  double solenoid_amplitude_ut = 30.0;
  // A replayed static trace over a static device satisfies the fusion
  // relation exactly, so rest-on-rest pairings carry no detectable signal.
  bool rolling_exclude_rest_rest = true;
};

// Every group is stored as (gyro, mag) session pairs so both the single-
// sensor and the fusion defenses can be trained from one dataset.
struct TraceDataset {
  std::vector<std::pair<Trace, Trace>> benign_pairs;
  std::vector<std::pair<Trace, Trace>> rocking_pairs;  // gyro attacked
  std::vector<std::pair<Trace, Trace>> solenoid_pairs; // mag attacked
  std::vector<std::pair<Trace, Trace>> rolling_pairs;  // cross-session
};

TraceDataset generate_dataset(const DatasetConfig& cfg);

constexpr std::array<Activity, 5> kBenignActivities = {
    Activity::Walking, Activity::Running, Activity::Rest, Activity::Pocket,
    Activity::Shake};

} // namespace sdi

#endif // SDI_SIM_HPP_
