#include "sdi/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "sdi/errors.hpp"

namespace sdi {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kThetaLimit = kPi / 2.0 - 0.011; // gimbal-lock guard

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d49bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x51'7c'c1'b7'27'22'0a'95ULL * (stream + 1));
  return splitmix64(s);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace

const char* to_string(SensorKind k) {
  switch (k) {
    case SensorKind::Gyroscope: return "gyroscope";
    case SensorKind::Magnetometer: return "magnetometer";
    case SensorKind::Accelerometer: return "accelerometer";
  }
  return "?";
}

const char* to_string(Label l) {
  switch (l) {
    case Label::Benign: return "benign";
    case Label::RockingAttack: return "rocking";
    case Label::RollingAttack: return "rolling";
  }
  return "?";
}

const char* to_string(Activity a) {
  switch (a) {
    case Activity::Rest: return "rest";
    case Activity::Walking: return "walking";
    case Activity::Running: return "running";
    case Activity::Pocket: return "pocket";
    case Activity::Shake: return "shake";
    case Activity::ToFro: return "tofro";
  }
  return "?";
}

SensorKind sensor_from_string(const std::string& s) {
  if (s == "gyroscope") return SensorKind::Gyroscope;
  if (s == "magnetometer") return SensorKind::Magnetometer;
  if (s == "accelerometer") return SensorKind::Accelerometer;
  throw DataError("unknown sensor kind: " + s);
}

Label label_from_string(const std::string& s) {
  if (s == "benign") return Label::Benign;
  if (s == "rocking") return Label::RockingAttack;
  if (s == "rolling") return Label::RollingAttack;
  throw DataError("unknown label: " + s);
}

Activity activity_from_string(const std::string& s) {
  if (s == "rest") return Activity::Rest;
  if (s == "walking") return Activity::Walking;
  if (s == "running") return Activity::Running;
  if (s == "pocket") return Activity::Pocket;
  if (s == "shake") return Activity::Shake;
  if (s == "tofro") return Activity::ToFro;
  throw DataError("unknown activity: " + s);
}

double AngleTrack::value(double t) const {
  double v = offset + drift * t;
  for (const auto& p : parts) v += p.amp * std::sin(2.0 * kPi * p.freq_hz * t + p.phase);
  return v;
}

double AngleTrack::rate(double t) const {
  double v = drift;
  for (const auto& p : parts) {
    const double w = 2.0 * kPi * p.freq_hz;
    v += p.amp * w * std::cos(w * t + p.phase);
  }
  return v;
}

EulerAngles Trajectory::angles(double t) const {
  return {phi.value(t), theta.value(t), psi.value(t)};
}

EulerRates Trajectory::rates(double t) const {
  return {phi.rate(t), theta.rate(t), psi.rate(t)};
}

MotionProfile default_profile(Activity kind, std::uint64_t seed) {
  MotionProfile p;
  p.kind = kind;
  p.seed = seed;
  switch (kind) {
    case Activity::Rest:
      p.amplitude_rad = 0.0;
      p.base_freq_hz = 0.0;
      break;
    case Activity::Walking:
      p.amplitude_rad = 0.35;
      p.base_freq_hz = 2.0;
      break;
    case Activity::Running:
      p.amplitude_rad = 0.55;
      p.base_freq_hz = 3.0;
      break;
    case Activity::Pocket:
      p.amplitude_rad = 0.4;
      p.base_freq_hz = 1.5;
      break;
    case Activity::Shake:
      p.amplitude_rad = 0.3;
      p.base_freq_hz = 2.5;
      break;
    case Activity::ToFro:
      p.amplitude_rad = 0.8;
      p.base_freq_hz = 0.8;
      break;
  }
  return p;
}

namespace {

AngleTrack random_track(std::mt19937_64& rng, double amp, double base_freq,
                        int parts, double offset_range) {
  AngleTrack t;
  t.offset = uniform(rng, -offset_range, offset_range);
  for (int i = 0; i < parts; ++i) {
    Sinusoid s;
    s.amp = amp * uniform(rng, 0.5, 1.0);
    s.freq_hz = base_freq * uniform(rng, 0.7, 1.3);
    s.phase = uniform(rng, 0.0, 2.0 * kPi);
    t.parts.push_back(s);
  }
  return t;
}

// Keep |theta(t)| inside the gimbal-lock guard by shrinking the track.
void clamp_theta(AngleTrack& theta) {
  double reach = std::fabs(theta.offset);
  for (const auto& p : theta.parts) reach += std::fabs(p.amp);
  if (reach <= kThetaLimit) return;
  const double scale = kThetaLimit / reach;
  theta.offset *= scale;
  for (auto& p : theta.parts) p.amp *= scale;
}

} // namespace

Trajectory make_trajectory(const MotionProfile& profile) {
  std::mt19937_64 rng(sub_seed(profile.seed, 11));
  Trajectory traj;
  const double a = profile.amplitude_rad;
  const double f = profile.base_freq_hz;
  switch (profile.kind) {
    case Activity::Rest:
      traj.phi = random_track(rng, 0.0, 0.0, 0, 0.5);
      traj.theta = random_track(rng, 0.0, 0.0, 0, 0.35);
      traj.psi = random_track(rng, 0.0, 0.0, 0, kPi);
      break;
    case Activity::Walking:
    case Activity::Running:
    case Activity::Pocket: {
      traj.phi = random_track(rng, a, f, 1, 0.4);
      traj.theta = random_track(rng, 0.8 * a, f, 1, 0.3);
      traj.psi = random_track(rng, a, f, 1, kPi);
      // slow body wander under the periodic gait, plus heading drift
      for (AngleTrack* t : {&traj.phi, &traj.theta, &traj.psi}) {
        Sinusoid s;
        s.amp = 0.3 * a * uniform(rng, 0.5, 1.0);
        s.freq_hz = uniform(rng, 0.1, 0.3);
        s.phase = uniform(rng, 0.0, 2.0 * kPi);
        t->parts.push_back(s);
      }
      traj.psi.drift = uniform(rng, -0.3, 0.3);
      break;
    }
    case Activity::Shake:
      traj.phi = random_track(rng, a, f, 2, 0.4);
      traj.theta = random_track(rng, 0.8 * a, f, 2, 0.3);
      traj.psi = random_track(rng, a, f, 2, kPi);
      break;
    case Activity::ToFro:
      traj.psi = random_track(rng, a, f, 1, kPi);
      traj.phi = random_track(rng, 0.05 * a, f, 1, 0.2);
      traj.theta = random_track(rng, 0.05 * a, f, 1, 0.2);
      break;
  }
  clamp_theta(traj.theta);
  return traj;
}

namespace {

std::vector<std::int64_t> sample_times(double duration_s, double rate_hz,
                                       std::int64_t jitter_ns,
                                       std::uint64_t seed) {
  if (rate_hz <= 0.0) throw UsageError("sample rate must be positive");
  const std::int64_t step = std::llround(1e9 / rate_hz);
  const auto n = static_cast<std::int64_t>(std::floor(duration_s * rate_hz)) + 1;
  if (n < 2) throw DataError("duration too short for 2 samples");
  std::vector<std::int64_t> t(static_cast<std::size_t>(n));
  std::mt19937_64 rng(seed);
  const std::int64_t j = std::min<std::int64_t>(jitter_ns, step / 3);
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t ti = i * step;
    if (j > 0 && i > 0) {
      ti += std::uniform_int_distribution<std::int64_t>(-j, j)(rng);
    }
    t[static_cast<std::size_t>(i)] = ti;
  }
  return t;
}

} // namespace

std::pair<Trace, Trace> simulate_pair_from_trajectory(
    const Trajectory& traj, const MotionProfile& profile,
    const MagneticEnvironment& env, double duration_s, std::uint64_t seed) {
  if (!(env.b_world.norm() > 0.0)) throw DataError("B_world must be non-zero");
  if (!std::isfinite(duration_s) || duration_s <= 0.0)
    throw DataError("duration must be positive");

  Trace gyro;
  gyro.sensor = SensorKind::Gyroscope;
  gyro.activity = profile.kind;
  gyro.nominal_rate_hz = profile.gyro_rate_hz;
  gyro.seed = seed;
  gyro.session_id = seed;

  Trace mag;
  mag.sensor = SensorKind::Magnetometer;
  mag.activity = profile.kind;
  mag.nominal_rate_hz = profile.mag_rate_hz;
  mag.seed = seed;
  mag.session_id = seed;

  std::mt19937_64 gyro_rng(sub_seed(seed, 1));
  std::mt19937_64 mag_rng(sub_seed(seed, 2));
  std::normal_distribution<double> gyro_noise(0.0, profile.gyro_noise_std);
  std::normal_distribution<double> mag_noise(0.0, env.sensor_noise_std);

  const auto gyro_t = sample_times(duration_s, profile.gyro_rate_hz,
                                   profile.jitter_ns, sub_seed(seed, 3));
  gyro.samples.reserve(gyro_t.size());
  for (const std::int64_t tn : gyro_t) {
    const double t = static_cast<double>(tn) * 1e-9;
    Vec3 w = angular_velocity_device(traj.angles(t), traj.rates(t));
    if (profile.gyro_noise_std > 0.0) {
      w.x += gyro_noise(gyro_rng);
      w.y += gyro_noise(gyro_rng);
      w.z += gyro_noise(gyro_rng);
    }
    gyro.samples.push_back({tn, w});
  }

  const auto mag_t = sample_times(duration_s, profile.mag_rate_hz,
                                  profile.jitter_ns, sub_seed(seed, 4));
  mag.samples.reserve(mag_t.size());
  for (const std::int64_t tn : mag_t) {
    const double t = static_cast<double>(tn) * 1e-9;
    Vec3 b = compose_rotation(traj.angles(t)) * env.b_world;
    if (env.sensor_noise_std > 0.0) {
      b.x += mag_noise(mag_rng);
      b.y += mag_noise(mag_rng);
      b.z += mag_noise(mag_rng);
    }
    mag.samples.push_back({tn, b});
  }

  return {std::move(gyro), std::move(mag)};
}

std::pair<Trace, Trace> simulate_benign_pair(const MotionProfile& profile,
                                             const MagneticEnvironment& env,
                                             double duration_s,
                                             std::uint64_t seed) {
  MotionProfile p = profile;
  p.seed = seed;
  return simulate_pair_from_trajectory(make_trajectory(p), p, env, duration_s,
                                       seed);
}

Vec3 rocking_axis_mix(const AttackConfig& cfg) {
  std::mt19937_64 rng(sub_seed(cfg.seed, 21));
  return {uniform(rng, 0.5, 1.0), uniform(rng, 0.5, 1.0), uniform(rng, 0.5, 1.0)};
}

namespace {

std::int64_t attack_onset_ns(const Trace& trace, double duty) {
  if (!(duty > 0.0 && duty <= 1.0)) throw UsageError("attack duty must be in (0,1]");
  const std::int64_t span = trace.end_ns() - trace.start_ns();
  const double keep = 1.0 - duty;
  return trace.start_ns() + static_cast<std::int64_t>(std::ceil(keep * static_cast<double>(span)));
}

} // namespace

Trace apply_rocking_attack(const Trace& trace, const AttackConfig& cfg) {
  if (trace.samples.empty()) throw DataError("cannot attack an empty trace");
  if (cfg.mode != AttackMode::Rocking)
    throw UsageError("apply_rocking_attack requires Rocking mode");
  if (!(cfg.amplitude > 0.0)) throw UsageError("attack amplitude must be positive");

  Trace out = trace;
  out.label = Label::RockingAttack;
  const std::int64_t onset = attack_onset_ns(trace, cfg.duty);
  const Vec3 mix = rocking_axis_mix(cfg);
  std::mt19937_64 rng(sub_seed(cfg.seed, 22));
  std::uniform_real_distribution<double> noise(-cfg.amplitude, cfg.amplitude);

  for (auto& s : out.samples) {
    if (s.t_ns < onset) continue;
    if (cfg.waveform == RockingWaveform::Sine) {
      const double t = static_cast<double>(s.t_ns - trace.start_ns()) * 1e-9;
      s.v = mix * (cfg.amplitude * std::sin(2.0 * kPi * cfg.freq_hz * t));
    } else {
      s.v = {noise(rng), noise(rng), noise(rng)};
    }
  }
  return out;
}

Trace apply_solenoid_attack(const Trace& trace, const SolenoidConfig& cfg) {
  if (trace.samples.empty()) throw DataError("cannot attack an empty trace");
  if (!(cfg.orientation.norm() > 0.0))
    throw DataError("solenoid orientation must be non-zero");
  if (!(cfg.amplitude_ut > 0.0)) throw UsageError("attack amplitude must be positive");

  Trace out = trace;
  out.label = Label::RockingAttack;
  const std::int64_t onset = attack_onset_ns(trace, cfg.duty);
  const Vec3 dir = cfg.orientation / cfg.orientation.norm();
  std::mt19937_64 rng(sub_seed(cfg.seed, 23));
  const double phase0 = uniform(rng, 0.0, 2.0 * kPi);

  for (auto& s : out.samples) {
    if (s.t_ns < onset) continue;
    const double t = static_cast<double>(s.t_ns - trace.start_ns()) * 1e-9;
    s.v = s.v + dir * (cfg.amplitude_ut * std::sin(2.0 * kPi * cfg.freq_hz * t + phase0));
  }
  return out;
}

std::pair<Trace, Trace> make_rolling_pair(const std::vector<Trace>& gyro_pool,
                                          const std::vector<Trace>& mag_pool,
                                          std::uint64_t seed) {
  if (gyro_pool.empty() || mag_pool.empty())
    throw DataError("rolling pairing needs non-empty pools");

  bool feasible = false;
  for (const auto& g : gyro_pool) {
    for (const auto& m : mag_pool) {
      if (g.session_id != m.session_id) {
        feasible = true;
        break;
      }
    }
    if (feasible) break;
  }
  if (!feasible)
    throw DataError("rolling pairing impossible: all pool traces share one session");

  std::mt19937_64 rng(sub_seed(seed, 31));
  std::uniform_int_distribution<std::size_t> gi(0, gyro_pool.size() - 1);
  std::uniform_int_distribution<std::size_t> mi(0, mag_pool.size() - 1);
  for (;;) {
    const Trace& g = gyro_pool[gi(rng)];
    const Trace& m = mag_pool[mi(rng)];
    if (g.session_id == m.session_id) continue;
    Trace og = g, om = m;
    og.label = Label::RollingAttack;
    om.label = Label::RollingAttack;
    return {std::move(og), std::move(om)};
  }
}

Vec3 interpolate_at(const Trace& trace, std::int64_t t_ns) {
  const auto& s = trace.samples;
  auto it = std::lower_bound(
      s.begin(), s.end(), t_ns,
      [](const Sample& a, std::int64_t t) { return a.t_ns < t; });
  if (it == s.end()) return s.back().v;
  if (it->t_ns == t_ns || it == s.begin()) return it->v;
  const auto prev = it - 1;
  const double alpha = static_cast<double>(t_ns - prev->t_ns) /
                       static_cast<double>(it->t_ns - prev->t_ns);
  return prev->v + (it->v - prev->v) * alpha;
}

AlignedSeries resample_to_common_grid(const Trace& gyro, const Trace& mag,
                                      double rate_hz) {
  if (rate_hz <= 0.0) throw UsageError("grid rate must be positive");
  if (gyro.samples.empty() || mag.samples.empty())
    throw DataError("cannot resample an empty trace");

  const std::int64_t t0 = std::max(gyro.start_ns(), mag.start_ns());
  const std::int64_t t1 = std::min(gyro.end_ns(), mag.end_ns());
  if (t0 > t1) throw DataError("traces do not overlap in time");

  const std::int64_t step = std::llround(1e9 / rate_hz);
  AlignedSeries out;
  out.rate_hz = rate_hz;
  for (std::int64_t t = t0; t <= t1; t += step) {
    out.t_ns.push_back(t);
    out.gyro.push_back(interpolate_at(gyro, t));
    out.mag.push_back(interpolate_at(mag, t));
  }
  return out;
}

TraceDataset generate_dataset(const DatasetConfig& cfg) {
  if (cfg.per_activity < 1 || cfg.per_rocking_variant < 0 ||
      cfg.solenoid_traces < 0 || cfg.rolling_pairs < 0)
    throw UsageError("dataset counts must be positive");

  TraceDataset ds;
  std::uint64_t counter = 0;
  auto next_seed = [&] { return sub_seed(cfg.seed, 1000 + counter++); };

  auto simulate = [&](Activity kind, std::uint64_t seed) {
    MotionProfile p = default_profile(kind, seed);
    p.gyro_noise_std = cfg.gyro_noise_std;
    p.jitter_ns = cfg.jitter_ns;
    return simulate_benign_pair(p, cfg.env, cfg.duration_s, seed);
  };

  for (Activity kind : kBenignActivities) {
    for (int i = 0; i < cfg.per_activity; ++i) {
      ds.benign_pairs.push_back(simulate(kind, next_seed()));
    }
  }

  // Corruption-attack sessions: fresh benign motion, gyro readings replaced.
  const RockingWaveform variants[] = {RockingWaveform::Sine,
                                      RockingWaveform::UniformNoise};
  for (RockingWaveform wf : variants) {
    for (int i = 0; i < cfg.per_rocking_variant; ++i) {
      const Activity kind = kBenignActivities[static_cast<std::size_t>(i) %
                                              kBenignActivities.size()];
      const std::uint64_t seed = next_seed();
      auto pair = simulate(kind, seed);
      AttackConfig ac;
      ac.waveform = wf;
      ac.freq_hz = cfg.rocking_sine_freq_hz;
      ac.amplitude = cfg.rocking_amplitude;
      ac.seed = seed;
      pair.first = apply_rocking_attack(pair.first, ac);
      ds.rocking_pairs.push_back(std::move(pair));
    }
  }

  for (int i = 0; i < cfg.solenoid_traces; ++i) {
    const Activity kind = kBenignActivities[static_cast<std::size_t>(i) %
                                            kBenignActivities.size()];
    const std::uint64_t seed = next_seed();
    auto pair = simulate(kind, seed);
    SolenoidConfig sc;
    sc.amplitude_ut = cfg.solenoid_amplitude_ut;
    sc.seed = seed;
    std::mt19937_64 orient_rng(sub_seed(seed, 41));
    sc.orientation = {uniform(orient_rng, -1.0, 1.0), uniform(orient_rng, -1.0, 1.0),
                      uniform(orient_rng, -1.0, 1.0)};
    if (sc.orientation.norm() < 1e-6) sc.orientation = {0.0, 0.0, 1.0};
    pair.second = apply_solenoid_attack(pair.second, sc);
    ds.solenoid_pairs.push_back(std::move(pair));
  }

  if (cfg.rolling_pairs > 0) {
    std::vector<Trace> gyro_pool, mag_pool;
    for (const auto& [g, m] : ds.benign_pairs) {
      gyro_pool.push_back(g);
      mag_pool.push_back(m);
    }
    for (int i = 0; i < cfg.rolling_pairs; ++i) {
      for (std::uint64_t attempt = 0;; ++attempt) {
        auto pair = make_rolling_pair(gyro_pool, mag_pool,
                                      sub_seed(cfg.seed, 5000 + i) + attempt);
        if (cfg.rolling_exclude_rest_rest &&
            pair.first.activity == Activity::Rest &&
            pair.second.activity == Activity::Rest)
          continue;
        ds.rolling_pairs.push_back(std::move(pair));
        break;
      }
    }
  }

  return ds;
}

} // namespace sdi
