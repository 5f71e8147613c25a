#ifndef SDI_TRACE_HPP_
#define SDI_TRACE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "sdi/vec3.hpp"

namespace sdi {

enum class SensorKind { Gyroscope, Magnetometer, Accelerometer };
enum class Label { Benign, RockingAttack, RollingAttack };
enum class Activity { Rest, Walking, Running, Pocket, Shake, ToFro };

const char* to_string(SensorKind k);
const char* to_string(Label l);
const char* to_string(Activity a);

SensorKind sensor_from_string(const std::string& s);
Label label_from_string(const std::string& s);
Activity activity_from_string(const std::string& s);

struct Sample {
  std::int64_t t_ns = 0; // nanoseconds since trace start, strictly increasing
  Vec3 v;
};

// One timestamped sensor recording. session_id ties the gyroscope and
// magnetometer traces recorded together; rolling-attack pairing must cross
// session boundaries.
struct Trace {
  SensorKind sensor = SensorKind::Gyroscope;
  std::vector<Sample> samples;
  Label label = Label::Benign;
  Activity activity = Activity::Rest;
  double nominal_rate_hz = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t session_id = 0;

  std::int64_t start_ns() const { return samples.front().t_ns; }
  std::int64_t end_ns() const { return samples.back().t_ns; }
  double duration_s() const {
    return static_cast<double>(end_ns() - start_ns()) * 1e-9;
  }
};

} // namespace sdi

#endif // SDI_TRACE_HPP_
