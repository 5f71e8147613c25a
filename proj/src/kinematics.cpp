#include "sdi/kinematics.hpp"

#include <cmath>

#include "sdi/errors.hpp"

namespace sdi {

namespace {
void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw NumericError(std::string(what) + ": non-finite angle");
}
} // namespace

Mat3 rotation_about_z(double psi) {
  require_finite(psi, "rotation_about_z");
  const double c = std::cos(psi), s = std::sin(psi);
  Mat3 r;
  r.m[0][0] = c;
  r.m[0][1] = s;
  r.m[1][0] = -s;
  r.m[1][1] = c;
  r.m[2][2] = 1.0;
  return r;
}

Mat3 rotation_about_y(double theta) {
  require_finite(theta, "rotation_about_y");
  const double c = std::cos(theta), s = std::sin(theta);
  Mat3 r;
  r.m[0][0] = c;
  r.m[0][2] = -s;
  r.m[1][1] = 1.0;
  r.m[2][0] = s;
  r.m[2][2] = c;
  return r;
}

Mat3 rotation_about_x(double phi) {
  require_finite(phi, "rotation_about_x");
  const double c = std::cos(phi), s = std::sin(phi);
  Mat3 r;
  r.m[0][0] = 1.0;
  r.m[1][1] = c;
  r.m[1][2] = s;
  r.m[2][1] = -s;
  r.m[2][2] = c;
  return r;
}

Mat3 compose_rotation(const EulerAngles& angles) {
  return rotation_about_x(angles.phi) * rotation_about_y(angles.theta) *
         rotation_about_z(angles.psi);
}

Vec3 transform_to_device(const Mat3& r, const Vec3& v_world) {
  return r * v_world;
}

Vec3 angular_velocity_device(const EulerAngles& a, const EulerRates& r) {
  const double sphi = std::sin(a.phi), cphi = std::cos(a.phi);
  const double stheta = std::sin(a.theta), ctheta = std::cos(a.theta);
  return {r.phi_dot - r.psi_dot * stheta,
          r.theta_dot * cphi + r.psi_dot * ctheta * sphi,
          -r.theta_dot * sphi + r.psi_dot * ctheta * cphi};
}

Mat3 skew_from_omega(const Vec3& w) {
  Mat3 s;
  s.m[0][1] = w.z;
  s.m[0][2] = -w.y;
  s.m[1][0] = -w.z;
  s.m[1][2] = w.x;
  s.m[2][0] = w.y;
  s.m[2][1] = -w.x;
  return s;
}

} // namespace sdi
