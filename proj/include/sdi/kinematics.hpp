#ifndef SDI_KINEMATICS_HPP_
#define SDI_KINEMATICS_HPP_

#include "sdi/vec3.hpp"

namespace sdi {

// Tait-Bryan angles, x-y-z sequence (roll phi, pitch theta, yaw psi).
// Angles are not normalized mod 2*pi; trig handles periodicity.
struct EulerAngles {
  double phi = 0.0;   // roll, rad
  double theta = 0.0; // pitch, rad
  double psi = 0.0;   // yaw, rad
};

struct EulerRates {
  double phi_dot = 0.0;   // rad/s
  double theta_dot = 0.0; // rad/s
  double psi_dot = 0.0;   // rad/s
};

// Rotation about the initial Z axis:
//   [  cos(psi)  sin(psi)  0 ]
//   [ -sin(psi)  cos(psi)  0 ]
//   [     0         0      1 ]
// Throws NumericError for non-finite input.
Mat3 rotation_about_z(double psi);

// Rotation about the intermediate Y axis:
//   [ cos(theta)  0  -sin(theta) ]
//   [     0       1       0      ]
//   [ sin(theta)  0   cos(theta) ]
Mat3 rotation_about_y(double theta);

// Rotation about the final X axis:
//   [ 1      0          0     ]
//   [ 0   cos(phi)   sin(phi) ]
//   [ 0  -sin(phi)   cos(phi) ]
Mat3 rotation_about_x(double phi);

// World-to-device rotation, composed in the order R(phi) * R(theta) * R(psi).
Mat3 compose_rotation(const EulerAngles& angles);

// v_device = R * v_world. Preserves Euclidean norm for orthogonal R.
Vec3 transform_to_device(const Mat3& r, const Vec3& v_world);

// Angular velocity in Cartesian device-frame coordinates:
//   w_xd = phi_dot - psi_dot * sin(theta)
//   w_yd = theta_dot * cos(phi) + psi_dot * cos(theta) * sin(phi)
//   w_zd = -theta_dot * sin(phi) + psi_dot * cos(theta) * cos(phi)
// Euler-rate inversion is undefined near theta = +-pi/2; only this forward
// map is provided, and the simulator keeps |theta| <= pi/2 - 0.01.
Vec3 angular_velocity_device(const EulerAngles& angles, const EulerRates& rates);

// Skew-symmetric matrix S with (dR/dt) * R^T = S for angular velocity w
// expressed in the device frame:
//   [   0    w_z  -w_y ]
//   [ -w_z    0    w_x ]
//   [  w_y  -w_x    0  ]
Mat3 skew_from_omega(const Vec3& omega_d);

} // namespace sdi

#endif // SDI_KINEMATICS_HPP_
