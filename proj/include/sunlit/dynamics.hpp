#pragma once

#include <Eigen/Dense>

namespace sunlit {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;

/// Chief orbit and deputy actuator parameters.
struct CwParams {
  double mean_motion = 0.001027;  // rad/s
  double mass = 12.0;             // kg
  double max_thrust = 1.0;        // N, per axis
  double dt = 10.0;               // s

  /// Throws a Dynamics error when any field is non-positive or non-finite.
  void validate() const;
};

/// Deputy position and velocity in Hill's frame.
struct DeputyState {
  Vec3 position = Vec3::Zero();  // m
  Vec3 velocity = Vec3::Zero();  // m/s

  Vec6 as_vector() const;
  static DeputyState from_vector(const Vec6& v);
  bool is_finite() const;
};

/// Per-axis thrust in Newtons.
using ControlInput = Vec3;

/// Sun angle measured from the Hill-frame x axis, kept in [0, 2*pi).
struct SunState {
  double theta = 0.0;
};

double wrap_two_pi(double angle);

/// Clamps each axis to [-max_thrust, max_thrust]. NaN components become 0.
ControlInput clamp_control(const ControlInput& u, double max_thrust);

// Continuous-time CW system matrices.
Mat6 cw_state_matrix(double mean_motion);
Mat63 cw_input_matrix(double mass);

/// Exact zero-order-hold discretization of the CW equations over one step.
///
/// The transition pair is taken from the exponential of the augmented system
/// [[A, B], [0, 0]] * dt, so x' = Phi x + Gamma u holds exactly for a thrust
/// held constant across the step. Construct once per parameter set and reuse.
class CwPropagator {
 public:
  explicit CwPropagator(const CwParams& params);

  /// Advances one step. The control is clamped to the thrust bound first.
  DeputyState step(const DeputyState& state, const ControlInput& u) const;

  const CwParams& params() const { return params_; }
  const Mat6& transition() const { return phi_; }
  const Mat63& input_gain() const { return gamma_; }

 private:
  CwParams params_;
  Mat6 phi_;
  Mat63 gamma_;
};

DeputyState propagate_deputy(const DeputyState& state, const ControlInput& u,
                             const CwParams& params);

SunState propagate_sun(const SunState& sun, const CwParams& params);

/// (cos theta, sin theta, 0).
Vec3 sun_unit_vector(const SunState& sun);

}  // namespace sunlit
