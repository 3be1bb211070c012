#include "sunlit/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "sunlit/error.hpp"

namespace sunlit {

namespace {

void require_positive(double value, const char* name) {
  if (!(std::isfinite(value) && value > 0.0)) {
    throw Error(ErrorKind::Dynamics,
                std::string("CwParams.") + name + " must be finite and > 0");
  }
}

}  // namespace

void CwParams::validate() const {
  require_positive(mean_motion, "mean_motion");
  require_positive(mass, "mass");
  require_positive(max_thrust, "max_thrust");
  require_positive(dt, "dt");
}

Vec6 DeputyState::as_vector() const {
  Vec6 v;
  v << position, velocity;
  return v;
}

DeputyState DeputyState::from_vector(const Vec6& v) {
  return DeputyState{v.head<3>(), v.tail<3>()};
}

bool DeputyState::is_finite() const {
  return position.allFinite() && velocity.allFinite();
}

double wrap_two_pi(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  // fmod of a tiny negative number plus 2*pi can round up to exactly 2*pi.
  if (wrapped >= kTwoPi) wrapped = 0.0;
  return wrapped;
}

ControlInput clamp_control(const ControlInput& u, double max_thrust) {
  ControlInput out;
  for (int i = 0; i < 3; ++i) {
    const double value = std::isnan(u[i]) ? 0.0 : u[i];
    out[i] = std::clamp(value, -max_thrust, max_thrust);
  }
  return out;
}

Mat6 cw_state_matrix(double n) {
  Mat6 a = Mat6::Zero();
  a(0, 3) = 1.0;
  a(1, 4) = 1.0;
  a(2, 5) = 1.0;
  a(3, 0) = 3.0 * n * n;
  a(3, 4) = 2.0 * n;
  a(4, 3) = -2.0 * n;
  a(5, 2) = -n * n;
  return a;
}

Mat63 cw_input_matrix(double mass) {
  Mat63 b = Mat63::Zero();
  b(3, 0) = 1.0 / mass;
  b(4, 1) = 1.0 / mass;
  b(5, 2) = 1.0 / mass;
  return b;
}

CwPropagator::CwPropagator(const CwParams& params) : params_(params) {
  params_.validate();
  Eigen::Matrix<double, 9, 9> augmented = Eigen::Matrix<double, 9, 9>::Zero();
  augmented.topLeftCorner<6, 6>() = cw_state_matrix(params_.mean_motion);
  augmented.topRightCorner<6, 3>() = cw_input_matrix(params_.mass);
  augmented *= params_.dt;
  const Eigen::Matrix<double, 9, 9> expm = augmented.exp();
  phi_ = expm.topLeftCorner<6, 6>();
  gamma_ = expm.topRightCorner<6, 3>();
}

DeputyState CwPropagator::step(const DeputyState& state,
                               const ControlInput& u) const {
  if (!state.is_finite()) {
    throw Error(ErrorKind::Dynamics, "deputy state is not finite");
  }
  const ControlInput clamped = clamp_control(u, params_.max_thrust);
  return DeputyState::from_vector(phi_ * state.as_vector() + gamma_ * clamped);
}

DeputyState propagate_deputy(const DeputyState& state, const ControlInput& u,
                             const CwParams& params) {
  return CwPropagator(params).step(state, u);
}

SunState propagate_sun(const SunState& sun, const CwParams& params) {
  return SunState{wrap_two_pi(sun.theta - params.mean_motion * params.dt)};
}

Vec3 sun_unit_vector(const SunState& sun) {
  return Vec3(std::cos(sun.theta), std::sin(sun.theta), 0.0);
}

}  // namespace sunlit
