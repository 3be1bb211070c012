#include "sunlit/baselines.hpp"

#include <cmath>
#include <numbers>

#include "sunlit/error.hpp"

namespace sunlit {

const char* to_string(BaselineId id) {
  switch (id) {
    case BaselineId::ZeroThrust: return "zero_thrust";
    case BaselineId::Random: return "random";
    case BaselineId::SunSync: return "sun_sync";
  }
  return "unknown";
}

BaselineId baseline_from_string(const std::string& name) {
  for (const auto id :
       {BaselineId::ZeroThrust, BaselineId::Random, BaselineId::SunSync}) {
    if (name == to_string(id)) return id;
  }
  throw Error(ErrorKind::Config, "unknown controller id '" + name +
                                     "' (expected zero_thrust, random or sun_sync)");
}

void RandomController::reset(std::uint64_t episode_seed) {
  rng_.seed(mix_seed(seed_, episode_seed));
}

ActionVec RandomController::act(const Observation&, const InspectionEnv& env) {
  const double bound = env.dynamics().max_thrust;
  std::uniform_real_distribution<double> u(-bound, bound);
  const double fx = u(rng_);
  const double fy = u(rng_);
  const double fz = u(rng_);
  return ActionVec(fx, fy, fz);
}

Vec3 SunSyncController::station_direction(double sun_angle,
                                          double elapsed) const {
  const double azimuth = sun_angle + gains_.lead_angle;
  const double elevation =
      gains_.elevation_amplitude *
      std::sin(2.0 * std::numbers::pi * elapsed / gains_.elevation_period);
  return Vec3(std::cos(elevation) * std::cos(azimuth),
              std::cos(elevation) * std::sin(azimuth), std::sin(elevation));
}

ActionVec SunSyncController::act(const Observation& obs,
                                 const InspectionEnv& env) {
  const CwParams& cw = env.dynamics();
  const double n = cw.mean_motion;
  const double t = env.elapsed();

  const Vec3 target = station_direction(obs.sun_angle, t);
  const Vec3 current = obs.position.normalized();
  const double angle = std::acos(std::clamp(current.dot(target), -1.0, 1.0));

  Vec3 carrot = target;
  Vec3 reference_velocity = Vec3::Zero();
  if (angle > gains_.max_slew) {
    Vec3 axis = current.cross(target);
    if (axis.norm() < 1e-9) {
      axis = current.cross(Vec3::UnitZ());
      if (axis.norm() < 1e-9) axis = current.cross(Vec3::UnitX());
    }
    axis.normalize();
    carrot = current * std::cos(gains_.max_slew) +
             axis.cross(current) * std::sin(gains_.max_slew);
  } else {
    // The Sun angle decreases at the mean motion.
    const Vec3 ahead =
        station_direction(obs.sun_angle - n * cw.dt, t + cw.dt);
    reference_velocity = gains_.radius * (ahead - target) / cw.dt;
  }

  const Vec3 position_error = gains_.radius * carrot - obs.position;
  const Vec3 velocity_error = reference_velocity - obs.velocity;
  const Vec3& p = obs.position;
  const Vec3& v = obs.velocity;
  const Vec3 natural(3.0 * n * n * p.x() + 2.0 * n * v.y(), -2.0 * n * v.x(),
                     -n * n * p.z());
  const Vec3 accel =
      gains_.kp * position_error + gains_.kd * velocity_error - natural;
  return clamp_control(cw.mass * accel, cw.max_thrust);
}

ControllerFactory make_baseline(const BaselineSpec& spec) {
  switch (spec.id) {
    case BaselineId::ZeroThrust:
      return [] { return std::make_unique<ZeroThrustController>(); };
    case BaselineId::Random:
      return [seed = spec.seed] {
        return std::make_unique<RandomController>(seed);
      };
    case BaselineId::SunSync:
      return [gains = spec.sun_sync] {
        return std::make_unique<SunSyncController>(gains);
      };
  }
  throw Error(ErrorKind::Config, "unknown controller id");
}

}  // namespace sunlit
