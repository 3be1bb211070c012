#include "sunlit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sunlit/error.hpp"

namespace sunlit {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::Environment, message);
}

double sample(std::mt19937_64& rng, const Interval& range) {
  return std::uniform_real_distribution<double>(range.lo, range.hi)(rng);
}

Vec3 spherical_to_cartesian(double azimuth, double elevation, double radius) {
  return radius * Vec3(std::cos(elevation) * std::cos(azimuth),
                       std::cos(elevation) * std::sin(azimuth),
                       std::sin(elevation));
}

}  // namespace

void EpisodeConfig::validate() const {
  dynamics.validate();
  illumination.material.validate();
  illumination.light.validate();
  require(max_steps >= 1, "max_steps must be >= 1");
  require(point_count >= 1, "point_count must be >= 1");
  require(chief_radius > 0.0, "chief_radius must be > 0");
  require(spawn_radius.lo <= spawn_radius.hi && spawn_speed.lo <= spawn_speed.hi,
          "spawn intervals must have lo <= hi");
  require(spawn_speed.lo >= 0.0, "spawn_speed must be non-negative");
  require(crash_radius >= chief_radius,
          "crash_radius must be at least the chief radius");
  require(crash_radius < spawn_radius.lo,
          "crash_radius must be below the minimum spawn radius");
  require(escape_radius > spawn_radius.hi,
          "escape_radius must exceed the maximum spawn radius");
  require(scaling.position > 0.0 && scaling.velocity > 0.0 && scaling.angle > 0.0,
          "observation scaling divisors must be > 0");
  require(clustering.max_clusters >= 1 && clustering.max_iterations >= 1,
          "clustering options must be >= 1");
}

ObservationVector Observation::raw() const {
  return {position.x(),         position.y(),         position.z(),
          velocity.x(),         velocity.y(),         velocity.z(),
          sun_angle,            points_inspected,     cluster_direction.x(),
          cluster_direction.y(), cluster_direction.z()};
}

ObservationVector Observation::normalized(const ObservationScaling& scaling,
                                          std::size_t total_points) const {
  ObservationVector v = raw();
  for (int i = 0; i < 3; ++i) {
    v[i] /= scaling.position;
    v[3 + i] /= scaling.velocity;
  }
  v[6] /= scaling.angle;
  v[7] /= static_cast<double>(std::max<std::size_t>(1, total_points));
  return v;
}

const char* to_string(Termination reason) {
  switch (reason) {
    case Termination::Running: return "running";
    case Termination::Horizon: return "horizon";
    case Termination::Crash: return "crash";
    case Termination::Escape: return "escape";
    case Termination::Complete: return "complete";
  }
  return "unknown";
}

double delta_v_of(const ActionVec& action, const CwParams& params) {
  return action.cwiseAbs().sum() / params.mass * params.dt;
}

RewardBreakdown compute_reward(std::size_t new_points, const ActionVec& action,
                               const Vec3& position, double weight,
                               const CwParams& params, double crash_radius) {
  RewardBreakdown r;
  r.weight = weight;
  r.points = 0.1 * static_cast<double>(new_points);
  r.delta_v = -weight * delta_v_of(action, params);
  r.crash = position.norm() < crash_radius ? -1.0 : 0.0;
  r.total = r.points + r.delta_v + r.crash;
  return r;
}

double update_dv_weight(double current, double mean_inspected_pct,
                        int steps_in_regime, const CurriculumConfig& cfg) {
  double next = current;
  if (steps_in_regime >= cfg.sustain_steps) {
    if (mean_inspected_pct > cfg.raise_above_pct) {
      next += cfg.increment;
    } else if (mean_inspected_pct < cfg.lower_below_pct) {
      next -= cfg.increment;
    }
  }
  return std::clamp(next, cfg.min, cfg.max);
}

DvCurriculum::DvCurriculum(CurriculumConfig cfg)
    : cfg_(cfg), weight_(std::clamp(cfg.initial, cfg.min, cfg.max)) {}

void DvCurriculum::record_episode(double inspected_pct) {
  recent_.push_back(inspected_pct);
  while (recent_.size() > static_cast<std::size_t>(cfg_.episode_window)) {
    recent_.pop_front();
  }
}

double DvCurriculum::rolling_mean() const {
  if (recent_.empty()) return 0.0;
  return std::accumulate(recent_.begin(), recent_.end(), 0.0) /
         static_cast<double>(recent_.size());
}

double DvCurriculum::observe_step() {
  if (recent_.empty()) return weight_;
  const double mean = rolling_mean();
  const int band = mean > cfg_.raise_above_pct   ? 1
                   : mean < cfg_.lower_below_pct ? -1
                                                 : 0;
  if (band != regime_) {
    regime_ = band;
    steps_in_regime_ = 0;
  }
  if (band == 0) return weight_;
  ++steps_in_regime_;
  weight_ = update_dv_weight(weight_, mean, steps_in_regime_, cfg_);
  if (steps_in_regime_ >= cfg_.sustain_steps) steps_in_regime_ = 0;
  return weight_;
}

DvCurriculum::Snapshot DvCurriculum::snapshot() const {
  return Snapshot{weight_, steps_in_regime_, regime_,
                  std::vector<double>(recent_.begin(), recent_.end())};
}

void DvCurriculum::restore(const Snapshot& s) {
  weight_ = s.weight;
  steps_in_regime_ = s.steps_in_regime;
  regime_ = s.regime;
  recent_.assign(s.recent.begin(), s.recent.end());
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

InspectionEnv::InspectionEnv(EpisodeConfig config)
    : config_(std::move(config)), propagator_(config_.dynamics) {
  config_.validate();
  points_ = generate_sphere_points(config_.point_count, config_.chief_radius);
}

Observation InspectionEnv::reset(std::uint64_t seed) {
  constexpr double kPi = std::numbers::pi;
  std::mt19937_64 rng(seed);
  const double azimuth = sample(rng, {0.0, 2.0 * kPi});
  const double elevation = sample(rng, {-kPi / 2.0, kPi / 2.0});
  const double radius = sample(rng, config_.spawn_radius);
  const double vel_azimuth = sample(rng, {0.0, 2.0 * kPi});
  const double vel_elevation = sample(rng, {-kPi / 2.0, kPi / 2.0});
  const double speed = sample(rng, config_.spawn_speed);
  const double sun_angle = sample(rng, {0.0, 2.0 * kPi});

  deputy_.position = spherical_to_cartesian(azimuth, elevation, radius);
  deputy_.velocity = spherical_to_cartesian(vel_azimuth, vel_elevation, speed);
  sun_.theta = wrap_two_pi(sun_angle);
  points_.reset_flags();
  steps_ = 0;
  delta_v_total_ = 0.0;
  reward_total_ = 0.0;
  reason_ = Termination::Running;
  episode_seed_ = seed;
  started_ = true;
  return build_observation();
}

StepResult InspectionEnv::step(const ActionVec& action) {
  if (!started_) throw Error(ErrorKind::Environment, "step before reset");
  if (done()) {
    throw Error(ErrorKind::Environment,
                std::string("episode already finished (") + to_string(reason_) +
                    ")");
  }
  const ActionVec thrust =
      clamp_control(action, config_.dynamics.max_thrust);
  deputy_ = propagator_.step(deputy_, thrust);
  sun_ = propagate_sun(sun_, config_.dynamics);
  ++steps_;

  StepResult result;
  const double distance = deputy_.position.norm();
  if (distance > config_.chief_radius) {
    const auto in_view = visible_points(deputy_.position, points_);
    const auto usable =
        inspectable_points(points_, in_view, deputy_.position,
                           sun_unit_vector(sun_), config_.illumination);
    for (const std::size_t idx : usable) {
      if (!points_.inspected[idx]) {
        points_.inspected[idx] = true;
        result.newly_inspected.push_back(idx);
      }
    }
  }

  result.reward =
      compute_reward(result.newly_inspected.size(), thrust, deputy_.position,
                     dv_weight_, config_.dynamics, config_.crash_radius);
  delta_v_total_ += delta_v_of(thrust, config_.dynamics);
  reward_total_ += result.reward.total;

  if (distance < config_.crash_radius) {
    reason_ = Termination::Crash;
  } else if (distance > config_.escape_radius) {
    reason_ = Termination::Escape;
  } else if (points_.inspected_count() == points_.size()) {
    reason_ = Termination::Complete;
  } else if (steps_ >= config_.max_steps) {
    reason_ = Termination::Horizon;
  }
  result.reason = reason_;
  result.done = done();
  result.observation = build_observation();
  return result;
}

Observation InspectionEnv::build_observation() const {
  Observation obs;
  obs.position = deputy_.position;
  obs.velocity = deputy_.velocity;
  obs.sun_angle = sun_.theta;
  obs.points_inspected = static_cast<double>(points_.inspected_count());
  obs.cluster_direction =
      cluster_uninspected(points_, mix_seed(episode_seed_, 0x6b6d65616e73ULL),
                          config_.clustering)
          .direction;
  return obs;
}

ObservationVector InspectionEnv::normalized_observation() const {
  return build_observation().normalized(config_.scaling, points_.size());
}

double InspectionEnv::inspected_pct() const {
  return 100.0 * static_cast<double>(points_.inspected_count()) /
         static_cast<double>(points_.size());
}

InspectionEnv::Snapshot InspectionEnv::snapshot() const {
  Snapshot s;
  s.deputy = deputy_;
  s.sun = sun_;
  s.inspected = points_.inspected;
  s.steps = steps_;
  s.delta_v_total = delta_v_total_;
  s.reward_total = reward_total_;
  s.reason = reason_;
  s.episode_seed = episode_seed_;
  s.started = started_;
  s.dv_weight = dv_weight_;
  return s;
}

void InspectionEnv::restore(const Snapshot& s) {
  if (s.inspected.size() != points_.size()) {
    throw Error(ErrorKind::Environment,
                "snapshot point count does not match this environment");
  }
  deputy_ = s.deputy;
  sun_ = s.sun;
  points_.inspected = s.inspected;
  steps_ = s.steps;
  delta_v_total_ = s.delta_v_total;
  reward_total_ = s.reward_total;
  reason_ = s.reason;
  episode_seed_ = s.episode_seed;
  started_ = s.started;
  dv_weight_ = s.dv_weight;
}

}  // namespace sunlit
