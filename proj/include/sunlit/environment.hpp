#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "sunlit/dynamics.hpp"
#include "sunlit/geometry.hpp"
#include "sunlit/illumination.hpp"

namespace sunlit {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Fixed divisors applied to the raw observation before it reaches a policy.
/// The inspected count is divided by the total point count.
struct ObservationScaling {
  double position = 100.0;  // m
  double velocity = 0.5;    // m/s
  double angle = 6.283185307179586;
};

struct EpisodeConfig {
  int max_steps = 1224;
  Interval spawn_radius{50.0, 100.0};
  Interval spawn_speed{0.0, 0.3};
  double chief_radius = 10.0;
  double crash_radius = 15.0;  // chief radius plus a 5 m buffer
  double escape_radius = 800.0;
  int point_count = 100;
  CwParams dynamics;
  IlluminationModel illumination;
  ObservationScaling scaling;
  KMeansOptions clustering;

  void validate() const;
};

inline constexpr std::size_t kObservationSize = 11;
using ObservationVector = std::array<double, kObservationSize>;

/// Raw observation: deputy state, sun angle, inspected count and the unit
/// direction toward the largest cluster of uninspected points.
struct Observation {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double sun_angle = 0.0;
  double points_inspected = 0.0;
  Vec3 cluster_direction = Vec3::Zero();

  ObservationVector raw() const;
  ObservationVector normalized(const ObservationScaling& scaling,
                               std::size_t total_points) const;
};

/// Per-axis thrust command in Newtons.
using ActionVec = Vec3;

struct RewardBreakdown {
  double points = 0.0;
  double delta_v = 0.0;
  double crash = 0.0;
  double total = 0.0;
  double weight = 0.0;
};

enum class Termination { Running, Horizon, Crash, Escape, Complete };

const char* to_string(Termination reason);

struct StepResult {
  Observation observation;
  RewardBreakdown reward;
  bool done = false;
  Termination reason = Termination::Running;
  std::vector<std::size_t> newly_inspected;
};

/// (|fx| + |fy| + |fz|) / m * dt.
double delta_v_of(const ActionVec& action, const CwParams& params);

RewardBreakdown compute_reward(std::size_t new_points, const ActionVec& action,
                               const Vec3& position, double weight,
                               const CwParams& params, double crash_radius);

/// Schedule for the fuel-penalty weight.
struct CurriculumConfig {
  double initial = 0.001;
  double min = 0.001;
  double max = 0.1;
  double increment = 0.00005;
  double raise_above_pct = 90.0;
  double lower_below_pct = 80.0;
  int sustain_steps = 1500;
  int episode_window = 10;
};

/// One curriculum decision. `steps_in_regime` counts consecutive environment
/// steps during which the rolling mean stayed in its current band (above the
/// raise threshold or below the lower one). A change of +-increment happens
/// only once the band has been held for `sustain_steps`; the result is
/// clamped to [min, max].
double update_dv_weight(double current, double mean_inspected_pct,
                        int steps_in_regime, const CurriculumConfig& cfg = {});

/// Training-global fuel-penalty weight with its rolling statistics.
class DvCurriculum {
 public:
  explicit DvCurriculum(CurriculumConfig cfg = {});

  void record_episode(double inspected_pct);
  /// Advances the step counter; returns the (possibly updated) weight.
  double observe_step();

  double weight() const { return weight_; }
  bool has_mean() const { return !recent_.empty(); }
  double rolling_mean() const;
  const CurriculumConfig& config() const { return cfg_; }

  struct Snapshot {
    double weight = 0.0;
    int steps_in_regime = 0;
    int regime = 0;
    std::vector<double> recent;
  };
  Snapshot snapshot() const;
  void restore(const Snapshot& s);

 private:
  CurriculumConfig cfg_;
  double weight_;
  int steps_in_regime_ = 0;
  int regime_ = 0;  // +1 above, -1 below, 0 neither
  std::deque<double> recent_;
};

/// Evaluation always uses the maximum fuel-penalty weight.
inline constexpr double kEvaluationDvWeight = 0.1;

/// A single inspection episode. Not thread-safe; run one instance per worker.
class InspectionEnv {
 public:
  explicit InspectionEnv(EpisodeConfig config);

  Observation reset(std::uint64_t seed);
  StepResult step(const ActionVec& action);

  Observation build_observation() const;
  ObservationVector normalized_observation() const;

  void set_dv_weight(double w) { dv_weight_ = w; }
  double dv_weight() const { return dv_weight_; }

  const EpisodeConfig& config() const { return config_; }
  const CwParams& dynamics() const { return config_.dynamics; }
  const DeputyState& deputy() const { return deputy_; }
  const SunState& sun() const { return sun_; }
  const InspectionPointSet& points() const { return points_; }
  int steps() const { return steps_; }
  double elapsed() const { return steps_ * config_.dynamics.dt; }
  double delta_v_total() const { return delta_v_total_; }
  double reward_total() const { return reward_total_; }
  double inspected_pct() const;
  bool done() const { return reason_ != Termination::Running; }
  Termination reason() const { return reason_; }
  std::uint64_t episode_seed() const { return episode_seed_; }
  bool started() const { return started_; }

  /// Complete mutable state, for checkpointing mid-episode.
  struct Snapshot {
    DeputyState deputy;
    SunState sun;
    std::vector<bool> inspected;
    int steps = 0;
    double delta_v_total = 0.0;
    double reward_total = 0.0;
    Termination reason = Termination::Running;
    std::uint64_t episode_seed = 0;
    bool started = false;
    double dv_weight = 0.0;
  };
  Snapshot snapshot() const;
  void restore(const Snapshot& s);

 private:
  EpisodeConfig config_;
  CwPropagator propagator_;
  InspectionPointSet points_;
  DeputyState deputy_;
  SunState sun_;
  int steps_ = 0;
  double delta_v_total_ = 0.0;
  double reward_total_ = 0.0;
  double dv_weight_ = kEvaluationDvWeight;
  Termination reason_ = Termination::Running;
  std::uint64_t episode_seed_ = 0;
  bool started_ = false;
};

/// SplitMix64 finalizer; derives independent stream seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace sunlit
