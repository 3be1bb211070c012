#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "sunlit/environment.hpp"
#include "sunlit/evaluation.hpp"
#include "sunlit/policy.hpp"
#include "sunlit/ppo.hpp"

namespace sunlit {

struct TrainConfig {
  PpoConfig ppo;
  NetworkShape network;
  InitConfig init;
  CurriculumConfig curriculum;
  long total_timesteps = 10'000'000;
  int rollout_steps = 3000;  // per iteration, summed over environments
  int num_envs = 6;
  long eval_interval = 50'000;
  int eval_episodes = 10;
  long checkpoint_interval = 500'000;  // 0 disables periodic checkpoints
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
};

/// Deterministic-policy evaluation taken during training.
struct CurvePoint {
  long timestep = 0;
  int iteration = 0;
  double inspected_pct = 0.0;
  double delta_v = 0.0;
  double episode_length = 0.0;
  double total_reward = 0.0;
  double dv_weight = 0.0;  // curriculum weight at the time of evaluation
};

/// Rollout -> PPO update loop with curriculum fuel weighting, periodic
/// evaluation and resumable state. Results depend only on the configuration
/// and seed, not on the worker count.
class Trainer {
 public:
  Trainer(TrainConfig cfg, EpisodeConfig env_cfg);

  /// Everything needed to continue training bit-for-bit.
  struct State {
    TrainConfig config;
    EpisodeConfig env_config;
    PolicyParams params;
    OptimizerState optimizer;
    DvCurriculum::Snapshot curriculum;
    std::vector<InspectionEnv::Snapshot> envs;
    std::vector<std::uint64_t> episodes_started;
    std::string rng_state;
    long timesteps = 0;
    int iteration = 0;
    long next_eval = 0;
    long next_checkpoint = 0;
    std::vector<CurvePoint> curve;
    PpoStats last_stats;
  };

  explicit Trainer(const State& state);
  State state() const;

  using Hook = std::function<void(const Trainer&)>;

  /// Trains until total_timesteps (or `stop_at`, if non-negative and
  /// smaller). `on_checkpoint` fires each time a checkpoint interval is
  /// crossed; `on_iteration` after every update.
  void run(const Hook& on_checkpoint = {}, const Hook& on_iteration = {},
           long stop_at = -1);

  bool finished() const { return timesteps_ >= cfg_.total_timesteps; }
  const PolicyParams& params() const { return params_; }
  const std::vector<CurvePoint>& curve() const { return curve_; }
  long timesteps() const { return timesteps_; }
  int iteration() const { return iteration_; }
  const TrainConfig& config() const { return cfg_; }
  const EpisodeConfig& env_config() const { return env_cfg_; }
  double dv_weight() const { return curriculum_.weight(); }
  const PpoStats& last_stats() const { return last_stats_; }

 private:
  void iterate();
  void record_evaluation();
  void start_episode(std::size_t env_index);
  std::uint64_t eval_master_seed() const;

  TrainConfig cfg_;
  EpisodeConfig env_cfg_;
  PolicyParams params_;
  OptimizerState optimizer_;
  DvCurriculum curriculum_;
  std::vector<InspectionEnv> envs_;
  std::vector<ObservationVector> current_obs_;
  std::vector<std::uint64_t> episodes_started_;
  std::mt19937_64 rng_;
  long timesteps_ = 0;
  int iteration_ = 0;
  long next_eval_ = 0;
  long next_checkpoint_ = 0;
  std::vector<CurvePoint> curve_;
  PpoStats last_stats_;
};

struct TrainResult {
  PolicyParams params;
  std::vector<CurvePoint> curve;
};

/// One-shot training; total_timesteps == 0 returns the initial parameters.
TrainResult train(const TrainConfig& cfg, const EpisodeConfig& env_cfg);

/// Seed of the j-th training episode run by environment `env_index`.
std::uint64_t training_episode_seed(std::uint64_t seed, std::size_t env_index,
                                    std::uint64_t episode);

}  // namespace sunlit
