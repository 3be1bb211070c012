#pragma once

#include <random>
#include <span>
#include <vector>

#include "sunlit/environment.hpp"
#include "sunlit/network.hpp"

namespace sunlit {

struct NetworkShape {
  int observation_size = static_cast<int>(kObservationSize);
  std::vector<int> hidden{256, 256};
  int action_size = 3;

  std::vector<int> layer_sizes(int outputs) const;
  bool operator==(const NetworkShape&) const = default;
};

struct InitConfig {
  double hidden_gain = 1.4142135623730951;
  double actor_output_gain = 0.01;
  double critic_output_gain = 1.0;
  double initial_log_std = -0.5;
};

/// Gaussian actor with a state-independent log standard deviation, plus a
/// separate value network.
struct PolicyParams {
  NetworkShape shape;
  Mlp actor;
  Mlp critic;
  Eigen::VectorXd log_std;
  double action_bound = 1.0;

  static PolicyParams create(const NetworkShape& shape, std::uint64_t seed,
                             const InitConfig& init = {},
                             double action_bound = 1.0);

  bool all_finite() const;
  /// Actor weights followed by log_std.
  Eigen::VectorXd actor_flat() const;
  void assign_actor_flat(const Eigen::VectorXd& flat);
};

struct ActResult {
  Eigen::VectorXd action;  // clamped to the action bound
  Eigen::VectorXd sample;  // unclamped draw (or the mean when deterministic)
  double log_prob = 0.0;   // of `sample` under the current Gaussian
  double value = 0.0;
};

double gaussian_log_prob(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std);

/// Maps a normalized observation to a thrust command. Deterministic mode
/// returns the clamped mean and never touches `rng`.
ActResult act(const PolicyParams& params, std::span<const double> observation,
              bool stochastic, std::mt19937_64& rng);

/// Convenience wrapper for evaluation: clamped mean action.
ActionVec act_deterministic(const PolicyParams& params,
                            const ObservationVector& observation);

}  // namespace sunlit
