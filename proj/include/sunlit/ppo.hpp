#pragma once

#include <random>
#include <vector>

#include "sunlit/policy.hpp"

namespace sunlit {

struct PpoConfig {
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_ratio = 0.2;
  double learning_rate = 3e-4;
  double entropy_coef = 0.0;
  double max_grad_norm = 0.5;  // <= 0 disables clipping
  int epochs = 4;
  int minibatch_size = 256;
  bool normalize_advantages = true;

  void validate() const;
};

/// Flattened rollout; column i of each matrix is transition i.
struct RolloutBatch {
  Eigen::MatrixXd observations;  // obs_size x N
  Eigen::MatrixXd actions;       // act_size x N, unclamped samples
  Eigen::VectorXd log_probs;
  Eigen::VectorXd rewards;
  Eigen::VectorXd values;
  std::vector<bool> dones;
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;

  Eigen::Index size() const { return log_probs.size(); }
  void validate() const;
};

struct GaeResult {
  Eigen::VectorXd advantages;
  Eigen::VectorXd returns;
};

/// Generalized advantage estimation over one environment's time-ordered
/// segment. dones[t] marks that transition t ended its episode, so nothing is
/// bootstrapped across it. `last_value` bootstraps the step after the
/// segment when the final transition did not end an episode.
GaeResult compute_gae(const Eigen::VectorXd& rewards,
                      const Eigen::VectorXd& values,
                      const std::vector<bool>& dones, double last_value,
                      double gamma, double lambda);

struct PolicyLoss {
  double loss = 0.0;  // clipped surrogate (negated) minus entropy bonus
  double surrogate = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  Eigen::VectorXd grad;  // d loss / d actor_flat()
};

/// Clipped-surrogate loss and its exact gradient over the given samples.
/// Advantages are used as given (normalize beforehand if wanted).
PolicyLoss policy_loss(const PolicyParams& params,
                       const Eigen::MatrixXd& observations,
                       const Eigen::MatrixXd& actions,
                       const Eigen::VectorXd& old_log_probs,
                       const Eigen::VectorXd& advantages, double clip_ratio,
                       double entropy_coef);

struct ValueLoss {
  double loss = 0.0;  // 0.5 * mean squared error
  Eigen::VectorXd grad;
};

ValueLoss value_loss(const Mlp& critic, const Eigen::MatrixXd& observations,
                     const Eigen::VectorXd& returns);

struct OptimizerState {
  AdamState actor;
  AdamState critic;
};

struct PpoStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  double approx_kl = 0.0;
  int minibatches = 0;
};

/// Runs the configured epochs of minibatch clipped-surrogate and value
/// regression updates in place. Throws a Training error, leaving `params`
/// untouched, if a loss turns non-finite.
PpoStats ppo_update(PolicyParams& params, OptimizerState& optimizer,
                    const RolloutBatch& batch, const PpoConfig& cfg,
                    std::mt19937_64& rng);

}  // namespace sunlit
