#include "sunlit/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "sunlit/error.hpp"

namespace sunlit {

namespace {

void clip_norm(Eigen::VectorXd& grad, double max_norm) {
  if (max_norm <= 0.0) return;
  const double norm = grad.norm();
  if (norm > max_norm) grad *= max_norm / norm;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& m,
                               std::span<const Eigen::Index> idx) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = m.col(idx[j]);
  }
  return out;
}

Eigen::VectorXd gather(const Eigen::VectorXd& v,
                       std::span<const Eigen::Index> idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = v[idx[j]];
  }
  return out;
}

}  // namespace

void PpoConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, m); };
  if (!(gamma > 0.0 && gamma <= 1.0)) fail("gamma must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) fail("gae_lambda must be in [0, 1]");
  if (!(clip_ratio > 0.0)) fail("clip_ratio must be > 0");
  if (!(learning_rate >= 0.0)) fail("learning_rate must be >= 0");
  if (!(entropy_coef >= 0.0)) fail("entropy_coef must be >= 0");
  if (epochs < 1) fail("epochs must be >= 1");
  if (minibatch_size < 1) fail("minibatch_size must be >= 1");
}

void RolloutBatch::validate() const {
  const Eigen::Index n = size();
  if (observations.cols() != n || actions.cols() != n || rewards.size() != n ||
      values.size() != n || static_cast<Eigen::Index>(dones.size()) != n ||
      advantages.size() != n || returns.size() != n) {
    throw Error(ErrorKind::Training, "rollout batch sequences differ in length");
  }
  if (!advantages.allFinite() || !returns.allFinite()) {
    throw Error(ErrorKind::Training, "rollout batch advantages are not finite");
  }
}

GaeResult compute_gae(const Eigen::VectorXd& rewards,
                      const Eigen::VectorXd& values,
                      const std::vector<bool>& dones, double last_value,
                      double gamma, double lambda) {
  const Eigen::Index n = rewards.size();
  if (values.size() != n || static_cast<Eigen::Index>(dones.size()) != n) {
    throw Error(ErrorKind::Training, "GAE inputs differ in length");
  }
  GaeResult out{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  double running = 0.0;
  for (Eigen::Index t = n; t-- > 0;) {
    const bool terminal = dones[static_cast<std::size_t>(t)];
    const double next_value = t + 1 < n ? values[t + 1] : last_value;
    const double not_done = terminal ? 0.0 : 1.0;
    const double delta = rewards[t] + gamma * next_value * not_done - values[t];
    running = delta + gamma * lambda * not_done * running;
    out.advantages[t] = running;
  }
  out.returns = out.advantages + values;
  return out;
}

PolicyLoss policy_loss(const PolicyParams& params,
                       const Eigen::MatrixXd& observations,
                       const Eigen::MatrixXd& actions,
                       const Eigen::VectorXd& old_log_probs,
                       const Eigen::VectorXd& advantages, double clip_ratio,
                       double entropy_coef) {
  const Eigen::Index batch = observations.cols();
  const double inv_batch = 1.0 / static_cast<double>(batch);
  const double log_two_pi = std::log(2.0 * std::numbers::pi);

  Mlp::Cache cache;
  const Eigen::MatrixXd mean = params.actor.forward(observations, cache);
  const Eigen::ArrayXd std_dev = params.log_std.array().exp();
  const Eigen::ArrayXXd z =
      (actions - mean).array().colwise() / std_dev;
  const Eigen::ArrayXd log_prob =
      (-0.5 * z.square()).colwise().sum().transpose() -
      params.log_std.sum() - 0.5 * log_two_pi * static_cast<double>(params.log_std.size());

  PolicyLoss out;
  Eigen::ArrayXd dlogp(batch);  // d loss / d log_prob_j
  double objective = 0.0;
  double clipped = 0.0;
  double kl = 0.0;
  for (Eigen::Index j = 0; j < batch; ++j) {
    const double log_ratio = log_prob[j] - old_log_probs[j];
    const double ratio = std::exp(log_ratio);
    const double a = advantages[j];
    const double unclipped = ratio * a;
    const double bounded =
        std::clamp(ratio, 1.0 - clip_ratio, 1.0 + clip_ratio) * a;
    if (unclipped <= bounded) {
      objective += unclipped;
      dlogp[j] = -unclipped * inv_batch;
    } else {
      objective += bounded;
      dlogp[j] = 0.0;
    }
    if (std::abs(ratio - 1.0) > clip_ratio) clipped += 1.0;
    kl += (ratio - 1.0) - log_ratio;
  }
  const double entropy =
      (params.log_std.array() + 0.5 * (1.0 + log_two_pi)).sum();
  out.surrogate = objective * inv_batch;
  out.entropy = entropy;
  out.loss = -out.surrogate - entropy_coef * entropy;
  out.clip_fraction = clipped * inv_batch;
  out.approx_kl = kl * inv_batch;

  // d log_prob / d mean = z / sigma, d log_prob / d log_std = z^2 - 1.
  const Eigen::MatrixXd grad_mean =
      ((z.colwise() / std_dev).rowwise() * dlogp.transpose()).matrix();
  Eigen::VectorXd actor_grad = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(params.actor.parameter_count()));
  params.actor.backward(cache, grad_mean, actor_grad);
  const Eigen::VectorXd log_std_grad =
      ((z.square() - 1.0).rowwise() * dlogp.transpose()).rowwise().sum().matrix() -
      Eigen::VectorXd::Constant(params.log_std.size(), entropy_coef);

  out.grad.resize(actor_grad.size() + log_std_grad.size());
  out.grad << actor_grad, log_std_grad;
  return out;
}

ValueLoss value_loss(const Mlp& critic, const Eigen::MatrixXd& observations,
                     const Eigen::VectorXd& returns) {
  const double inv_batch = 1.0 / static_cast<double>(observations.cols());
  Mlp::Cache cache;
  const Eigen::MatrixXd values = critic.forward(observations, cache);
  const Eigen::RowVectorXd diff = values.row(0) - returns.transpose();
  ValueLoss out;
  out.loss = 0.5 * diff.squaredNorm() * inv_batch;
  out.grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(critic.parameter_count()));
  critic.backward(cache, diff * inv_batch, out.grad);
  return out;
}

PpoStats ppo_update(PolicyParams& params, OptimizerState& optimizer,
                    const RolloutBatch& batch, const PpoConfig& cfg,
                    std::mt19937_64& rng) {
  cfg.validate();
  batch.validate();
  PpoStats stats;
  const Eigen::Index n = batch.size();
  if (n == 0) return stats;

  PolicyParams work = params;
  OptimizerState opt = optimizer;
  const AdamConfig adam{cfg.learning_rate};
  Eigen::VectorXd actor_flat = work.actor_flat();
  Eigen::VectorXd critic_flat = work.critic.flatten();

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const auto mb = static_cast<std::size_t>(cfg.minibatch_size);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size(); start += mb) {
      const std::span<const Eigen::Index> idx(
          order.data() + start, std::min(mb, order.size() - start));
      const Eigen::MatrixXd obs = gather_columns(batch.observations, idx);
      const Eigen::MatrixXd act = gather_columns(batch.actions, idx);
      const Eigen::VectorXd old_lp = gather(batch.log_probs, idx);
      Eigen::VectorXd adv = gather(batch.advantages, idx);
      const Eigen::VectorXd ret = gather(batch.returns, idx);
      if (cfg.normalize_advantages && adv.size() > 1) {
        const double mu = adv.mean();
        const double sd = std::sqrt((adv.array() - mu).square().sum() /
                                    static_cast<double>(adv.size() - 1));
        adv = ((adv.array() - mu) / (sd + 1e-8)).matrix();
      }

      PolicyLoss pl = policy_loss(work, obs, act, old_lp, adv, cfg.clip_ratio,
                                  cfg.entropy_coef);
      ValueLoss vl = value_loss(work.critic, obs, ret);
      if (!std::isfinite(pl.loss) || !std::isfinite(vl.loss) ||
          !pl.grad.allFinite() || !vl.grad.allFinite()) {
        std::ostringstream msg;
        msg << "non-finite PPO loss (epoch " << epoch << ", policy_loss "
            << pl.loss << ", value_loss " << vl.loss << ", approx_kl "
            << pl.approx_kl << ")";
        throw Error(ErrorKind::Training, msg.str());
      }
      clip_norm(pl.grad, cfg.max_grad_norm);
      clip_norm(vl.grad, cfg.max_grad_norm);
      adam_step(actor_flat, pl.grad, opt.actor, adam);
      adam_step(critic_flat, vl.grad, opt.critic, adam);
      work.assign_actor_flat(actor_flat);
      work.critic.assign(critic_flat);

      stats.policy_loss += pl.loss;
      stats.value_loss += vl.loss;
      stats.entropy += pl.entropy;
      stats.clip_fraction += pl.clip_fraction;
      stats.approx_kl += pl.approx_kl;
      ++stats.minibatches;
    }
  }
  const double k = 1.0 / stats.minibatches;
  stats.policy_loss *= k;
  stats.value_loss *= k;
  stats.entropy *= k;
  stats.clip_fraction *= k;
  stats.approx_kl *= k;

  params = std::move(work);
  optimizer = std::move(opt);
  return stats;
}

}  // namespace sunlit
