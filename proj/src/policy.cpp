#include "sunlit/policy.hpp"

#include <cmath>
#include <numbers>

#include "sunlit/error.hpp"

namespace sunlit {

std::vector<int> NetworkShape::layer_sizes(int outputs) const {
  std::vector<int> sizes{observation_size};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(outputs);
  return sizes;
}

PolicyParams PolicyParams::create(const NetworkShape& shape, std::uint64_t seed,
                                  const InitConfig& init, double action_bound) {
  PolicyParams p;
  p.shape = shape;
  p.actor = Mlp(shape.layer_sizes(shape.action_size));
  p.critic = Mlp(shape.layer_sizes(1));
  std::mt19937_64 rng(seed);
  p.actor.initialize(rng, init.hidden_gain, init.actor_output_gain);
  p.critic.initialize(rng, init.hidden_gain, init.critic_output_gain);
  p.log_std = Eigen::VectorXd::Constant(shape.action_size, init.initial_log_std);
  p.action_bound = action_bound;
  return p;
}

bool PolicyParams::all_finite() const {
  return actor.all_finite() && critic.all_finite() && log_std.allFinite();
}

Eigen::VectorXd PolicyParams::actor_flat() const {
  const Eigen::VectorXd weights = actor.flatten();
  Eigen::VectorXd flat(weights.size() + log_std.size());
  flat << weights, log_std;
  return flat;
}

void PolicyParams::assign_actor_flat(const Eigen::VectorXd& flat) {
  const auto n = static_cast<Eigen::Index>(actor.parameter_count());
  if (flat.size() != n + log_std.size()) {
    throw Error(ErrorKind::Training, "actor parameter vector has wrong size");
  }
  actor.assign(flat.head(n));
  log_std = flat.tail(log_std.size());
}

double gaussian_log_prob(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                         const Eigen::VectorXd& log_std) {
  const double log_two_pi = std::log(2.0 * std::numbers::pi);
  const Eigen::ArrayXd z = (x - mean).array() / log_std.array().exp();
  return (-0.5 * z.square() - log_std.array() - 0.5 * log_two_pi).sum();
}

ActResult act(const PolicyParams& params, std::span<const double> observation,
              bool stochastic, std::mt19937_64& rng) {
  if (observation.size() != static_cast<std::size_t>(params.shape.observation_size)) {
    throw Error(ErrorKind::Training, "observation has wrong length");
  }
  const Eigen::Map<const Eigen::VectorXd> obs(observation.data(),
                                              static_cast<Eigen::Index>(observation.size()));
  if (!obs.allFinite()) {
    throw Error(ErrorKind::Training, "observation contains non-finite values");
  }
  ActResult out;
  const Eigen::VectorXd mean = params.actor.forward(obs);
  out.value = params.critic.forward(obs)(0, 0);
  out.sample = mean;
  if (stochastic) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index i = 0; i < mean.size(); ++i) {
      out.sample[i] = mean[i] + std::exp(params.log_std[i]) * normal(rng);
    }
  }
  out.log_prob = gaussian_log_prob(out.sample, mean, params.log_std);
  out.action = out.sample.cwiseMax(-params.action_bound)
                   .cwiseMin(params.action_bound);
  return out;
}

ActionVec act_deterministic(const PolicyParams& params,
                            const ObservationVector& observation) {
  std::mt19937_64 unused(0);
  const ActResult r = act(params, observation, false, unused);
  return ActionVec(r.action[0], r.action[1], r.action[2]);
}

}  // namespace sunlit
