#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sunlit/error.hpp"
#include "sunlit/policy.hpp"
#include "sunlit/ppo.hpp"

using namespace sunlit;

namespace {

// Two inputs, no hidden layer, one action: weights (2) + bias (1) + log_std (1).
PolicyParams toy_policy(std::uint64_t seed) {
  NetworkShape shape;
  shape.observation_size = 2;
  shape.hidden = {};
  shape.action_size = 1;
  InitConfig init;
  init.actor_output_gain = 0.7;
  return PolicyParams::create(shape, seed, init);
}

double relative_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12});
}

RolloutBatch make_batch(const Eigen::MatrixXd& obs, const Eigen::MatrixXd& act,
                        const Eigen::VectorXd& logp, const Eigen::VectorXd& adv,
                        const Eigen::VectorXd& ret) {
  RolloutBatch b;
  b.observations = obs;
  b.actions = act;
  b.log_probs = logp;
  b.rewards = Eigen::VectorXd::Zero(logp.size());
  b.values = Eigen::VectorXd::Zero(logp.size());
  b.dones.assign(static_cast<std::size_t>(logp.size()), false);
  b.advantages = adv;
  b.returns = ret;
  return b;
}

}  // namespace

TEST_CASE("GAE worked examples") {
  Eigen::VectorXd r(1), v(1);
  r << 2.5;
  v << 0.75;
  const auto one = compute_gae(r, v, {true}, 9.0, 0.99, 0.95);
  CHECK(one.advantages[0] == doctest::Approx(1.75));
  CHECK(one.returns[0] == doctest::Approx(2.5));

  const int t = 40;
  const auto ones = compute_gae(Eigen::VectorXd::Ones(t), Eigen::VectorXd::Zero(t),
                                std::vector<bool>(t, false), 0.0, 1.0, 1.0);
  CHECK(ones.advantages[0] == doctest::Approx(t));
  CHECK(ones.advantages[t - 1] == doctest::Approx(1.0));
}

TEST_CASE("GAE matches the double-loop oracle") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::bernoulli_distribution end(0.08);
  double worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 50;
    Eigen::VectorXd r(n), v(n);
    std::vector<bool> d(n);
    std::vector<double> rs(n), vs(n);
    for (int i = 0; i < n; ++i) {
      r[i] = rs[i] = g(rng);
      v[i] = vs[i] = g(rng);
      d[i] = end(rng);
    }
    const double last = g(rng);
    const auto got = compute_gae(r, v, d, last, 0.99, 0.95);
    const auto ref = oracle::gae_double_loop(rs, vs, d, last, 0.99, 0.95);
    for (int i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(got.advantages[i] - ref[i]));
      CHECK(got.returns[i] == doctest::Approx(got.advantages[i] + v[i]));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("surrogate gradient matches central differences") {
  PolicyParams p = toy_policy(3);
  REQUIRE(p.actor_flat().size() == 4);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const int n = 64;
  Eigen::MatrixXd obs(2, n), act(1, n);
  Eigen::VectorXd old_lp(n), adv(n);
  for (int i = 0; i < n; ++i) {
    obs.col(i) << g(rng), g(rng);
    act(0, i) = g(rng);
    adv[i] = g(rng);
    // Shift the behaviour log-probs so some ratios land outside the clip range.
    const Eigen::VectorXd mean = p.actor.forward(obs.col(i));
    const double shift = i % 4 == 0 ? 0.6 : i % 4 == 1 ? -0.6 : 0.05 * g(rng);
    old_lp[i] = gaussian_log_prob(act.col(i), mean, p.log_std) + shift;
  }

  for (double entropy : {0.0, 0.01}) {
    const PolicyLoss pl = policy_loss(p, obs, act, old_lp, adv, 0.2, entropy);
    CHECK(pl.clip_fraction > 0.3);
    const Eigen::VectorXd theta = p.actor_flat();
    Eigen::VectorXd fd(theta.size());
    const double h = 1e-6;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      PolicyParams q = p;
      Eigen::VectorXd t = theta;
      t[k] += h;
      q.assign_actor_flat(t);
      const double up = policy_loss(q, obs, act, old_lp, adv, 0.2, entropy).loss;
      t[k] -= 2 * h;
      q.assign_actor_flat(t);
      const double down = policy_loss(q, obs, act, old_lp, adv, 0.2, entropy).loss;
      fd[k] = (up - down) / (2 * h);
    }
    CHECK(relative_error(pl.grad, fd) < 1e-4);
  }
}

TEST_CASE("value gradient matches central differences") {
  PolicyParams p = toy_policy(5);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  Eigen::MatrixXd obs(2, 32);
  Eigen::VectorXd ret(32);
  for (int i = 0; i < 32; ++i) {
    obs.col(i) << g(rng), g(rng);
    ret[i] = g(rng);
  }
  const ValueLoss vl = value_loss(p.critic, obs, ret);
  const Eigen::VectorXd theta = p.critic.flatten();
  Eigen::VectorXd fd(theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    Mlp c = p.critic;
    Eigen::VectorXd t = theta;
    t[k] += 1e-6;
    c.assign(t);
    const double up = value_loss(c, obs, ret).loss;
    t[k] -= 2e-6;
    c.assign(t);
    const double down = value_loss(c, obs, ret).loss;
    fd[k] = (up - down) / 2e-6;
  }
  CHECK(relative_error(vl.grad, fd) < 1e-4);

  // Same check through a hidden layer.
  NetworkShape deep;
  deep.observation_size = 2;
  deep.hidden = {5, 4};
  deep.action_size = 1;
  const PolicyParams q = PolicyParams::create(deep, 6);
  const ValueLoss dl = value_loss(q.critic, obs, ret);
  const Eigen::VectorXd w = q.critic.flatten();
  Eigen::VectorXd dfd(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    Mlp c = q.critic;
    Eigen::VectorXd t = w;
    t[k] += 1e-6;
    c.assign(t);
    const double up = value_loss(c, obs, ret).loss;
    t[k] -= 2e-6;
    c.assign(t);
    dfd[k] = (up - value_loss(c, obs, ret).loss) / 2e-6;
  }
  CHECK(relative_error(dl.grad, dfd) < 1e-4);
}

TEST_CASE("value regression converges") {
  NetworkShape shape;
  shape.observation_size = 2;
  shape.hidden = {32};
  shape.action_size = 1;
  PolicyParams p = PolicyParams::create(shape, 11);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd obs(2, 200);
  Eigen::VectorXd ret(200);
  for (int i = 0; i < 200; ++i) {
    obs.col(i) << u(rng), u(rng);
    ret[i] = 0.5 * std::sin(2.0 * obs(0, i)) + 0.3 * obs(1, i);
  }
  Eigen::VectorXd theta = p.critic.flatten();
  AdamState st;
  st.resize(static_cast<std::size_t>(theta.size()));
  for (int it = 0; it < 3000; ++it) {
    const ValueLoss vl = value_loss(p.critic, obs, ret);
    adam_step(theta, vl.grad, st, AdamConfig{3e-3});
    p.critic.assign(theta);
  }
  // loss is half the mean squared error.
  CHECK(2.0 * value_loss(p.critic, obs, ret).loss < 1e-3);
}

TEST_CASE("one update raises the probability of an advantaged action") {
  PolicyParams p = toy_policy(4);
  Eigen::MatrixXd obs(2, 1), act(1, 1);
  obs << 0.3, -0.2;
  act << 0.8;
  const Eigen::VectorXd mean = p.actor.forward(obs);
  Eigen::VectorXd lp(1);
  lp << gaussian_log_prob(act.col(0), mean.col(0), p.log_std);
  Eigen::VectorXd adv(1), ret(1);
  adv << 1.0;
  ret << 0.0;
  PpoConfig cfg;
  cfg.epochs = 1;
  cfg.normalize_advantages = false;
  OptimizerState opt;
  opt.actor.resize(static_cast<std::size_t>(p.actor_flat().size()));
  opt.critic.resize(p.critic.parameter_count());
  std::mt19937_64 rng(1);
  ppo_update(p, opt, make_batch(obs, act, lp, adv, ret), cfg, rng);
  const Eigen::VectorXd after = p.actor.forward(obs);
  CHECK(gaussian_log_prob(act.col(0), after.col(0), p.log_std) > lp[0]);
}

TEST_CASE("zero advantages leave the actor unchanged") {
  NetworkShape shape;
  shape.hidden = {16, 16};
  PolicyParams p = PolicyParams::create(shape, 9);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  const int n = 40;
  Eigen::MatrixXd obs(11, n), act(3, n);
  Eigen::VectorXd lp(n), ret(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < 11; ++k) obs(k, i) = g(rng);
    for (int k = 0; k < 3; ++k) act(k, i) = g(rng);
    lp[i] = gaussian_log_prob(act.col(i), p.actor.forward(obs.col(i)), p.log_std);
    ret[i] = g(rng);
  }
  const PolicyLoss pl = policy_loss(p, obs, act, lp, Eigen::VectorXd::Zero(n), 0.2, 0.0);
  CHECK(pl.grad.norm() == 0.0);

  PpoConfig cfg;
  cfg.minibatch_size = 8;
  cfg.normalize_advantages = false;
  OptimizerState opt;
  opt.actor.resize(static_cast<std::size_t>(p.actor_flat().size()));
  opt.critic.resize(p.critic.parameter_count());
  const Eigen::VectorXd before = p.actor_flat();
  const Eigen::VectorXd critic_before = p.critic.flatten();
  ppo_update(p, opt, make_batch(obs, act, lp, Eigen::VectorXd::Zero(n), ret), cfg, rng);
  CHECK((p.actor_flat() - before).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((p.critic.flatten() - critic_before).norm() > 0.0);
}

TEST_CASE("policy sampling contract") {
  const PolicyParams p = PolicyParams::create(NetworkShape{}, 1);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  double mean_abs = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ObservationVector o;
    for (double& x : o) x = g(rng);
    const ActionVec a = act_deterministic(p, o);
    CHECK(a == act_deterministic(p, o));
    CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
    mean_abs += a.cwiseAbs().mean();
    const ActResult s = act(p, o, true, rng);
    CHECK(s.action.cwiseAbs().maxCoeff() <= 1.0);
    CHECK(std::isfinite(s.log_prob));
  }
  CHECK(mean_abs / 1000.0 < 0.3);

  // Untouched rng in deterministic mode.
  std::mt19937_64 a(5), b(5);
  ObservationVector o{};
  act(p, o, false, a);
  CHECK(a() == b());
}

TEST_CASE("Gaussian log-density") {
  Eigen::VectorXd x(2), m(2), ls(2);
  x << 1.0, -1.0;
  m << 0.0, 0.0;
  ls << 0.0, std::log(2.0);
  const double ref = -0.5 * 1.0 - 0.5 * 0.25 - std::log(2.0) - std::log(2.0 * M_PI);
  CHECK(gaussian_log_prob(x, m, ls) == doctest::Approx(ref).epsilon(1e-14));
}
