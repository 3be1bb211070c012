#include "sunlit/train.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sunlit/error.hpp"

namespace sunlit {

namespace {

constexpr std::uint64_t kInitStream = 0x696e6974ULL;
constexpr std::uint64_t kRngStream = 0x726e67ULL;
constexpr std::uint64_t kEvalStream = 0x6576616cULL;

std::string save_rng(const std::mt19937_64& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

std::mt19937_64 load_rng(const std::string& text) {
  std::mt19937_64 rng;
  std::istringstream in(text);
  in >> rng;
  if (!in) throw Error(ErrorKind::Checkpoint, "corrupt RNG state");
  return rng;
}

}  // namespace

void TrainConfig::validate() const {
  ppo.validate();
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, m); };
  if (total_timesteps < 0) fail("total_timesteps must be >= 0");
  if (rollout_steps < 1) fail("rollout_steps must be >= 1");
  if (num_envs < 1) fail("num_envs must be >= 1");
  if (eval_interval < 1) fail("eval_interval must be >= 1");
  if (eval_episodes < 1) fail("eval_episodes must be >= 1");
  if (checkpoint_interval < 0) fail("checkpoint_interval must be >= 0");
  if (workers < 1) fail("workers must be >= 1");
  if (network.observation_size != static_cast<int>(kObservationSize) ||
      network.action_size != 3) {
    fail("network must map 11 observations to 3 actions");
  }
  for (const int h : network.hidden) {
    if (h < 1) fail("hidden layer sizes must be >= 1");
  }
  if (curriculum.min > curriculum.max || curriculum.sustain_steps < 1 ||
      curriculum.episode_window < 1) {
    fail("curriculum settings are inconsistent");
  }
}

std::uint64_t training_episode_seed(std::uint64_t seed, std::size_t env_index,
                                    std::uint64_t episode) {
  return mix_seed(mix_seed(seed, env_index + 1), episode);
}

Trainer::Trainer(TrainConfig cfg, EpisodeConfig env_cfg)
    : cfg_(std::move(cfg)), env_cfg_(std::move(env_cfg)),
      curriculum_(cfg_.curriculum) {
  cfg_.validate();
  env_cfg_.validate();
  params_ = PolicyParams::create(cfg_.network, mix_seed(cfg_.seed, kInitStream),
                                 cfg_.init, env_cfg_.dynamics.max_thrust);
  rng_.seed(mix_seed(cfg_.seed, kRngStream));
  envs_.assign(static_cast<std::size_t>(cfg_.num_envs), InspectionEnv(env_cfg_));
  current_obs_.resize(envs_.size());
  episodes_started_.assign(envs_.size(), 0);
  for (std::size_t e = 0; e < envs_.size(); ++e) start_episode(e);
  next_checkpoint_ = cfg_.checkpoint_interval;
}

Trainer::Trainer(const State& s)
    : cfg_(s.config), env_cfg_(s.env_config), params_(s.params),
      optimizer_(s.optimizer), curriculum_(s.config.curriculum),
      episodes_started_(s.episodes_started), rng_(load_rng(s.rng_state)),
      timesteps_(s.timesteps), iteration_(s.iteration), next_eval_(s.next_eval),
      next_checkpoint_(s.next_checkpoint), curve_(s.curve),
      last_stats_(s.last_stats) {
  cfg_.validate();
  env_cfg_.validate();
  if (s.envs.size() != static_cast<std::size_t>(cfg_.num_envs) ||
      s.episodes_started.size() != s.envs.size()) {
    throw Error(ErrorKind::Checkpoint,
                "checkpoint environment count does not match num_envs");
  }
  if (!(params_.shape == cfg_.network)) {
    throw Error(ErrorKind::Checkpoint,
                "checkpoint network shape does not match its configuration");
  }
  curriculum_.restore(s.curriculum);
  envs_.assign(s.envs.size(), InspectionEnv(env_cfg_));
  current_obs_.resize(envs_.size());
  for (std::size_t e = 0; e < envs_.size(); ++e) {
    envs_[e].restore(s.envs[e]);
    current_obs_[e] = envs_[e].normalized_observation();
  }
}

Trainer::State Trainer::state() const {
  State s;
  s.config = cfg_;
  s.env_config = env_cfg_;
  s.params = params_;
  s.optimizer = optimizer_;
  s.curriculum = curriculum_.snapshot();
  for (const auto& env : envs_) s.envs.push_back(env.snapshot());
  s.episodes_started = episodes_started_;
  s.rng_state = save_rng(rng_);
  s.timesteps = timesteps_;
  s.iteration = iteration_;
  s.next_eval = next_eval_;
  s.next_checkpoint = next_checkpoint_;
  s.curve = curve_;
  s.last_stats = last_stats_;
  return s;
}

void Trainer::start_episode(std::size_t e) {
  const std::uint64_t seed =
      training_episode_seed(cfg_.seed, e, episodes_started_[e]++);
  envs_[e].set_dv_weight(curriculum_.weight());
  envs_[e].reset(seed);
  current_obs_[e] = envs_[e].normalized_observation();
}

std::uint64_t Trainer::eval_master_seed() const {
  return mix_seed(cfg_.seed, kEvalStream);
}

void Trainer::run(const Hook& on_checkpoint, const Hook& on_iteration,
                  long stop_at) {
  const long limit = stop_at >= 0 ? std::min(stop_at, cfg_.total_timesteps)
                                  : cfg_.total_timesteps;
  if (timesteps_ >= next_eval_) record_evaluation();
  while (timesteps_ < limit) {
    iterate();
    const bool due = timesteps_ >= next_eval_;
    if (due || finished()) record_evaluation();
    if (on_iteration) on_iteration(*this);
    if (cfg_.checkpoint_interval > 0 && timesteps_ >= next_checkpoint_) {
      while (next_checkpoint_ <= timesteps_) {
        next_checkpoint_ += cfg_.checkpoint_interval;
      }
      if (on_checkpoint) on_checkpoint(*this);
    }
  }
}

void Trainer::record_evaluation() {
  while (next_eval_ <= timesteps_) next_eval_ += cfg_.eval_interval;
  if (!curve_.empty() && curve_.back().timestep == timesteps_) return;

  EvalOptions options;
  options.trials = cfg_.eval_episodes;
  options.master_seed = eval_master_seed();
  options.workers = cfg_.workers;
  auto shared = std::make_shared<const PolicyParams>(params_);
  const EvalReport report =
      evaluate({{"current", policy_factory(shared)}}, env_cfg_, options);

  CurvePoint point;
  point.timestep = timesteps_;
  point.iteration = iteration_;
  point.dv_weight = curriculum_.weight();
  for (const auto& row : report.episodes) {
    point.inspected_pct += row.metrics.inspected_pct;
    point.delta_v += row.metrics.delta_v;
    point.episode_length += row.metrics.episode_length;
    point.total_reward += row.metrics.total_reward;
  }
  const double k = 1.0 / static_cast<double>(report.episodes.size());
  point.inspected_pct *= k;
  point.delta_v *= k;
  point.episode_length *= k;
  point.total_reward *= k;
  curve_.push_back(point);
}

void Trainer::iterate() {
  const std::size_t env_count = envs_.size();
  const auto per_env = static_cast<Eigen::Index>(
      (cfg_.rollout_steps + cfg_.num_envs - 1) / cfg_.num_envs);
  const auto obs_size = static_cast<Eigen::Index>(kObservationSize);
  const Eigen::Index act_size = params_.shape.action_size;
  const Eigen::Index total = per_env * static_cast<Eigen::Index>(env_count);

  // Column index of (env e, time t) is e * per_env + t.
  RolloutBatch batch;
  batch.observations.resize(obs_size, total);
  batch.actions.resize(act_size, total);
  batch.log_probs.resize(total);
  batch.rewards.resize(total);
  batch.values.resize(total);
  batch.dones.assign(static_cast<std::size_t>(total), false);

  Eigen::MatrixXd obs(obs_size, static_cast<Eigen::Index>(env_count));
  std::vector<StepResult> results(env_count);
  std::vector<ActionVec> actions(env_count);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Eigen::VectorXd std_dev = params_.log_std.array().exp().matrix();

  for (Eigen::Index t = 0; t < per_env; ++t) {
    for (std::size_t e = 0; e < env_count; ++e) {
      obs.col(static_cast<Eigen::Index>(e)) =
          Eigen::Map<const Eigen::VectorXd>(current_obs_[e].data(), obs_size);
    }
    const Eigen::MatrixXd means = params_.actor.forward(obs);
    const Eigen::MatrixXd values = params_.critic.forward(obs);
    for (std::size_t e = 0; e < env_count; ++e) {
      const auto col = static_cast<Eigen::Index>(e) * per_env + t;
      Eigen::VectorXd sample = means.col(static_cast<Eigen::Index>(e));
      for (Eigen::Index i = 0; i < act_size; ++i) {
        sample[i] += std_dev[i] * normal(rng_);
      }
      batch.observations.col(col) = obs.col(static_cast<Eigen::Index>(e));
      batch.actions.col(col) = sample;
      batch.log_probs[col] = gaussian_log_prob(
          sample, means.col(static_cast<Eigen::Index>(e)), params_.log_std);
      batch.values[col] = values(0, static_cast<Eigen::Index>(e));
      actions[e] = ActionVec(sample[0], sample[1], sample[2]);
    }

    parallel_for(env_count, cfg_.workers, [&](std::size_t e) {
      results[e] = envs_[e].step(actions[e]);
    });

    for (std::size_t e = 0; e < env_count; ++e) {
      const auto col = static_cast<Eigen::Index>(e) * per_env + t;
      batch.rewards[col] = results[e].reward.total;
      batch.dones[static_cast<std::size_t>(col)] = results[e].done;
      if (results[e].done) {
        curriculum_.record_episode(envs_[e].inspected_pct());
        start_episode(e);
      } else {
        current_obs_[e] = results[e].observation.normalized(
            env_cfg_.scaling, envs_[e].points().size());
      }
    }
    double weight = curriculum_.weight();
    for (std::size_t e = 0; e < env_count; ++e) weight = curriculum_.observe_step();
    for (auto& env : envs_) env.set_dv_weight(weight);
    timesteps_ += static_cast<long>(env_count);
  }

  for (std::size_t e = 0; e < env_count; ++e) {
    obs.col(static_cast<Eigen::Index>(e)) =
        Eigen::Map<const Eigen::VectorXd>(current_obs_[e].data(), obs_size);
  }
  const Eigen::MatrixXd last_values = params_.critic.forward(obs);
  batch.advantages.resize(total);
  batch.returns.resize(total);
  for (std::size_t e = 0; e < env_count; ++e) {
    const auto first = static_cast<Eigen::Index>(e) * per_env;
    const std::vector<bool> dones(
        batch.dones.begin() + first, batch.dones.begin() + first + per_env);
    const GaeResult gae = compute_gae(
        batch.rewards.segment(first, per_env), batch.values.segment(first, per_env),
        dones, last_values(0, static_cast<Eigen::Index>(e)), cfg_.ppo.gamma,
        cfg_.ppo.gae_lambda);
    batch.advantages.segment(first, per_env) = gae.advantages;
    batch.returns.segment(first, per_env) = gae.returns;
  }

  last_stats_ = ppo_update(params_, optimizer_, batch, cfg_.ppo, rng_);
  ++iteration_;
}

TrainResult train(const TrainConfig& cfg, const EpisodeConfig& env_cfg) {
  Trainer trainer(cfg, env_cfg);
  trainer.run();
  return {trainer.params(), trainer.curve()};
}

}  // namespace sunlit
