#include "sunlit/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "sunlit/error.hpp"
#include "sunlit/trajectory_log.hpp"

namespace sunlit {

namespace {

double iqm_sorted(const std::vector<double>& sorted) {
  const std::size_t n = sorted.size();
  const std::size_t trim = n / 4;
  const double sum = std::accumulate(sorted.begin() + static_cast<long>(trim),
                                     sorted.end() - static_cast<long>(trim), 0.0);
  return sum / static_cast<double>(n - 2 * trim);
}

// Linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

nlohmann::ordered_json summary_json(const MetricSummary& m) {
  nlohmann::ordered_json j;
  j["iqm"] = m.iqm;
  j["ci_low"] = m.ci.low;
  j["ci_high"] = m.ci.high;
  return j;
}

}  // namespace

double iqm(std::span<const double> samples) {
  if (samples.empty()) {
    throw Error(ErrorKind::Evaluation, "iqm of an empty sample");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return iqm_sorted(sorted);
}

ConfidenceInterval bootstrap_ci(std::span<const double> samples,
                                const BootstrapConfig& cfg) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::Evaluation, "bootstrap needs at least two samples");
  }
  if (cfg.resamples < 1 || !(cfg.level > 0.0 && cfg.level < 1.0)) {
    throw Error(ErrorKind::Evaluation, "bad bootstrap configuration");
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  std::vector<double> stats(static_cast<std::size_t>(cfg.resamples));
  std::vector<double> draw(samples.size());
  for (double& s : stats) {
    for (double& d : draw) d = samples[pick(rng)];
    std::sort(draw.begin(), draw.end());
    s = iqm_sorted(draw);
  }
  std::sort(stats.begin(), stats.end());
  const double tail = 0.5 * (1.0 - cfg.level);
  return {quantile_sorted(stats, tail), quantile_sorted(stats, 1.0 - tail)};
}

MetricSummary summarize(std::span<const double> samples,
                        const BootstrapConfig& cfg) {
  MetricSummary m;
  m.iqm = iqm(samples);
  if (samples.size() < 2) {
    m.ci = {m.iqm, m.iqm};
    return m;
  }
  m.ci = bootstrap_ci(samples, cfg);
  // A skewed bootstrap distribution can leave the point estimate just outside
  // the percentile band; widen the band to contain it.
  m.ci.low = std::min(m.ci.low, m.iqm);
  m.ci.high = std::max(m.ci.high, m.iqm);
  return m;
}

ActionVec PolicyController::act(const Observation& obs,
                                const InspectionEnv& env) {
  return act_deterministic(
      *params_, obs.normalized(env.config().scaling, env.points().size()));
}

ControllerFactory policy_factory(std::shared_ptr<const PolicyParams> params) {
  return [params]() -> std::unique_ptr<Controller> {
    return std::make_unique<PolicyController>(params);
  };
}

EpisodeMetrics run_episode(InspectionEnv& env, Controller& controller,
                           std::uint64_t seed, std::ostream* log) {
  Observation obs = env.reset(seed);
  controller.reset(seed);
  std::optional<TrajectoryWriter> writer;
  if (log != nullptr) writer.emplace(*log);
  while (!env.done()) {
    const ActionVec action = controller.act(obs, env);
    const StepResult result = env.step(action);
    if (writer) writer->write(make_record(env, action, result));
    obs = result.observation;
  }
  EpisodeMetrics m;
  m.inspected_pct = env.inspected_pct();
  m.delta_v = env.delta_v_total();
  m.episode_length = env.elapsed();
  m.total_reward = env.reward_total();
  m.reason = env.reason();
  return m;
}

std::uint64_t evaluation_episode_seed(std::uint64_t master_seed, int trial) {
  return mix_seed(master_seed, 0x6576616cULL + static_cast<std::uint64_t>(trial));
}

void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn) {
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

EvalReport evaluate(const std::vector<NamedController>& controllers,
                    const EpisodeConfig& config, const EvalOptions& options) {
  if (controllers.empty() || options.trials < 1) {
    throw Error(ErrorKind::Evaluation,
                "evaluation needs at least one policy and one trial");
  }
  config.validate();
  EvalReport report;
  report.trials = options.trials;
  report.master_seed = options.master_seed;
  const std::size_t per_policy = static_cast<std::size_t>(options.trials);
  report.episodes.resize(controllers.size() * per_policy);
  for (const auto& c : controllers) report.policies.push_back(c.name);
  if (!options.trajectory_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(options.trajectory_dir, ec);
    if (ec) {
      throw Error(ErrorKind::Io, "cannot create " + options.trajectory_dir.string() +
                                     ": " + ec.message());
    }
  }

  parallel_for(report.episodes.size(), options.workers, [&](std::size_t i) {
    const std::size_t p = i / per_policy;
    const int trial = static_cast<int>(i % per_policy);
    InspectionEnv env(config);
    env.set_dv_weight(options.dv_weight);
    auto controller = controllers[p].factory();
    EpisodeRow& row = report.episodes[i];
    row.policy = controllers[p].name;
    row.policy_index = p;
    row.trial = trial;
    row.episode_seed = evaluation_episode_seed(options.master_seed, trial);
    if (options.trajectory_dir.empty()) {
      row.metrics = run_episode(env, *controller, row.episode_seed);
    } else {
      std::ostringstream name;
      name << row.policy << "_trial" << std::setw(3) << std::setfill('0') << trial
           << ".jsonl";
      const auto path = options.trajectory_dir / name.str();
      std::ofstream log(path, std::ios::binary | std::ios::trunc);
      if (!log) throw Error(ErrorKind::Io, "cannot write " + path.string());
      row.metrics = run_episode(env, *controller, row.episode_seed, &log);
    }
  });

  auto column = [&](auto member, std::size_t first, std::size_t count) {
    std::vector<double> v;
    v.reserve(count);
    for (std::size_t i = first; i < first + count; ++i) {
      v.push_back(report.episodes[i].metrics.*member);
    }
    return v;
  };
  const std::size_t total = report.episodes.size();
  report.samples = total;
  report.inspected_pct = summarize(column(&EpisodeMetrics::inspected_pct, 0, total), options.bootstrap);
  report.delta_v = summarize(column(&EpisodeMetrics::delta_v, 0, total), options.bootstrap);
  report.episode_length = summarize(column(&EpisodeMetrics::episode_length, 0, total), options.bootstrap);
  report.total_reward = summarize(column(&EpisodeMetrics::total_reward, 0, total), options.bootstrap);
  for (std::size_t p = 0; p < controllers.size(); ++p) {
    const std::size_t first = p * per_policy;
    report.per_policy.push_back(
        {summarize(column(&EpisodeMetrics::inspected_pct, first, per_policy), options.bootstrap),
         summarize(column(&EpisodeMetrics::delta_v, first, per_policy), options.bootstrap),
         summarize(column(&EpisodeMetrics::episode_length, first, per_policy), options.bootstrap),
         summarize(column(&EpisodeMetrics::total_reward, first, per_policy), options.bootstrap)});
  }
  return report;
}

EvalReport evaluate_policy(const PolicyParams& params,
                           const EpisodeConfig& config,
                           const EvalOptions& options) {
  auto shared = std::make_shared<const PolicyParams>(params);
  return evaluate({{"policy", policy_factory(shared)}}, config, options);
}

std::string report_to_json(const EvalReport& report) {
  static const char* kMetricNames[] = {"inspected_pct", "delta_v",
                                       "episode_length", "total_reward"};
  nlohmann::ordered_json j;
  j["format"] = "sunlit-eval-report";
  j["version"] = 1;
  j["samples"] = report.samples;
  j["trials"] = report.trials;
  j["master_seed"] = report.master_seed;
  j["policies"] = report.policies;
  nlohmann::ordered_json metrics;
  metrics["inspected_pct"] = summary_json(report.inspected_pct);
  metrics["delta_v"] = summary_json(report.delta_v);
  metrics["episode_length"] = summary_json(report.episode_length);
  metrics["total_reward"] = summary_json(report.total_reward);
  j["metrics"] = metrics;
  nlohmann::ordered_json per_policy = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < report.per_policy.size(); ++p) {
    nlohmann::ordered_json entry;
    entry["policy"] = report.policies[p];
    for (std::size_t m = 0; m < 4; ++m) {
      entry[kMetricNames[m]] = summary_json(report.per_policy[p][m]);
    }
    per_policy.push_back(entry);
  }
  j["per_policy"] = per_policy;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : report.episodes) {
    nlohmann::ordered_json row;
    row["policy"] = r.policy;
    row["trial"] = r.trial;
    row["episode_seed"] = r.episode_seed;
    row["inspected_pct"] = r.metrics.inspected_pct;
    row["delta_v"] = r.metrics.delta_v;
    row["episode_length"] = r.metrics.episode_length;
    row["total_reward"] = r.metrics.total_reward;
    row["reason"] = to_string(r.metrics.reason);
    rows.push_back(row);
  }
  j["episodes"] = rows;
  return j.dump(2);
}

}  // namespace sunlit
