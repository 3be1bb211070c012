#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "sunlit/environment.hpp"
#include "sunlit/policy.hpp"

namespace sunlit {

// ---------------------------------------------------------------------------
// Robust statistics
// ---------------------------------------------------------------------------

/// Interquartile mean: sort, drop floor(n/4) samples from each end, average
/// what remains.
double iqm(std::span<const double> samples);

struct ConfidenceInterval {
  double low = 0.0;
  double high = 0.0;
};

struct BootstrapConfig {
  int resamples = 2000;
  double level = 0.95;
  std::uint64_t seed = 0;
};

/// Percentile bootstrap interval of the IQM. Needs at least two samples.
ConfidenceInterval bootstrap_ci(std::span<const double> samples,
                                const BootstrapConfig& cfg = {});

// ---------------------------------------------------------------------------
// Episodes
// ---------------------------------------------------------------------------

struct EpisodeMetrics {
  double inspected_pct = 0.0;
  double delta_v = 0.0;         // m/s
  double episode_length = 0.0;  // s
  double total_reward = 0.0;
  Termination reason = Termination::Running;
};

/// Anything that picks a thrust from the latest observation.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual void reset(std::uint64_t /*episode_seed*/) {}
  virtual ActionVec act(const Observation& obs, const InspectionEnv& env) = 0;
};

using ControllerFactory = std::function<std::unique_ptr<Controller>()>;

/// Deterministic (mean-action) neural policy.
class PolicyController : public Controller {
 public:
  explicit PolicyController(std::shared_ptr<const PolicyParams> params)
      : params_(std::move(params)) {}
  ActionVec act(const Observation& obs, const InspectionEnv& env) override;

 private:
  std::shared_ptr<const PolicyParams> params_;
};

ControllerFactory policy_factory(std::shared_ptr<const PolicyParams> params);

/// Runs one episode from `seed` to termination. When `log` is non-null every
/// step is written to it as a trajectory line.
EpisodeMetrics run_episode(InspectionEnv& env, Controller& controller,
                           std::uint64_t seed, std::ostream* log = nullptr);

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct MetricSummary {
  double iqm = 0.0;
  ConfidenceInterval ci;
};

struct EpisodeRow {
  std::string policy;
  std::size_t policy_index = 0;
  int trial = 0;
  std::uint64_t episode_seed = 0;
  EpisodeMetrics metrics;
};

struct EvalReport {
  MetricSummary inspected_pct;
  MetricSummary delta_v;
  MetricSummary episode_length;
  MetricSummary total_reward;
  std::size_t samples = 0;
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::string> policies;
  std::vector<EpisodeRow> episodes;
  /// Per-policy summaries in the same order as `policies`.
  std::vector<std::array<MetricSummary, 4>> per_policy;
};

struct EvalOptions {
  int trials = 100;
  std::uint64_t master_seed = 0;
  int workers = 1;
  BootstrapConfig bootstrap;
  double dv_weight = kEvaluationDvWeight;
  // When set, each episode writes <policy>_trial<NNN>.jsonl here.
  std::filesystem::path trajectory_dir;
};

struct NamedController {
  std::string name;
  ControllerFactory factory;
};

/// Episode seed shared by every policy for a given trial, so policies are
/// compared on identical initial conditions.
std::uint64_t evaluation_episode_seed(std::uint64_t master_seed, int trial);

/// Pools trials x controllers episodes into one report. Results do not depend
/// on the worker count.
EvalReport evaluate(const std::vector<NamedController>& controllers,
                    const EpisodeConfig& config, const EvalOptions& options);

EvalReport evaluate_policy(const PolicyParams& params,
                           const EpisodeConfig& config,
                           const EvalOptions& options);

MetricSummary summarize(std::span<const double> samples,
                        const BootstrapConfig& cfg);

/// Machine-readable report (summary plus per-episode rows) as a JSON string.
std::string report_to_json(const EvalReport& report);

/// Runs fn(i) for i in [0, n) on up to `workers` threads.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

}  // namespace sunlit
