#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sunlit/baselines.hpp"
#include "sunlit/environment.hpp"
#include "sunlit/train.hpp"

namespace sunlit {

struct EvalSettings {
  int trials = 100;
  std::uint64_t master_seed = 20240101;
  int workers = 1;
  int bootstrap_resamples = 2000;
  double confidence_level = 0.95;
  std::uint64_t bootstrap_seed = 0;
};

/// Everything a command needs, loaded from one JSON document. Missing keys
/// keep their defaults; unknown keys are rejected.
struct RunConfig {
  IlluminationMode mode = IlluminationMode::Binary;
  std::string output_dir = "runs/default";
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  EpisodeConfig episode;  // carries dynamics and illumination
  TrainConfig train;
  SunSyncGains sun_sync;
  EvalSettings eval;

  /// Episode settings with the illumination mode applied.
  EpisodeConfig episode_config() const;
  EvalOptions eval_options() const;
  void validate() const;
};

/// Named starting points: "default", "smoke", "full_binary",
/// "full_spectral".
RunConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string dump_run_config(const RunConfig& config);

}  // namespace sunlit
