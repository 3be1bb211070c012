#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sunlit::cli {

/// Prefixes relative output directories with $SUNLIT_OUTPUT_ROOT when set.
std::filesystem::path resolve_output(const std::filesystem::path& dir);

struct ConfigInitOptions {
  std::string preset = "default";
  std::string out;  // stdout when empty
  bool force = false;
};
void config_init(const ConfigInitOptions& o);

struct TrainOptions {
  std::string config;
  std::vector<std::uint64_t> seeds;  // empty: use the config's seeds
  std::optional<std::string> mode;
  std::optional<long> steps;
  std::optional<int> workers;
  std::string out;
  bool resume = false;
  bool quiet = false;
};
void train(const TrainOptions& o);

struct EvalCommandOptions {
  std::vector<std::string> checkpoints;
  std::string run;
  int trials = 100;
  std::uint64_t master_seed = 20240101;
  std::optional<std::string> mode;
  std::optional<int> workers;
  std::string out;
  bool trajectories = false;
  std::optional<std::string> reference;
};
void eval(const EvalCommandOptions& o);

struct BaselineOptions {
  std::string controller;
  std::string config;
  int trials = 20;
  std::optional<std::uint64_t> master_seed;
  std::uint64_t seed = 0;
  std::optional<std::string> mode;
  std::optional<int> workers;
  std::string out;
  bool trajectories = true;
};
void baseline(const BaselineOptions& o);

struct ExportOptions {
  std::string run;
  std::vector<std::uint64_t> seeds;  // empty: seeds listed in the manifest
  std::string out;
};
void export_plots(const ExportOptions& o);

}  // namespace sunlit::cli
