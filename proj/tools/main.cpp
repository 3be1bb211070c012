#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "sunlit/error.hpp"

namespace {

// Exit status by failure category.
enum Exit : int {
  kOk = 0,
  kUnexpected = 1,
  kUsage = 2,
  kConfig = 3,
  kIo = 4,
  kCheckpoint = 5,
  kEvaluation = 6,
  kSimulation = 7,
};

int exit_code(sunlit::ErrorKind kind) {
  using sunlit::ErrorKind;
  switch (kind) {
    case ErrorKind::Config: return kConfig;
    case ErrorKind::Io: return kIo;
    case ErrorKind::Checkpoint: return kCheckpoint;
    case ErrorKind::Evaluation: return kEvaluation;
    default: return kSimulation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = sunlit::cli;
  CLI::App app{"Sunlit inspection: train, evaluate and benchmark inspection policies"};
  app.require_subcommand(1);

  auto* config = app.add_subcommand("config", "Configuration helpers");
  config->require_subcommand(1);
  cli::ConfigInitOptions init;
  auto* init_cmd = config->add_subcommand("init", "Print or write a full default config");
  init_cmd->add_option("--preset", init.preset, "default, smoke, full_binary or full_spectral")
      ->check(CLI::IsMember({"default", "smoke", "full_binary", "full_spectral"}));
  init_cmd->add_option("-o,--out", init.out, "Output file (stdout when omitted)");
  init_cmd->add_flag("--force", init.force, "Overwrite an existing file");

  cli::TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train one policy per seed");
  train_cmd->add_option("-c,--config", train.config, "Run config (JSON)")->required();
  train_cmd->add_option("-s,--seeds", train.seeds, "Seeds (overrides the config)")
      ->delimiter(',');
  train_cmd->add_option("--mode", train.mode, "binary or spectral")
      ->check(CLI::IsMember({"binary", "spectral"}));
  train_cmd->add_option("--steps", train.steps, "Total training steps per seed");
  train_cmd->add_option("--workers", train.workers, "Environment worker threads");
  train_cmd->add_option("-o,--out", train.out, "Output directory (default: config output_dir)");
  train_cmd->add_flag("--resume", train.resume, "Continue from existing checkpoints");
  train_cmd->add_flag("-q,--quiet", train.quiet, "No progress output");

  cli::EvalCommandOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate trained checkpoints");
  eval_cmd->add_option("--checkpoints", ev.checkpoints, "Checkpoint files");
  eval_cmd->add_option("--run", ev.run, "Training run directory (uses its manifest)");
  eval_cmd->add_option("-n,--trials", ev.trials, "Episodes per checkpoint")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_option("--master-seed", ev.master_seed, "Seed for the episode initial conditions");
  eval_cmd->add_option("--mode", ev.mode, "Override the illumination mode")
      ->check(CLI::IsMember({"binary", "spectral"}));
  eval_cmd->add_option("--workers", ev.workers, "Worker threads");
  eval_cmd->add_option("-o,--out", ev.out, "Output directory");
  eval_cmd->add_flag("--trajectories", ev.trajectories, "Write per-episode trajectory logs");
  eval_cmd->add_option("--reference", ev.reference,
                       "Compare against the published binary or spectral results")
      ->check(CLI::IsMember({"binary", "spectral"}));

  cli::BaselineOptions base;
  auto* base_cmd = app.add_subcommand("baseline", "Run a scripted controller");
  base_cmd->add_option("--controller", base.controller, "zero_thrust, random or sun_sync")
      ->required();
  base_cmd->add_option("-c,--config", base.config, "Run config (defaults when omitted)");
  base_cmd->add_option("-n,--trials", base.trials, "Episodes")->check(CLI::PositiveNumber);
  base_cmd->add_option("--master-seed", base.master_seed, "Seed for the episode initial conditions");
  base_cmd->add_option("--seed", base.seed, "Random controller stream seed");
  base_cmd->add_option("--mode", base.mode, "binary or spectral")
      ->check(CLI::IsMember({"binary", "spectral"}));
  base_cmd->add_option("--workers", base.workers, "Worker threads");
  base_cmd->add_option("-o,--out", base.out, "Output directory");
  bool no_traj = false;
  base_cmd->add_flag("--no-trajectories", no_traj, "Skip trajectory logs");

  cli::ExportOptions ex;
  auto* export_cmd = app.add_subcommand("export-plots", "Aggregate training curves across seeds");
  export_cmd->add_option("--run", ex.run, "Training run directory")->required();
  export_cmd->add_option("-s,--seeds", ex.seeds, "Seeds (default: from the manifest)")
      ->delimiter(',');
  export_cmd->add_option("-o,--out", ex.out, "Output directory (default: <run>/plots)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (init_cmd->parsed()) cli::config_init(init);
    if (train_cmd->parsed()) cli::train(train);
    if (eval_cmd->parsed()) cli::eval(ev);
    if (base_cmd->parsed()) {
      base.trajectories = !no_traj;
      cli::baseline(base);
    }
    if (export_cmd->parsed()) cli::export_plots(ex);
  } catch (const sunlit::Error& e) {
    std::cerr << "error [" << sunlit::to_string(e.kind()) << "]: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error [unexpected]: " << e.what() << "\n";
    return kUnexpected;
  }
  return kOk;
}
