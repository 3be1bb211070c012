#include "commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "sunlit/baselines.hpp"
#include "sunlit/checkpoint.hpp"
#include "sunlit/config.hpp"
#include "sunlit/curves.hpp"
#include "sunlit/error.hpp"
#include "sunlit/evaluation.hpp"
#include "sunlit/reference.hpp"
#include "sunlit/train.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace sunlit::cli {

namespace {

void write_file(const fs::path& path, const std::string& text) {
  const fs::path tmp = fs::path(path) += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << text;
    if (!out) throw Error(ErrorKind::Io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot move " + tmp.string() + ": " + ec.message());
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
}

Json read_json(const fs::path& path, ErrorKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(kind, path.string() + ": " + e.what());
  }
}

std::string seed_stem(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

std::string curve_text(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  write_curve_csv(out, curve);
  return out.str();
}

void print_summary(std::ostream& out, const std::string& label, const EvalReport& r) {
  out << std::fixed << std::setprecision(2);
  out << label << " (" << r.samples << " episodes)\n";
  const std::pair<const char*, const MetricSummary*> rows[] = {
      {"inspected_pct", &r.inspected_pct},
      {"delta_v", &r.delta_v},
      {"episode_length", &r.episode_length},
      {"total_reward", &r.total_reward}};
  for (const auto& [name, m] : rows) {
    out << "  " << std::left << std::setw(15) << name << std::right << " IQM "
        << m->iqm << "  95% CI [" << m->ci.low << ", " << m->ci.high << "]\n";
  }
  out.unsetf(std::ios::floatfield);
}

std::vector<std::uint64_t> manifest_seeds(const fs::path& run) {
  const Json manifest = read_json(run / "manifest.json", ErrorKind::Io);
  std::vector<std::uint64_t> seeds;
  try {
    for (const auto& s : manifest.at("seeds")) seeds.push_back(s.get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, (run / "manifest.json").string() + ": " + e.what());
  }
  return seeds;
}

}  // namespace

fs::path resolve_output(const fs::path& dir) {
  const char* root = std::getenv("SUNLIT_OUTPUT_ROOT");
  if (root == nullptr || *root == '\0' || dir.is_absolute()) return dir;
  return fs::path(root) / dir;
}

void config_init(const ConfigInitOptions& o) {
  const std::string text = dump_run_config(preset_config(o.preset));
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  if (fs::exists(o.out) && !o.force) {
    throw Error(ErrorKind::Io, o.out + " already exists (use --force to overwrite)");
  }
  write_file(o.out, text);
  std::cerr << "wrote " << o.out << "\n";
}

void train(const TrainOptions& o) {
  // Everything that can fail on bad input happens before any output exists.
  RunConfig cfg = load_run_config(o.config);
  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.mode) cfg.mode = illumination_mode_from_string(*o.mode);
  if (o.steps) cfg.train.total_timesteps = *o.steps;
  if (o.workers) cfg.train.workers = *o.workers;
  cfg.validate();
  const EpisodeConfig env_cfg = cfg.episode_config();
  const fs::path out = resolve_output(o.out.empty() ? fs::path(cfg.output_dir) : fs::path(o.out));

  std::vector<std::optional<Trainer::State>> resumed(cfg.seeds.size());
  if (o.resume) {
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
      const fs::path ckpt = out / "checkpoints" / (seed_stem(cfg.seeds[i]) + ".json");
      if (!fs::exists(ckpt)) continue;
      Trainer::State state = load_checkpoint(ckpt);
      if (!same_settings(state, cfg.train, env_cfg)) {
        throw Error(ErrorKind::Config, ckpt.string() +
                                           " was produced with different settings; "
                                           "refusing to resume");
      }
      state.config.total_timesteps = cfg.train.total_timesteps;
      resumed[i] = std::move(state);
    }
  }

  make_dirs(out / "checkpoints");
  make_dirs(out / "curves");
  write_file(out / "config.json", dump_run_config(cfg));

  Json entries = Json::array();
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    const std::uint64_t seed = cfg.seeds[i];
    const fs::path ckpt = out / "checkpoints" / (seed_stem(seed) + ".json");
    const fs::path curve = out / "curves" / (seed_stem(seed) + ".csv");

    std::unique_ptr<Trainer> trainer;
    if (resumed[i]) {
      trainer = std::make_unique<Trainer>(*resumed[i]);
      if (!o.quiet) {
        std::cerr << "seed " << seed << ": resuming at step " << trainer->timesteps() << "\n";
      }
    } else {
      TrainConfig tc = cfg.train;
      tc.seed = seed;
      trainer = std::make_unique<Trainer>(tc, env_cfg);
    }

    auto save = [&](const Trainer& t) {
      save_checkpoint(ckpt, t.state());
      write_file(curve, curve_text(t.curve()));
    };
    std::size_t reported = 0;
    auto progress = [&](const Trainer& t) {
      if (o.quiet) return;
      for (; reported < t.curve().size(); ++reported) {
        const CurvePoint& p = t.curve()[reported];
        std::cerr << "seed " << seed << " step " << p.timestep << ": inspected "
                  << std::fixed << std::setprecision(1) << p.inspected_pct
                  << "%, dV " << p.delta_v << " m/s, length " << p.episode_length
                  << " s, w " << std::setprecision(5) << p.dv_weight << "\n";
        std::cerr.unsetf(std::ios::floatfield);
      }
    };
    trainer->run(save, progress);
    progress(*trainer);
    save(*trainer);

    Json entry;
    entry["seed"] = seed;
    entry["checkpoint"] = (fs::path("checkpoints") / (seed_stem(seed) + ".json")).string();
    entry["curve"] = (fs::path("curves") / (seed_stem(seed) + ".csv")).string();
    entry["timesteps"] = trainer->timesteps();
    entry["iterations"] = trainer->iteration();
    entry["evaluations"] = trainer->curve().size();
    if (!trainer->curve().empty()) {
      const CurvePoint& last = trainer->curve().back();
      Json final_eval;
      final_eval["inspected_pct"] = last.inspected_pct;
      final_eval["delta_v"] = last.delta_v;
      final_eval["episode_length"] = last.episode_length;
      final_eval["total_reward"] = last.total_reward;
      entry["final_evaluation"] = final_eval;
    }
    entries.push_back(entry);
  }

  Json manifest;
  manifest["format"] = "sunlit-train-manifest";
  manifest["version"] = 1;
  manifest["mode"] = to_string(cfg.mode);
  manifest["seeds"] = cfg.seeds;
  manifest["total_timesteps"] = cfg.train.total_timesteps;
  manifest["config"] = "config.json";
  manifest["runs"] = entries;
  write_file(out / "manifest.json", manifest.dump(2) + "\n");
  std::cout << "trained " << cfg.seeds.size() << " seed(s) into " << out.string() << "\n";
}

void eval(const EvalCommandOptions& o) {
  std::vector<fs::path> paths;
  fs::path run;
  if (!o.run.empty()) {
    run = resolve_output(o.run);
    for (const auto seed : manifest_seeds(run)) {
      paths.push_back(run / "checkpoints" / (seed_stem(seed) + ".json"));
    }
  }
  for (const auto& c : o.checkpoints) paths.emplace_back(c);
  if (paths.empty()) {
    throw Error(ErrorKind::Config, "eval needs --checkpoints or --run");
  }

  std::optional<EpisodeConfig> env_cfg;
  std::vector<NamedController> controllers;
  std::map<std::string, int> names;
  for (const auto& path : paths) {
    Trainer::State state = load_checkpoint(path);
    if (o.mode) state.env_config.illumination.mode = illumination_mode_from_string(*o.mode);
    if (!env_cfg) {
      env_cfg = state.env_config;
    } else if (!same_settings(state, state.config, *env_cfg)) {
      throw Error(ErrorKind::Checkpoint,
                  path.string() + " uses different environment settings from " +
                      paths.front().string());
    }
    std::string name = seed_stem(state.config.seed);
    if (names[name]++ > 0) name = path.stem().string() + "_" + std::to_string(names[name]);
    controllers.push_back(
        {name, policy_factory(std::make_shared<const PolicyParams>(std::move(state.params)))});
  }

  const fs::path out = resolve_output(
      !o.out.empty() ? fs::path(o.out) : (!run.empty() ? run / "eval" : fs::path("eval")));
  make_dirs(out);
  EvalOptions options;
  options.trials = o.trials;
  options.master_seed = o.master_seed;
  if (o.workers) options.workers = *o.workers;
  if (o.trajectories) {
    options.trajectory_dir = out / "trajectories";
    make_dirs(options.trajectory_dir);
  }
  const EvalReport report = evaluate(controllers, *env_cfg, options);
  write_file(out / "eval_report.json", report_to_json(report) + "\n");
  print_summary(std::cout, std::string("evaluation, ") + to_string(env_cfg->illumination.mode) +
                               " illumination", report);

  if (o.reference) {
    const Comparison cmp =
        compare_to_reference(report, illumination_mode_from_string(*o.reference));
    const std::string table = comparison_table(cmp);
    write_file(out / "comparison.md", table);
    std::cout << "\n" << table;
  }
  std::cout << "report: " << (out / "eval_report.json").string() << "\n";
}

void baseline(const BaselineOptions& o) {
  BaselineSpec spec;
  spec.id = baseline_from_string(o.controller);
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_run_config(o.config);
  if (o.mode) cfg.mode = illumination_mode_from_string(*o.mode);
  if (o.trials < 1) throw Error(ErrorKind::Config, "--trials must be >= 1");
  spec.sun_sync = cfg.sun_sync;
  spec.seed = o.seed;
  const EpisodeConfig env_cfg = cfg.episode_config();

  const fs::path out = resolve_output(
      o.out.empty() ? fs::path(cfg.output_dir) / ("baseline_" + o.controller) : fs::path(o.out));
  make_dirs(out);
  EvalOptions options = cfg.eval_options();
  options.trials = o.trials;
  if (o.master_seed) options.master_seed = *o.master_seed;
  if (o.workers) options.workers = *o.workers;
  if (o.trajectories) {
    options.trajectory_dir = out / "trajectories";
    make_dirs(options.trajectory_dir);
  }
  const EvalReport report = evaluate({{o.controller, make_baseline(spec)}}, env_cfg, options);
  write_file(out / "report.json", report_to_json(report) + "\n");
  print_summary(std::cout, "baseline " + o.controller + ", " +
                               to_string(env_cfg.illumination.mode) + " illumination",
                report);
  std::cout << "report: " << (out / "report.json").string() << "\n";
}

void export_plots(const ExportOptions& o) {
  const fs::path run = resolve_output(o.run);
  const std::vector<std::uint64_t> seeds = o.seeds.empty() ? manifest_seeds(run) : o.seeds;
  std::map<std::uint64_t, std::vector<CurvePoint>> curves;
  std::vector<std::uint64_t> missing;
  for (const auto seed : seeds) {
    const fs::path path = run / "curves" / (seed_stem(seed) + ".csv");
    if (!fs::exists(path)) {
      missing.push_back(seed);
      continue;
    }
    curves[seed] = read_curve_csv(path);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto s : missing) list += (list.empty() ? "" : ", ") + std::to_string(s);
    throw Error(ErrorKind::Io, "missing curve files in " + (run / "curves").string() +
                                   " for seeds: " + list);
  }
  const fs::path out = o.out.empty() ? run / "plots" : resolve_output(o.out);
  make_dirs(out);
  for (const auto& table : aggregate_curves(curves)) {
    std::ostringstream text;
    write_metric_table(text, table);
    write_file(out / (table.metric + ".csv"), text.str());
  }
  std::cout << "wrote 4 metric tables for " << seeds.size() << " seed(s) into "
            << out.string() << "\n";
}

}  // namespace sunlit::cli
