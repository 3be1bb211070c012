#include "sunlit/config.hpp"

#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "sunlit/error.hpp"

namespace sunlit {

using detail::Json;
using detail::JsonReader;

EpisodeConfig RunConfig::episode_config() const {
  EpisodeConfig c = episode;
  c.illumination.mode = mode;
  return c;
}

EvalOptions RunConfig::eval_options() const {
  EvalOptions o;
  o.trials = eval.trials;
  o.master_seed = eval.master_seed;
  o.workers = eval.workers;
  o.bootstrap.resamples = eval.bootstrap_resamples;
  o.bootstrap.level = eval.confidence_level;
  o.bootstrap.seed = eval.bootstrap_seed;
  return o;
}

void RunConfig::validate() const {
  try {
    episode_config().validate();
    train.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Config, std::string("invalid configuration: ") + e.what());
  }
  if (seeds.empty()) throw Error(ErrorKind::Config, "key 'seeds': must not be empty");
  if (eval.trials < 1) throw Error(ErrorKind::Config, "key 'eval.trials': must be >= 1");
}

std::vector<std::string> preset_names() {
  return {"default", "smoke", "full_binary", "full_spectral"};
}

RunConfig preset_config(const std::string& name) {
  RunConfig c;
  if (name == "default") return c;
  if (name == "smoke") {
    c.output_dir = "runs/smoke";
    c.seeds = {0, 1, 2};
    c.episode.point_count = 30;
    c.train.total_timesteps = 200'000;
    c.train.eval_interval = 25'000;
    c.train.checkpoint_interval = 50'000;
    c.eval.trials = 30;
    return c;
  }
  if (name == "full_binary" || name == "full_spectral") {
    c.mode = name == "full_binary" ? IlluminationMode::Binary
                                    : IlluminationMode::Spectral;
    c.output_dir = "runs/" + name;
    return c;
  }
  throw Error(ErrorKind::Config, "unknown preset '" + name +
                                     "' (expected default, smoke, full_binary "
                                     "or full_spectral)");
}

RunConfig parse_run_config(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Config, std::string("malformed JSON: ") + e.what());
  }
  RunConfig c;
  JsonReader r(doc, "", ErrorKind::Config);
  if (r.has("mode")) {
    std::string mode;
    r.read("mode", mode);
    if (mode != "binary" && mode != "spectral") {
      r.fail("mode", "must be 'binary' or 'spectral'");
    }
    c.mode = illumination_mode_from_string(mode);
  }
  r.read("output_dir", c.output_dir);
  r.check("output_dir", !c.output_dir.empty(), "must not be empty");
  r.read("seeds", c.seeds);
  r.check("seeds", !c.seeds.empty(), "must not be empty");
  r.section("episode", [&](JsonReader& s) { detail::read_episode(s, c.episode); });
  r.section("dynamics",
            [&](JsonReader& s) { detail::read_dynamics(s, c.episode.dynamics); });
  r.section("illumination", [&](JsonReader& s) {
    detail::read_illumination(s, c.episode.illumination);
  });
  r.section("train", [&](JsonReader& s) { detail::read_train(s, c.train); });
  r.section("curriculum",
            [&](JsonReader& s) { detail::read_curriculum(s, c.train.curriculum); });
  r.section("sun_sync", [&](JsonReader& s) { detail::read_sun_sync(s, c.sun_sync); });
  r.section("eval", [&](JsonReader& s) {
    s.read("trials", c.eval.trials);
    s.check("trials", c.eval.trials >= 1, "must be >= 1");
    s.read("master_seed", c.eval.master_seed);
    s.read("workers", c.eval.workers);
    s.check("workers", c.eval.workers >= 1, "must be >= 1");
    s.read("bootstrap_resamples", c.eval.bootstrap_resamples);
    s.check("bootstrap_resamples", c.eval.bootstrap_resamples >= 1, "must be >= 1");
    s.read("confidence_level", c.eval.confidence_level);
    s.check("confidence_level",
            c.eval.confidence_level > 0.0 && c.eval.confidence_level < 1.0,
            "must lie in (0, 1)");
    s.read("bootstrap_seed", c.eval.bootstrap_seed);
  });
  r.finish();
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_run_config(text.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string dump_run_config(const RunConfig& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["output_dir"] = c.output_dir;
  j["seeds"] = c.seeds;
  j["episode"] = detail::episode_json(c.episode);
  j["dynamics"] = detail::dynamics_json(c.episode.dynamics);
  j["illumination"] = detail::illumination_json(c.episode.illumination);
  j["train"] = detail::train_json(c.train);
  j["curriculum"] = detail::curriculum_json(c.train.curriculum);
  j["sun_sync"] = detail::sun_sync_json(c.sun_sync);
  Json eval;
  eval["trials"] = c.eval.trials;
  eval["master_seed"] = c.eval.master_seed;
  eval["workers"] = c.eval.workers;
  eval["bootstrap_resamples"] = c.eval.bootstrap_resamples;
  eval["confidence_level"] = c.eval.confidence_level;
  eval["bootstrap_seed"] = c.eval.bootstrap_seed;
  j["eval"] = eval;
  return j.dump(2) + "\n";
}

}  // namespace sunlit
