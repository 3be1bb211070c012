#include "sunlit/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "sunlit/error.hpp"

namespace sunlit {

using detail::Json;
using detail::JsonReader;

namespace {

constexpr ErrorKind kKind = ErrorKind::Checkpoint;

Termination termination_from_string(const std::string& name) {
  for (const auto t : {Termination::Running, Termination::Horizon, Termination::Crash,
                       Termination::Escape, Termination::Complete}) {
    if (name == to_string(t)) return t;
  }
  throw Error(kKind, "unknown termination reason '" + name + "'");
}

Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }

Vec3 read_vec3(JsonReader& r, const char* key) {
  const Eigen::VectorXd v = detail::read_vector(r, key, 3);
  return Vec3(v[0], v[1], v[2]);
}

Json adam_json(const AdamState& s) {
  Json j;
  j["steps"] = s.steps;
  j["first"] = detail::vector_json(s.first);
  j["second"] = detail::vector_json(s.second);
  return j;
}

void read_adam(JsonReader& r, AdamState& s, std::size_t expected) {
  r.require("steps");
  r.read("steps", s.steps);
  std::vector<double> first;
  std::vector<double> second;
  r.read("first", first);
  r.read("second", second);
  // An optimizer that has never stepped is stored empty.
  if (first.size() != second.size() ||
      (!first.empty() && first.size() != expected)) {
    r.fail("first", "moment vectors do not match the network size");
  }
  s.first = Eigen::Map<const Eigen::VectorXd>(first.data(),
                                              static_cast<Eigen::Index>(first.size()));
  s.second = Eigen::Map<const Eigen::VectorXd>(second.data(),
                                               static_cast<Eigen::Index>(second.size()));
}

Json env_json(const InspectionEnv::Snapshot& s) {
  Json j;
  j["position"] = vec3_json(s.deputy.position);
  j["velocity"] = vec3_json(s.deputy.velocity);
  j["sun_angle"] = s.sun.theta;
  std::string flags;
  for (const bool b : s.inspected) flags.push_back(b ? '1' : '0');
  j["inspected"] = flags;
  j["steps"] = s.steps;
  j["delta_v_total"] = s.delta_v_total;
  j["reward_total"] = s.reward_total;
  j["reason"] = to_string(s.reason);
  j["episode_seed"] = s.episode_seed;
  j["started"] = s.started;
  j["dv_weight"] = s.dv_weight;
  return j;
}

InspectionEnv::Snapshot read_env(JsonReader& r) {
  InspectionEnv::Snapshot s;
  s.deputy.position = read_vec3(r, "position");
  s.deputy.velocity = read_vec3(r, "velocity");
  r.read("sun_angle", s.sun.theta);
  std::string flags;
  r.read("inspected", flags);
  for (const char c : flags) {
    if (c != '0' && c != '1') r.fail("inspected", "expected a string of 0/1 flags");
    s.inspected.push_back(c == '1');
  }
  r.read("steps", s.steps);
  r.read("delta_v_total", s.delta_v_total);
  r.read("reward_total", s.reward_total);
  std::string reason = to_string(Termination::Running);
  r.read("reason", reason);
  s.reason = termination_from_string(reason);
  r.read("episode_seed", s.episode_seed);
  r.read("started", s.started);
  r.read("dv_weight", s.dv_weight);
  return s;
}

Json curve_json(const CurvePoint& p) {
  Json j;
  j["timestep"] = p.timestep;
  j["iteration"] = p.iteration;
  j["inspected_pct"] = p.inspected_pct;
  j["delta_v"] = p.delta_v;
  j["episode_length"] = p.episode_length;
  j["total_reward"] = p.total_reward;
  j["dv_weight"] = p.dv_weight;
  return j;
}

CurvePoint read_curve_point(JsonReader& r) {
  CurvePoint p;
  r.read("timestep", p.timestep);
  r.read("iteration", p.iteration);
  r.read("inspected_pct", p.inspected_pct);
  r.read("delta_v", p.delta_v);
  r.read("episode_length", p.episode_length);
  r.read("total_reward", p.total_reward);
  r.read("dv_weight", p.dv_weight);
  return p;
}

}  // namespace

std::string serialize_checkpoint(const Trainer::State& s) {
  Json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["seed"] = s.config.seed;
  j["timesteps"] = s.timesteps;
  j["iteration"] = s.iteration;
  j["next_eval"] = s.next_eval;
  j["next_checkpoint"] = s.next_checkpoint;
  j["mode"] = to_string(s.env_config.illumination.mode);
  j["episode"] = detail::episode_json(s.env_config);
  j["dynamics"] = detail::dynamics_json(s.env_config.dynamics);
  j["illumination"] = detail::illumination_json(s.env_config.illumination);
  j["train"] = detail::train_json(s.config);
  j["curriculum"] = detail::curriculum_json(s.config.curriculum);

  Json policy;
  policy["observation_size"] = s.params.shape.observation_size;
  policy["hidden"] = s.params.shape.hidden;
  policy["action_size"] = s.params.shape.action_size;
  policy["action_bound"] = s.params.action_bound;
  policy["log_std"] = detail::vector_json(s.params.log_std);
  policy["actor"] = detail::vector_json(s.params.actor.flatten());
  policy["critic"] = detail::vector_json(s.params.critic.flatten());
  j["policy"] = policy;

  Json optimizer;
  optimizer["actor"] = adam_json(s.optimizer.actor);
  optimizer["critic"] = adam_json(s.optimizer.critic);
  j["optimizer"] = optimizer;

  Json cur;
  cur["weight"] = s.curriculum.weight;
  cur["steps_in_regime"] = s.curriculum.steps_in_regime;
  cur["regime"] = s.curriculum.regime;
  cur["recent"] = s.curriculum.recent;
  j["curriculum_state"] = cur;

  j["rng_state"] = s.rng_state;
  Json envs = Json::array();
  for (const auto& e : s.envs) envs.push_back(env_json(e));
  j["envs"] = envs;
  j["episodes_started"] = s.episodes_started;

  Json curve = Json::array();
  for (const auto& p : s.curve) curve.push_back(curve_json(p));
  j["curve"] = curve;

  Json stats;
  stats["policy_loss"] = s.last_stats.policy_loss;
  stats["value_loss"] = s.last_stats.value_loss;
  stats["entropy"] = s.last_stats.entropy;
  stats["clip_fraction"] = s.last_stats.clip_fraction;
  stats["approx_kl"] = s.last_stats.approx_kl;
  stats["minibatches"] = s.last_stats.minibatches;
  j["last_stats"] = stats;
  return j.dump() + "\n";
}

Trainer::State parse_checkpoint(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(kKind, std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("format") ||
      doc["format"] != kCheckpointFormat) {
    throw Error(kKind, std::string("not a checkpoint (expected format '") +
                           kCheckpointFormat + "')");
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<long>() != kCheckpointVersion) {
    throw Error(kKind, "checkpoint version " +
                           (doc.contains("version") ? doc["version"].dump() : std::string("(missing)")) +
                           " is not supported; this build reads version " +
                           std::to_string(kCheckpointVersion));
  }

  Trainer::State s;
  JsonReader r(doc, "", kKind);
  std::string format;
  int version = 0;
  r.read("format", format);
  r.read("version", version);
  for (const char* key : {"seed", "timesteps", "iteration", "next_eval",
                          "next_checkpoint", "mode", "policy", "optimizer",
                          "curriculum_state", "rng_state", "envs",
                          "episodes_started", "curve"}) {
    r.require(key);
  }

  std::string mode;
  r.read("mode", mode);
  s.env_config.illumination.mode = illumination_mode_from_string(mode);
  r.section("episode", [&](JsonReader& x) { detail::read_episode(x, s.env_config); });
  r.section("dynamics",
            [&](JsonReader& x) { detail::read_dynamics(x, s.env_config.dynamics); });
  r.section("illumination", [&](JsonReader& x) {
    detail::read_illumination(x, s.env_config.illumination);
  });
  r.section("train", [&](JsonReader& x) { detail::read_train(x, s.config); });
  r.section("curriculum",
            [&](JsonReader& x) { detail::read_curriculum(x, s.config.curriculum); });
  std::uint64_t seed = 0;
  r.read("seed", seed);
  if (seed != s.config.seed) r.fail("seed", "disagrees with train.seed");
  r.read("timesteps", s.timesteps);
  r.read("iteration", s.iteration);
  r.read("next_eval", s.next_eval);
  r.read("next_checkpoint", s.next_checkpoint);

  r.section("policy", [&](JsonReader& x) {
    NetworkShape shape;
    x.read("observation_size", shape.observation_size);
    x.read("hidden", shape.hidden);
    x.read("action_size", shape.action_size);
    double bound = 1.0;
    x.read("action_bound", bound);
    if (!(shape == s.config.network)) {
      x.fail("hidden", "policy shape disagrees with train.network");
    }
    s.params = PolicyParams::create(shape, 0, s.config.init, bound);
    s.params.log_std = detail::read_vector(x, "log_std", shape.action_size);
    s.params.actor.assign(detail::read_vector(
        x, "actor", static_cast<Eigen::Index>(s.params.actor.parameter_count())));
    s.params.critic.assign(detail::read_vector(
        x, "critic", static_cast<Eigen::Index>(s.params.critic.parameter_count())));
  });
  if (!s.params.all_finite()) {
    throw Error(kKind, "checkpoint policy parameters are not finite");
  }

  r.section("optimizer", [&](JsonReader& x) {
    x.required_section("actor", [&](JsonReader& a) {
      read_adam(a, s.optimizer.actor, s.params.actor.parameter_count() +
                                           static_cast<std::size_t>(s.params.log_std.size()));
    });
    x.required_section("critic", [&](JsonReader& a) {
      read_adam(a, s.optimizer.critic, s.params.critic.parameter_count());
    });
  });

  r.section("curriculum_state", [&](JsonReader& x) {
    x.read("weight", s.curriculum.weight);
    x.read("steps_in_regime", s.curriculum.steps_in_regime);
    x.read("regime", s.curriculum.regime);
    x.read("recent", s.curriculum.recent);
  });

  r.read("rng_state", s.rng_state);
  const Json& envs = r.raw("envs");
  if (!envs.is_array()) r.fail("envs", "expected an array");
  for (std::size_t i = 0; i < envs.size(); ++i) {
    JsonReader x(envs[i], "envs[" + std::to_string(i) + "]", kKind);
    s.envs.push_back(read_env(x));
    x.finish();
  }
  r.read("episodes_started", s.episodes_started);

  const Json& curve = r.raw("curve");
  if (!curve.is_array()) r.fail("curve", "expected an array");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    JsonReader x(curve[i], "curve[" + std::to_string(i) + "]", kKind);
    s.curve.push_back(read_curve_point(x));
    x.finish();
  }

  r.section("last_stats", [&](JsonReader& x) {
    x.read("policy_loss", s.last_stats.policy_loss);
    x.read("value_loss", s.last_stats.value_loss);
    x.read("entropy", s.last_stats.entropy);
    x.read("clip_fraction", s.last_stats.clip_fraction);
    x.read("approx_kl", s.last_stats.approx_kl);
    x.read("minibatches", s.last_stats.minibatches);
  });
  r.finish();
  return s;
}

void save_checkpoint(const std::filesystem::path& path, const Trainer::State& state) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << serialize_checkpoint(state);
    if (!out) throw Error(ErrorKind::Io, "failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Trainer::State load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read checkpoint " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_checkpoint(text.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

bool same_settings(const Trainer::State& state, const TrainConfig& train,
                   const EpisodeConfig& episode) {
  auto settings = [](const TrainConfig& t, const EpisodeConfig& e) {
    Json j;
    j["train"] = detail::train_json(t);
    j["train"].erase("seed");
    j["train"].erase("total_timesteps");
    j["curriculum"] = detail::curriculum_json(t.curriculum);
    j["mode"] = to_string(e.illumination.mode);
    j["episode"] = detail::episode_json(e);
    j["dynamics"] = detail::dynamics_json(e.dynamics);
    j["illumination"] = detail::illumination_json(e.illumination);
    return j.dump();
  };
  return settings(state.config, state.env_config) == settings(train, episode);
}

}  // namespace sunlit
