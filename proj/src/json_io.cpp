#include "json_io.hpp"

#include <cmath>
#include <limits>

namespace sunlit::detail {

JsonReader::JsonReader(const Json& object, std::string path, ErrorKind kind)
    : object_(object), path_(std::move(path)), kind_(kind) {
  if (!object_.is_object()) {
    throw Error(kind_, (path_.empty() ? std::string("document") : "key '" + path_ + "'") +
                           ": expected an object");
  }
}

std::string JsonReader::key_path(const std::string& key) const {
  return path_.empty() ? key : path_ + "." + key;
}

void JsonReader::fail(const std::string& key, const std::string& msg) const {
  throw Error(kind_, "key '" + key_path(key) + "': " + msg);
}

bool JsonReader::has(const char* key) const { return object_.contains(key); }

const Json& JsonReader::get(const char* key) {
  seen_.insert(key);
  return object_.at(key);
}

const Json& JsonReader::raw(const char* key) {
  require(key);
  return get(key);
}

void JsonReader::require(const char* key) const {
  if (!has(key)) fail(key, "missing");
}

void JsonReader::check(const char* key, bool ok,
                       const std::string& requirement) const {
  if (!ok) fail(key, requirement);
}

void JsonReader::read(const char* key, double& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_number()) fail(key, "expected a number");
  out = v.get<double>();
  if (!std::isfinite(out)) fail(key, "must be finite");
}

void JsonReader::read(const char* key, long& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (v.is_number_integer()) {
    if (v.is_number_unsigned() &&
        v.get<std::uint64_t>() >
            static_cast<std::uint64_t>(std::numeric_limits<long>::max())) {
      fail(key, "integer out of range");
    }
    out = v.get<long>();
    return;
  }
  // Accept integral floats such as 1e7.
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) {
      out = static_cast<long>(d);
      return;
    }
  }
  fail(key, "expected an integer");
}

void JsonReader::read(const char* key, int& out) {
  if (!has(key)) return;
  long wide = out;
  read(key, wide);
  if (wide < std::numeric_limits<int>::min() ||
      wide > std::numeric_limits<int>::max()) {
    fail(key, "integer out of range");
  }
  out = static_cast<int>(wide);
}

void JsonReader::read(const char* key, std::uint64_t& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer");
  out = v.get<std::uint64_t>();
}

void JsonReader::read(const char* key, bool& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_boolean()) fail(key, "expected true or false");
  out = v.get<bool>();
}

void JsonReader::read(const char* key, std::string& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_string()) fail(key, "expected a string");
  out = v.get<std::string>();
}

void JsonReader::read(const char* key, std::vector<int>& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_array()) fail(key, "expected an array of integers");
  out.clear();
  for (const Json& e : v) {
    if (!e.is_number_integer()) fail(key, "expected an array of integers");
    out.push_back(e.get<int>());
  }
}

void JsonReader::read(const char* key, std::vector<double>& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  out.clear();
  out.reserve(v.size());
  for (const Json& e : v) {
    if (!e.is_number()) fail(key, "expected an array of numbers");
    out.push_back(e.get<double>());
  }
}

void JsonReader::read(const char* key, std::vector<std::uint64_t>& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_array()) fail(key, "expected an array of non-negative integers");
  out.clear();
  for (const Json& e : v) {
    if (!e.is_number_unsigned()) {
      fail(key, "expected an array of non-negative integers");
    }
    out.push_back(e.get<std::uint64_t>());
  }
}

void JsonReader::read(const char* key, Eigen::Array3d& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (v.is_number()) {
    out = Eigen::Array3d::Constant(v.get<double>());
    return;
  }
  if (!v.is_array() || v.size() != 3) {
    fail(key, "expected a number or an [r, g, b] array");
  }
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) {
      fail(key, "expected a number or an [r, g, b] array");
    }
    out[i] = v[static_cast<std::size_t>(i)].get<double>();
  }
}

void JsonReader::read(const char* key, Interval& out) {
  if (!has(key)) return;
  const Json& v = get(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    fail(key, "expected a [low, high] pair");
  }
  out.lo = v[0].get<double>();
  out.hi = v[1].get<double>();
  if (!(out.lo <= out.hi)) fail(key, "low must not exceed high");
}

void JsonReader::section(const char* key,
                         const std::function<void(JsonReader&)>& body) {
  if (!has(key)) return;
  JsonReader child(get(key), key_path(key), kind_);
  body(child);
  child.finish();
}

void JsonReader::required_section(const char* key,
                                  const std::function<void(JsonReader&)>& body) {
  require(key);
  section(key, body);
}

void JsonReader::finish() const {
  for (const auto& item : object_.items()) {
    if (!seen_.contains(item.key())) fail(item.key(), "unknown key");
  }
}

Json rgb_json(const Eigen::Array3d& rgb) {
  return Json::array({rgb[0], rgb[1], rgb[2]});
}

Json vector_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  out.get_ref<Json::array_t&>().reserve(static_cast<std::size_t>(v.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd read_vector(JsonReader& r, const char* key, Eigen::Index size) {
  r.require(key);
  std::vector<double> values;
  r.read(key, values);
  if (static_cast<Eigen::Index>(values.size()) != size) {
    r.fail(key, "expected " + std::to_string(size) + " values, found " +
                    std::to_string(values.size()));
  }
  return Eigen::Map<const Eigen::VectorXd>(values.data(), size);
}

Json dynamics_json(const CwParams& p) {
  Json j;
  j["mean_motion"] = p.mean_motion;
  j["mass"] = p.mass;
  j["max_thrust"] = p.max_thrust;
  j["dt"] = p.dt;
  return j;
}

void read_dynamics(JsonReader& r, CwParams& p) {
  r.read("mean_motion", p.mean_motion);
  r.check("mean_motion", p.mean_motion > 0.0, "must be > 0");
  r.read("mass", p.mass);
  r.check("mass", p.mass > 0.0, "must be > 0");
  r.read("max_thrust", p.max_thrust);
  r.check("max_thrust", p.max_thrust > 0.0, "must be > 0");
  r.read("dt", p.dt);
  r.check("dt", p.dt > 0.0, "must be > 0");
}

Json episode_json(const EpisodeConfig& c) {
  Json j;
  j["max_steps"] = c.max_steps;
  j["point_count"] = c.point_count;
  j["chief_radius"] = c.chief_radius;
  j["crash_radius"] = c.crash_radius;
  j["escape_radius"] = c.escape_radius;
  j["spawn_radius"] = Json::array({c.spawn_radius.lo, c.spawn_radius.hi});
  j["spawn_speed"] = Json::array({c.spawn_speed.lo, c.spawn_speed.hi});
  Json scaling;
  scaling["position"] = c.scaling.position;
  scaling["velocity"] = c.scaling.velocity;
  scaling["angle"] = c.scaling.angle;
  j["observation_scaling"] = scaling;
  Json clustering;
  clustering["max_clusters"] = c.clustering.max_clusters;
  clustering["max_iterations"] = c.clustering.max_iterations;
  j["clustering"] = clustering;
  return j;
}

void read_episode(JsonReader& r, EpisodeConfig& c) {
  r.read("max_steps", c.max_steps);
  r.check("max_steps", c.max_steps >= 1, "must be >= 1");
  r.read("point_count", c.point_count);
  r.check("point_count", c.point_count >= 1, "must be >= 1");
  r.read("chief_radius", c.chief_radius);
  r.check("chief_radius", c.chief_radius > 0.0, "must be > 0");
  r.read("crash_radius", c.crash_radius);
  r.check("crash_radius", c.crash_radius >= c.chief_radius,
          "must be at least chief_radius");
  r.read("spawn_radius", c.spawn_radius);
  r.check("spawn_radius", c.spawn_radius.lo > c.crash_radius,
          "low end must exceed crash_radius");
  r.read("escape_radius", c.escape_radius);
  r.check("escape_radius", c.escape_radius > c.spawn_radius.hi,
          "must exceed the spawn_radius high end");
  r.read("spawn_speed", c.spawn_speed);
  r.check("spawn_speed", c.spawn_speed.lo >= 0.0, "must be non-negative");
  r.section("observation_scaling", [&](JsonReader& s) {
    s.read("position", c.scaling.position);
    s.check("position", c.scaling.position > 0.0, "must be > 0");
    s.read("velocity", c.scaling.velocity);
    s.check("velocity", c.scaling.velocity > 0.0, "must be > 0");
    s.read("angle", c.scaling.angle);
    s.check("angle", c.scaling.angle > 0.0, "must be > 0");
  });
  r.section("clustering", [&](JsonReader& s) {
    s.read("max_clusters", c.clustering.max_clusters);
    s.check("max_clusters", c.clustering.max_clusters >= 1, "must be >= 1");
    s.read("max_iterations", c.clustering.max_iterations);
    s.check("max_iterations", c.clustering.max_iterations >= 1, "must be >= 1");
  });
}

Json illumination_json(const IlluminationModel& m) {
  Json material;
  material["ambient"] = rgb_json(m.material.ambient);
  material["diffuse"] = rgb_json(m.material.diffuse);
  material["specular"] = rgb_json(m.material.specular);
  material["shininess"] = m.material.shininess;
  Json light;
  light["ambient"] = rgb_json(m.light.ambient);
  light["diffuse"] = rgb_json(m.light.diffuse);
  light["specular"] = rgb_json(m.light.specular);
  Json window;
  window["too_dark"] = m.window.too_dark;
  window["too_bright"] = m.window.too_bright;
  Json j;
  j["material"] = material;
  j["light"] = light;
  j["window"] = window;
  return j;
}

namespace {

void check_unit(JsonReader& r, const char* key, const Eigen::Array3d& rgb) {
  r.check(key, (rgb >= 0.0).all() && (rgb <= 1.0).all(),
          "components must lie in [0, 1]");
}

}  // namespace

void read_illumination(JsonReader& r, IlluminationModel& m) {
  r.section("material", [&](JsonReader& s) {
    s.read("ambient", m.material.ambient);
    check_unit(s, "ambient", m.material.ambient);
    s.read("diffuse", m.material.diffuse);
    check_unit(s, "diffuse", m.material.diffuse);
    s.read("specular", m.material.specular);
    check_unit(s, "specular", m.material.specular);
    s.read("shininess", m.material.shininess);
    s.check("shininess", m.material.shininess > 0.0, "must be > 0");
  });
  r.section("light", [&](JsonReader& s) {
    s.read("ambient", m.light.ambient);
    check_unit(s, "ambient", m.light.ambient);
    s.read("diffuse", m.light.diffuse);
    check_unit(s, "diffuse", m.light.diffuse);
    s.read("specular", m.light.specular);
    check_unit(s, "specular", m.light.specular);
  });
  r.section("window", [&](JsonReader& s) {
    s.read("too_dark", m.window.too_dark);
    s.check("too_dark", m.window.too_dark >= 0.0 && m.window.too_dark <= 1.0,
            "must lie in [0, 1]");
    s.read("too_bright", m.window.too_bright);
    s.check("too_bright",
            m.window.too_bright >= m.window.too_dark && m.window.too_bright <= 1.0,
            "must lie in [too_dark, 1]");
  });
}

Json curriculum_json(const CurriculumConfig& c) {
  Json j;
  j["initial"] = c.initial;
  j["min"] = c.min;
  j["max"] = c.max;
  j["increment"] = c.increment;
  j["raise_above_pct"] = c.raise_above_pct;
  j["lower_below_pct"] = c.lower_below_pct;
  j["sustain_steps"] = c.sustain_steps;
  j["episode_window"] = c.episode_window;
  return j;
}

void read_curriculum(JsonReader& r, CurriculumConfig& c) {
  r.read("min", c.min);
  r.check("min", c.min >= 0.0, "must be >= 0");
  r.read("max", c.max);
  r.check("max", c.max >= c.min, "must be >= min");
  r.read("initial", c.initial);
  r.check("initial", c.initial >= c.min && c.initial <= c.max,
          "must lie in [min, max]");
  r.read("increment", c.increment);
  r.check("increment", c.increment >= 0.0, "must be >= 0");
  r.read("raise_above_pct", c.raise_above_pct);
  r.read("lower_below_pct", c.lower_below_pct);
  r.check("lower_below_pct", c.lower_below_pct <= c.raise_above_pct,
          "must not exceed raise_above_pct");
  r.read("sustain_steps", c.sustain_steps);
  r.check("sustain_steps", c.sustain_steps >= 1, "must be >= 1");
  r.read("episode_window", c.episode_window);
  r.check("episode_window", c.episode_window >= 1, "must be >= 1");
}

Json train_json(const TrainConfig& c) {
  Json j;
  j["total_timesteps"] = c.total_timesteps;
  j["rollout_steps"] = c.rollout_steps;
  j["num_envs"] = c.num_envs;
  j["eval_interval"] = c.eval_interval;
  j["eval_episodes"] = c.eval_episodes;
  j["checkpoint_interval"] = c.checkpoint_interval;
  j["workers"] = c.workers;
  j["seed"] = c.seed;
  Json net;
  net["hidden"] = c.network.hidden;
  j["network"] = net;
  Json init;
  init["hidden_gain"] = c.init.hidden_gain;
  init["actor_output_gain"] = c.init.actor_output_gain;
  init["critic_output_gain"] = c.init.critic_output_gain;
  init["initial_log_std"] = c.init.initial_log_std;
  j["init"] = init;
  Json ppo;
  ppo["gamma"] = c.ppo.gamma;
  ppo["gae_lambda"] = c.ppo.gae_lambda;
  ppo["clip_ratio"] = c.ppo.clip_ratio;
  ppo["learning_rate"] = c.ppo.learning_rate;
  ppo["entropy_coef"] = c.ppo.entropy_coef;
  ppo["max_grad_norm"] = c.ppo.max_grad_norm;
  ppo["epochs"] = c.ppo.epochs;
  ppo["minibatch_size"] = c.ppo.minibatch_size;
  ppo["normalize_advantages"] = c.ppo.normalize_advantages;
  j["ppo"] = ppo;
  return j;
}

void read_train(JsonReader& r, TrainConfig& c) {
  r.read("total_timesteps", c.total_timesteps);
  r.check("total_timesteps", c.total_timesteps >= 0, "must be >= 0");
  r.read("rollout_steps", c.rollout_steps);
  r.check("rollout_steps", c.rollout_steps >= 1, "must be >= 1");
  r.read("num_envs", c.num_envs);
  r.check("num_envs", c.num_envs >= 1, "must be >= 1");
  r.read("eval_interval", c.eval_interval);
  r.check("eval_interval", c.eval_interval >= 1, "must be >= 1");
  r.read("eval_episodes", c.eval_episodes);
  r.check("eval_episodes", c.eval_episodes >= 1, "must be >= 1");
  r.read("checkpoint_interval", c.checkpoint_interval);
  r.check("checkpoint_interval", c.checkpoint_interval >= 0, "must be >= 0");
  r.read("workers", c.workers);
  r.check("workers", c.workers >= 1, "must be >= 1");
  r.read("seed", c.seed);
  r.section("network", [&](JsonReader& s) {
    s.read("hidden", c.network.hidden);
    bool ok = true;
    for (const int h : c.network.hidden) ok = ok && h >= 1;
    s.check("hidden", ok, "layer sizes must be >= 1");
  });
  r.section("init", [&](JsonReader& s) {
    s.read("hidden_gain", c.init.hidden_gain);
    s.read("actor_output_gain", c.init.actor_output_gain);
    s.read("critic_output_gain", c.init.critic_output_gain);
    s.read("initial_log_std", c.init.initial_log_std);
  });
  r.section("ppo", [&](JsonReader& s) {
    PpoConfig& p = c.ppo;
    s.read("gamma", p.gamma);
    s.check("gamma", p.gamma > 0.0 && p.gamma <= 1.0, "must lie in (0, 1]");
    s.read("gae_lambda", p.gae_lambda);
    s.check("gae_lambda", p.gae_lambda >= 0.0 && p.gae_lambda <= 1.0,
            "must lie in [0, 1]");
    s.read("clip_ratio", p.clip_ratio);
    s.check("clip_ratio", p.clip_ratio > 0.0, "must be > 0");
    s.read("learning_rate", p.learning_rate);
    s.check("learning_rate", p.learning_rate >= 0.0, "must be >= 0");
    s.read("entropy_coef", p.entropy_coef);
    s.check("entropy_coef", p.entropy_coef >= 0.0, "must be >= 0");
    s.read("max_grad_norm", p.max_grad_norm);
    s.read("epochs", p.epochs);
    s.check("epochs", p.epochs >= 1, "must be >= 1");
    s.read("minibatch_size", p.minibatch_size);
    s.check("minibatch_size", p.minibatch_size >= 1, "must be >= 1");
    s.read("normalize_advantages", p.normalize_advantages);
  });
}

Json sun_sync_json(const SunSyncGains& g) {
  Json j;
  j["radius"] = g.radius;
  j["lead_angle"] = g.lead_angle;
  j["elevation_amplitude"] = g.elevation_amplitude;
  j["elevation_period"] = g.elevation_period;
  j["kp"] = g.kp;
  j["kd"] = g.kd;
  j["max_slew"] = g.max_slew;
  return j;
}

void read_sun_sync(JsonReader& r, SunSyncGains& g) {
  r.read("radius", g.radius);
  r.check("radius", g.radius > 0.0, "must be > 0");
  r.read("lead_angle", g.lead_angle);
  r.read("elevation_amplitude", g.elevation_amplitude);
  r.read("elevation_period", g.elevation_period);
  r.check("elevation_period", g.elevation_period > 0.0, "must be > 0");
  r.read("kp", g.kp);
  r.check("kp", g.kp >= 0.0, "must be >= 0");
  r.read("kd", g.kd);
  r.check("kd", g.kd >= 0.0, "must be >= 0");
  r.read("max_slew", g.max_slew);
  r.check("max_slew", g.max_slew > 0.0, "must be > 0");
}

}  // namespace sunlit::detail
