#include "sunlit/trajectory_log.hpp"

#include <json.hpp>

#include "sunlit/error.hpp"

namespace sunlit {

namespace {

Termination termination_from_string(const std::string& name) {
  for (const auto reason :
       {Termination::Running, Termination::Horizon, Termination::Crash,
        Termination::Escape, Termination::Complete}) {
    if (name == to_string(reason)) return reason;
  }
  throw Error(ErrorKind::Io, "unknown termination reason '" + name + "'");
}

}  // namespace

TrajectoryRecord make_record(const InspectionEnv& env, const ActionVec& action,
                             const StepResult& result) {
  TrajectoryRecord r;
  r.step = env.steps();
  r.t = env.elapsed();
  r.position = env.deputy().position;
  r.velocity = env.deputy().velocity;
  r.force = clamp_control(action, env.dynamics().max_thrust);
  r.theta_s = env.sun().theta;
  r.new_points = result.newly_inspected.size();
  r.cum_points = env.points().inspected_count();
  r.reward = result.reward;
  r.done = result.done;
  r.reason = result.reason;
  return r;
}

std::string to_json_line(const TrajectoryRecord& r) {
  nlohmann::ordered_json j;
  j["step"] = r.step;
  j["t"] = r.t;
  j["x"] = r.position.x();
  j["y"] = r.position.y();
  j["z"] = r.position.z();
  j["vx"] = r.velocity.x();
  j["vy"] = r.velocity.y();
  j["vz"] = r.velocity.z();
  j["fx"] = r.force.x();
  j["fy"] = r.force.y();
  j["fz"] = r.force.z();
  j["theta_s"] = r.theta_s;
  j["new_points"] = r.new_points;
  j["cum_points"] = r.cum_points;
  j["r_points"] = r.reward.points;
  j["r_dv"] = r.reward.delta_v;
  j["r_crash"] = r.reward.crash;
  j["total_reward"] = r.reward.total;
  j["done"] = r.done;
  j["reason"] = to_string(r.reason);
  return j.dump();
}

TrajectoryRecord parse_json_line(const std::string& line) {
  try {
    const auto j = nlohmann::json::parse(line);
    TrajectoryRecord r;
    r.step = j.at("step").get<int>();
    r.t = j.at("t").get<double>();
    r.position = Vec3(j.at("x"), j.at("y"), j.at("z"));
    r.velocity = Vec3(j.at("vx"), j.at("vy"), j.at("vz"));
    r.force = ActionVec(j.at("fx"), j.at("fy"), j.at("fz"));
    r.theta_s = j.at("theta_s").get<double>();
    r.new_points = j.at("new_points").get<std::size_t>();
    r.cum_points = j.at("cum_points").get<std::size_t>();
    r.reward.points = j.at("r_points").get<double>();
    r.reward.delta_v = j.at("r_dv").get<double>();
    r.reward.crash = j.at("r_crash").get<double>();
    r.reward.total = j.at("total_reward").get<double>();
    r.done = j.at("done").get<bool>();
    r.reason = termination_from_string(j.at("reason").get<std::string>());
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("bad trajectory line: ") + e.what());
  }
}

void TrajectoryWriter::write(const TrajectoryRecord& record) {
  out_ << to_json_line(record) << '\n';
}

}  // namespace sunlit
