#pragma once

#include <ostream>
#include <string>

#include "sunlit/environment.hpp"

namespace sunlit {

/// One line of the per-step trajectory log.
struct TrajectoryRecord {
  int step = 0;
  double t = 0.0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  ActionVec force = ActionVec::Zero();
  double theta_s = 0.0;
  std::size_t new_points = 0;
  std::size_t cum_points = 0;
  RewardBreakdown reward;
  bool done = false;
  Termination reason = Termination::Running;
};

/// Builds the record for a step that has just been applied to `env`. The
/// force is the thrust actually applied, i.e. after clamping.
TrajectoryRecord make_record(const InspectionEnv& env, const ActionVec& action,
                             const StepResult& result);

/// JSON object with keys in the fixed column order
/// step, t, x, y, z, vx, vy, vz, fx, fy, fz, theta_s, new_points, cum_points,
/// r_points, r_dv, r_crash, total_reward, done, reason. No trailing newline.
std::string to_json_line(const TrajectoryRecord& record);

TrajectoryRecord parse_json_line(const std::string& line);

/// Writes one JSON object per line.
class TrajectoryWriter {
 public:
  explicit TrajectoryWriter(std::ostream& out) : out_(out) {}
  void write(const TrajectoryRecord& record);

 private:
  std::ostream& out_;
};

}  // namespace sunlit
