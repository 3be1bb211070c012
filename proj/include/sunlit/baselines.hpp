#pragma once

#include <string>

#include "sunlit/evaluation.hpp"

namespace sunlit {

/// Gains for the sun-synchronous station-keeping controller.
struct SunSyncGains {
  double radius = 60.0;               // m, station distance from the chief
  double lead_angle = 0.0;            // rad, station azimuth ahead of the Sun
  double elevation_amplitude = 0.9;   // rad
  double elevation_period = 1750.0;   // s, incommensurate with the Sun period
  double kp = 4e-4;                   // 1/s^2
  double kd = 0.04;                   // 1/s
  double max_slew = 0.35;             // rad, cap on the carrot angle
};

enum class BaselineId { ZeroThrust, Random, SunSync };

const char* to_string(BaselineId id);
BaselineId baseline_from_string(const std::string& name);

struct BaselineSpec {
  BaselineId id = BaselineId::SunSync;
  SunSyncGains sun_sync;
  std::uint64_t seed = 0;  // random controller stream
};

class ZeroThrustController : public Controller {
 public:
  ActionVec act(const Observation&, const InspectionEnv&) override {
    return ActionVec::Zero();
  }
};

/// Uniform thrust in the action box, reseeded from the episode seed.
class RandomController : public Controller {
 public:
  explicit RandomController(std::uint64_t seed) : seed_(seed) {}
  void reset(std::uint64_t episode_seed) override;
  ActionVec act(const Observation& obs, const InspectionEnv& env) override;

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

/// Holds a station on the sunlit side of the chief that follows the Sun's
/// rotation while sweeping in elevation, tracked by a PD law with feedforward
/// cancellation of the CW accelerations. Large repositioning moves are taken
/// along a great circle (carrot point at most max_slew ahead) so the deputy
/// never cuts through the keep-out sphere.
class SunSyncController : public Controller {
 public:
  explicit SunSyncController(SunSyncGains gains) : gains_(gains) {}
  ActionVec act(const Observation& obs, const InspectionEnv& env) override;

  /// Unit direction of the station at the given sun angle and elapsed time.
  Vec3 station_direction(double sun_angle, double elapsed) const;

 private:
  SunSyncGains gains_;
};

ControllerFactory make_baseline(const BaselineSpec& spec);

}  // namespace sunlit
