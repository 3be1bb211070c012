#pragma once

// Internal JSON helpers shared by the config and checkpoint readers.

#include <functional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "sunlit/baselines.hpp"
#include "sunlit/environment.hpp"
#include "sunlit/error.hpp"
#include "sunlit/train.hpp"

namespace sunlit::detail {

using Json = nlohmann::ordered_json;

/// Strict object reader: every key must be consumed, and every error names the
/// full dotted key path.
class JsonReader {
 public:
  JsonReader(const Json& object, std::string path, ErrorKind kind);

  bool has(const char* key) const;
  void read(const char* key, double& out);
  void read(const char* key, int& out);
  void read(const char* key, long& out);
  void read(const char* key, std::uint64_t& out);
  void read(const char* key, bool& out);
  void read(const char* key, std::string& out);
  void read(const char* key, std::vector<int>& out);
  void read(const char* key, std::vector<double>& out);
  void read(const char* key, std::vector<std::uint64_t>& out);
  void read(const char* key, Eigen::Array3d& out);
  void read(const char* key, Interval& out);
  /// Reads a nested object if present; the callback sees a reader for it.
  void section(const char* key, const std::function<void(JsonReader&)>& body);
  /// Like section() but the key must exist.
  void required_section(const char* key,
                        const std::function<void(JsonReader&)>& body);
  const Json& raw(const char* key);

  /// Range check reported against `key`.
  void check(const char* key, bool ok, const std::string& requirement) const;
  void require(const char* key) const;
  /// Throws if any key was not consumed.
  void finish() const;

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
  std::string key_path(const std::string& key) const;

 private:
  const Json& get(const char* key);

  const Json& object_;
  std::string path_;
  ErrorKind kind_;
  std::set<std::string> seen_;
};

Json rgb_json(const Eigen::Array3d& rgb);
Json vector_json(const Eigen::VectorXd& v);
Eigen::VectorXd read_vector(JsonReader& r, const char* key, Eigen::Index size);

Json dynamics_json(const CwParams& p);
void read_dynamics(JsonReader& r, CwParams& p);
Json episode_json(const EpisodeConfig& c);
void read_episode(JsonReader& r, EpisodeConfig& c);
Json illumination_json(const IlluminationModel& m);
void read_illumination(JsonReader& r, IlluminationModel& m);
Json train_json(const TrainConfig& c);
void read_train(JsonReader& r, TrainConfig& c);
Json curriculum_json(const CurriculumConfig& c);
void read_curriculum(JsonReader& r, CurriculumConfig& c);
Json sun_sync_json(const SunSyncGains& g);
void read_sun_sync(JsonReader& r, SunSyncGains& g);

}  // namespace sunlit::detail
