#include <doctest.h>

#include <string>

#include <json.hpp>

#include "sunlit/config.hpp"
#include "sunlit/error.hpp"
#include "sunlit/reference.hpp"

using namespace sunlit;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_run_config(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("presets") {
  for (const auto& name : preset_names()) {
    const RunConfig c = preset_config(name);
    CHECK_NOTHROW(c.validate());
    // dump -> parse is lossless.
    CHECK(dump_run_config(parse_run_config(dump_run_config(c))) == dump_run_config(c));
  }
  const RunConfig smoke = preset_config("smoke");
  CHECK(smoke.episode.point_count == 30);
  CHECK(smoke.train.total_timesteps == 200'000);
  CHECK(smoke.seeds.size() == 3);
  CHECK(smoke.mode == IlluminationMode::Binary);

  const RunConfig full = preset_config("full_spectral");
  CHECK(full.mode == IlluminationMode::Spectral);
  CHECK(full.seeds.size() == 10);
  CHECK(full.train.total_timesteps == 10'000'000);
  CHECK(full.episode.point_count == 100);
  CHECK(full.episode_config().illumination.mode == IlluminationMode::Spectral);
  CHECK(full.eval.trials == 100);
  CHECK_THROWS_AS(preset_config("huge"), Error);
}

TEST_CASE("partial documents keep defaults") {
  const RunConfig c = parse_run_config(R"({"seeds": [4, 5], "train": {"ppo": {"clip_ratio": 0.1}}})");
  CHECK(c.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(c.train.ppo.clip_ratio == 0.1);
  CHECK(c.train.ppo.gamma == 0.99);
  CHECK(c.episode.max_steps == 1224);
  const RunConfig sci = parse_run_config(R"({"train": {"total_timesteps": 1e7}})");
  CHECK(sci.train.total_timesteps == 10'000'000);
}

TEST_CASE("errors name the offending key") {
  CHECK(config_error(R"({"episode": {"pointcount": 5}})").find("episode.pointcount") !=
        std::string::npos);
  CHECK(config_error(R"({"train": {"ppo": {"clip_ratio": -0.1}}})").find("train.ppo.clip_ratio") !=
        std::string::npos);
  CHECK(config_error(R"({"mode": "rgb"})").find("mode") != std::string::npos);
  CHECK(config_error(R"({"seeds": []})").find("seeds") != std::string::npos);
  CHECK(config_error(R"({"episode": {"max_steps": "long"}})").find("episode.max_steps") !=
        std::string::npos);
  CHECK(config_error(R"({"train": {"total_timesteps": 1.5}})").find("train.total_timesteps") !=
        std::string::npos);
  CHECK(!config_error("[1, 2]").empty());
  CHECK(!config_error("{").empty());
}

TEST_CASE("reference comparison") {
  const ReferenceTarget ref = reference_target(IlluminationMode::Binary);
  CHECK(ref.inspected_pct == 99.83);
  CHECK(reference_target(IlluminationMode::Spectral).delta_v == 16.25);
  EvalReport report;
  report.inspected_pct = {98.5, {98.0, 99.0}};
  report.delta_v = {22.0, {20.0, 24.0}};
  report.episode_length = {3000.0, {2900.0, 3100.0}};
  const Comparison near = compare_to_reference(report, IlluminationMode::Binary);
  CHECK(near.within_tolerance());
  // 18.08 * 1.3 = 23.5
  report.delta_v.iqm = 23.6;
  CHECK_FALSE(compare_to_reference(report, IlluminationMode::Binary).within_tolerance());
  report.delta_v.iqm = 22.0;
  report.inspected_pct.iqm = 97.7;
  CHECK_FALSE(compare_to_reference(report, IlluminationMode::Binary).within_tolerance());
  const std::string table = comparison_table(near);
  CHECK(table.find("99.83") != std::string::npos);
  CHECK(table.find('|') != std::string::npos);
}
