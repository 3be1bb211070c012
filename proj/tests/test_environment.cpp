#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "sunlit/error.hpp"
#include "sunlit/environment.hpp"
#include "sunlit/trajectory_log.hpp"

using namespace sunlit;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Small thrusts with an over-limit command every tenth step, which the
// environment clamps.
std::vector<ActionVec> scripted_actions(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  std::vector<ActionVec> out;
  for (int i = 0; i < n; ++i) {
    ActionVec a(u(rng), u(rng), u(rng));
    if (i % 10 == 3) a[i % 3] = i % 20 == 3 ? 1.7 : -2.0;
    out.push_back(a);
  }
  return out;
}

std::string replay(const EpisodeConfig& cfg, std::uint64_t seed,
                   const std::vector<ActionVec>& actions) {
  InspectionEnv env(cfg);
  env.reset(seed);
  std::ostringstream log;
  TrajectoryWriter writer(log);
  for (const auto& a : actions) {
    if (env.done()) break;
    const StepResult r = env.step(a);
    writer.write(make_record(env, a, r));
  }
  return log.str();
}

}  // namespace

TEST_CASE("reset samples the spawn shell") {
  InspectionEnv env(EpisodeConfig{});
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    env.reset(seed);
    const double r = env.deputy().position.norm();
    const double v = env.deputy().velocity.norm();
    CHECK(r >= 50.0);
    CHECK(r <= 100.0);
    CHECK(v >= 0.0);
    CHECK(v <= 0.3);
    CHECK(env.sun().theta >= 0.0);
    CHECK(env.sun().theta < kTwoPi);
    CHECK(env.points().inspected_count() == 0);
  }
  InspectionEnv other(EpisodeConfig{});
  CHECK(env.reset(77).raw() == other.reset(77).raw());
}

TEST_CASE("spawn azimuth is uniform") {
  InspectionEnv env(EpisodeConfig{});
  int bins[16] = {0};
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    env.reset(mix_seed(123, static_cast<std::uint64_t>(i)));
    const Vec3 p = env.deputy().position;
    double az = std::atan2(p.y(), p.x());
    if (az < 0.0) az += kTwoPi;
    ++bins[std::min(15, static_cast<int>(az / kTwoPi * 16.0))];
  }
  double chi2 = 0.0;
  const double expected = n / 16.0;
  for (int b : bins) chi2 += (b - expected) * (b - expected) / expected;
  // 99th percentile of chi-square with 15 degrees of freedom.
  CHECK(chi2 < 30.578);
}

TEST_CASE("reward terms") {
  const CwParams p;
  const Vec3 safe(60, 0, 0);
  auto r = compute_reward(7, ActionVec::Zero(), safe, 0.1, p, 15.0);
  CHECK(r.total == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(r.delta_v == 0.0);
  CHECK(r.crash == 0.0);

  CHECK(delta_v_of(ActionVec(1, 1, 1), p) == 2.5);
  r = compute_reward(0, ActionVec(1, 1, 1), safe, 0.1, p, 15.0);
  CHECK(r.delta_v == doctest::Approx(-0.25).epsilon(1e-15));

  r = compute_reward(0, ActionVec::Zero(), Vec3(14, 0, 0), 0.1, p, 15.0);
  CHECK(r.total == -1.0);
  CHECK(compute_reward(0, ActionVec::Zero(), Vec3(15, 0, 0), 0.1, p, 15.0).crash == 0.0);
}

TEST_CASE("logged rewards match hand arithmetic on a scripted trajectory") {
  EpisodeConfig cfg;
  const auto actions = scripted_actions(50, 5);
  const std::string log = replay(cfg, 31, actions);
  std::istringstream in(log);
  std::string line;
  int k = 0;
  std::size_t cum = 0;
  int clamped = 0;
  while (std::getline(in, line)) {
    const TrajectoryRecord rec = parse_json_line(line);
    const ActionVec f = actions[static_cast<std::size_t>(k)].cwiseMax(-1.0).cwiseMin(1.0);
    clamped += f != actions[static_cast<std::size_t>(k)];
    CHECK(rec.step == k + 1);
    CHECK(rec.force == f);
    const double dv = (std::abs(f.x()) + std::abs(f.y()) + std::abs(f.z())) / 12.0 * 10.0;
    const double r_points = 0.1 * static_cast<double>(rec.new_points);
    const double r_dv = -kEvaluationDvWeight * dv;
    const double r_crash = rec.position.norm() < 15.0 ? -1.0 : 0.0;
    cum += rec.new_points;
    CHECK(rec.cum_points == cum);
    CHECK(rec.reward.points == r_points);
    CHECK(rec.reward.delta_v == r_dv);
    CHECK(rec.reward.crash == r_crash);
    CHECK(rec.reward.total == r_points + r_dv + r_crash);
    ++k;
  }
  CHECK(k == 50);
  CHECK(clamped == 5);
  CHECK(cum > 0);
}

TEST_CASE("termination reasons") {
  EpisodeConfig cfg;
  InspectionEnv env(cfg);
  env.reset(1);
  auto snap = env.snapshot();
  snap.deputy = {Vec3(12, 0, 0), Vec3::Zero()};
  env.restore(snap);
  StepResult r = env.step(ActionVec::Zero());
  CHECK(r.done);
  CHECK(r.reason == Termination::Crash);
  CHECK(r.reward.crash == -1.0);
  CHECK_THROWS_AS(env.step(ActionVec::Zero()), Error);

  env.reset(1);
  snap = env.snapshot();
  snap.deputy = {Vec3(900, 0, 0), Vec3::Zero()};
  env.restore(snap);
  CHECK(env.step(ActionVec::Zero()).reason == Termination::Escape);

  // A single point at the pole, seen from straight above. The Sun lies in the
  // orbital plane, so the point sits on the terminator and counts as lit.
  EpisodeConfig one = cfg;
  one.point_count = 1;
  InspectionEnv single(one);
  single.reset(2);
  auto s1 = single.snapshot();
  s1.deputy = {Vec3(0, 0, 50), Vec3::Zero()};
  single.restore(s1);
  r = single.step(ActionVec::Zero());
  CHECK(r.reason == Termination::Complete);
  CHECK(r.reward.points == doctest::Approx(0.1));
  CHECK(r.observation.cluster_direction.isZero());

  EpisodeConfig shortcfg = cfg;
  shortcfg.max_steps = 3;
  InspectionEnv brief(shortcfg);
  brief.reset(4);
  auto s2 = brief.snapshot();
  s2.deputy = {Vec3(0, 60, 0), Vec3::Zero()};
  brief.restore(s2);
  CHECK_FALSE(brief.step(ActionVec::Zero()).done);
  CHECK_FALSE(brief.step(ActionVec::Zero()).done);
  CHECK(brief.step(ActionVec::Zero()).reason == Termination::Horizon);

  InspectionEnv fresh(cfg);
  CHECK_THROWS_AS(fresh.step(ActionVec::Zero()), Error);
}

TEST_CASE("curriculum weight updates") {
  const CurriculumConfig c;
  CHECK(update_dv_weight(0.001, 95.0, 1500, c) == doctest::Approx(0.00105));
  CHECK(update_dv_weight(0.001, 95.0, 1499, c) == 0.001);
  CHECK(update_dv_weight(0.001, 70.0, 1500, c) == 0.001);
  CHECK(update_dv_weight(0.1, 99.0, 1500, c) == 0.1);
  CHECK(update_dv_weight(0.05, 85.0, 1500, c) == 0.05);
  CHECK(update_dv_weight(0.05, 70.0, 1500, c) == doctest::Approx(0.04995));

  DvCurriculum cur(c);
  CHECK(cur.observe_step() == 0.001);
  for (int i = 0; i < 10; ++i) cur.record_episode(95.0);
  for (int i = 0; i < 1499; ++i) CHECK(cur.observe_step() == 0.001);
  CHECK(cur.observe_step() == doctest::Approx(0.00105));
  // The window resets after each change.
  for (int i = 0; i < 1499; ++i) cur.observe_step();
  CHECK(cur.observe_step() == doctest::Approx(0.0011));

  // Leaving the band restarts the count.
  DvCurriculum flip(c);
  for (int i = 0; i < 10; ++i) flip.record_episode(95.0);
  for (int i = 0; i < 1000; ++i) flip.observe_step();
  for (int i = 0; i < 10; ++i) flip.record_episode(85.0);
  flip.observe_step();
  for (int i = 0; i < 10; ++i) flip.record_episode(95.0);
  for (int i = 0; i < 1499; ++i) flip.observe_step();
  CHECK(flip.weight() == 0.001);
  CHECK(flip.observe_step() == doctest::Approx(0.00105));

  // Rolling mean over the last ten episodes only.
  DvCurriculum roll(c);
  for (int i = 0; i < 10; ++i) roll.record_episode(0.0);
  for (int i = 0; i < 10; ++i) roll.record_episode(100.0);
  CHECK(roll.rolling_mean() == 100.0);
}

TEST_CASE("replays are byte-identical") {
  EpisodeConfig cfg;
  const auto actions = scripted_actions(300, 8);
  const std::string a = replay(cfg, 99, actions);
  const std::string b = replay(cfg, 99, actions);
  CHECK(!a.empty());
  CHECK(a == b);
  CHECK(a != replay(cfg, 100, actions));
  cfg.illumination.mode = IlluminationMode::Spectral;
  CHECK(replay(cfg, 99, actions) == replay(cfg, 99, actions));
}

TEST_CASE("observation contract") {
  EpisodeConfig cfg;
  InspectionEnv env(cfg);
  const Observation first = env.reset(3);
  CHECK(first.points_inspected == 0.0);
  CHECK(first.cluster_direction.norm() == doctest::Approx(1.0));

  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> radius(15.0, 800.0);
  std::uniform_real_distribution<double> angle(-20.0, 20.0);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 1000; ++i) {
    auto s = env.snapshot();
    s.deputy.position = Vec3(g(rng), g(rng), g(rng)).normalized() * radius(rng);
    s.deputy.velocity = Vec3(g(rng), g(rng), g(rng));
    s.sun.theta = wrap_two_pi(angle(rng));
    for (std::size_t k = 0; k < s.inspected.size(); ++k) s.inspected[k] = coin(rng);
    env.restore(s);
    const Observation obs = env.build_observation();
    for (double v : obs.raw()) CHECK(std::isfinite(v));
    CHECK(obs.sun_angle >= 0.0);
    CHECK(obs.sun_angle < kTwoPi);
    const double n = obs.cluster_direction.norm();
    CHECK((n == doctest::Approx(1.0) || n == 0.0));
    const auto norm = env.normalized_observation();
    CHECK(norm[7] == doctest::Approx(obs.points_inspected / env.points().size()));
    CHECK(norm[0] == doctest::Approx(obs.position.x() / 100.0));
  }

  auto all = env.snapshot();
  all.inspected.assign(all.inspected.size(), true);
  env.restore(all);
  const Observation done = env.build_observation();
  CHECK(done.points_inspected == static_cast<double>(env.points().size()));
  CHECK(done.cluster_direction.isZero());
}

TEST_CASE("invalid episode settings are rejected") {
  EpisodeConfig cfg;
  cfg.crash_radius = 60.0;
  CHECK_THROWS_AS(InspectionEnv{cfg}, Error);
  cfg = EpisodeConfig{};
  cfg.max_steps = 0;
  CHECK_THROWS_AS(InspectionEnv{cfg}, Error);
  cfg = EpisodeConfig{};
  cfg.escape_radius = 90.0;
  CHECK_THROWS_AS(InspectionEnv{cfg}, Error);
}
