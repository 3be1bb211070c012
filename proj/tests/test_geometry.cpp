#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "sunlit/error.hpp"
#include "sunlit/geometry.hpp"

using namespace sunlit;

TEST_CASE("point counts track the request") {
  CHECK(generate_sphere_points(1, 10.0).size() == 1);
  CHECK(generate_sphere_points(1, 10.0).points[0].isApprox(Vec3(0, 0, 10)));
  CHECK(generate_sphere_points(100, 10.0).size() == 102);
  CHECK(generate_sphere_points(30, 10.0).size() == 30);
  for (int n : {20, 50, 100, 200, 500, 1000, 5000}) {
    const auto pts = generate_sphere_points(n, 10.0);
    CHECK(std::abs(static_cast<double>(pts.size()) - n) <= 0.05 * n);
  }
}

TEST_CASE("points lie on the sphere and scale with the radius") {
  const auto a = generate_sphere_points(100, 1.0);
  const auto b = generate_sphere_points(100, 7.5);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.points[i].norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((b.points[i] - 7.5 * a.points[i]).norm() < 1e-12);
  }
  CHECK(a.inspected_count() == 0);
  CHECK(b.chief_radius == 7.5);
}

TEST_CASE("points are spread evenly over the sphere") {
  // Octant counts in a generically rotated frame avoid ties on the axes.
  const auto pts = generate_sphere_points(1000, 1.0);
  const Eigen::Matrix3d rot =
      (Eigen::AngleAxisd(0.37, Vec3::UnitX()) * Eigen::AngleAxisd(1.1, Vec3::UnitY()) *
       Eigen::AngleAxisd(0.52, Vec3::UnitZ()))
          .toRotationMatrix();
  int octant[8] = {0};
  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts.points) {
    const Vec3 q = rot * p;
    ++octant[(q.x() > 0) + 2 * (q.y() > 0) + 4 * (q.z() > 0)];
    mean += p;
  }
  const double expected = static_cast<double>(pts.size()) / 8.0;
  for (int k : octant) CHECK(std::abs(k - expected) < 0.1 * expected);
  CHECK((mean / static_cast<double>(pts.size())).norm() < 0.01);

  // Nearest-neighbour spacing is roughly uniform.
  double lo = 1e9, hi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double best = 1e9;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i != j) best = std::min(best, (pts.points[i] - pts.points[j]).norm());
    }
    lo = std::min(lo, best);
    hi = std::max(hi, best);
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("perception threshold reduces to r^2 / d") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(10.0 + 1e-6, 1000.0);
  double worst = 0.0;
  for (int i = 0; i < 10'000; ++i) {
    const double d = dist(rng);
    const double exact = 100.0 / d;
    worst = std::max(worst, std::abs(perception_threshold(d, 10.0) - exact) / exact);
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("visible points are exactly those facing the agent") {
  // A surface point x faces an outside agent p when (p - x) . x >= 0.
  const auto pts = generate_sphere_points(100, 10.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> radius(10.5, 800.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 p = Vec3(g(rng), g(rng), g(rng)).normalized() * radius(rng);
    const auto vis = visible_points(p, pts);
    std::vector<std::size_t> expect;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (p.dot(pts.points[k]) >= 100.0) expect.push_back(k);
    }
    CHECK(vis == expect);
  }
}

TEST_CASE("visibility edge cases") {
  const auto pts = generate_sphere_points(100, 10.0);
  // The sub-agent point is always visible; the antipode never is.
  const Vec3 agent(0, 0, 50);
  CHECK(is_visible(agent, Vec3(0, 0, 10), 10.0));
  CHECK_FALSE(is_visible(agent, Vec3(0, 0, -10), 10.0));
  // From far away the view approaches the open upper hemisphere.
  const auto far = visible_points(Vec3(0, 0, 1e6), pts);
  for (const auto i : far) CHECK(pts.points[i].z() > 0.0);
  std::size_t upper = 0;
  for (const Vec3& x : pts.points) upper += x.z() > 0.01;
  CHECK(far.size() == upper);
  CHECK_THROWS_AS(visible_points(Vec3(0, 0, 10), pts), Error);
  CHECK_THROWS_AS(generate_sphere_points(0, 10.0), Error);
  CHECK_THROWS_AS(generate_sphere_points(10, -1.0), Error);
}

TEST_CASE("largest cluster direction") {
  auto pts = generate_sphere_points(200, 10.0);
  // Leave uninspected a big patch around +x and a small one around -z.
  std::size_t big = 0, small = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec3 u = pts.points[i].normalized();
    const bool near_x = u.dot(Vec3::UnitX()) > 0.8;
    const bool near_mz = u.dot(-Vec3::UnitZ()) > 0.9;
    pts.inspected[i] = !(near_x || near_mz);
    big += near_x;
    small += near_mz;
  }
  REQUIRE(big > small);
  const ClusterResult r = cluster_uninspected(pts, 42, {2, 50});
  CHECK(r.direction.norm() == doctest::Approx(1.0));
  CHECK(r.direction.dot(Vec3::UnitX()) > 0.95);
  CHECK(cluster_uninspected(pts, 42, {2, 50}).direction == r.direction);
  // With more clusters than patches the patches split, but the winner still
  // lies inside one of them.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Vec3 d = cluster_uninspected(pts, seed).direction;
    CHECK((d.dot(Vec3::UnitX()) > 0.75 || d.dot(-Vec3::UnitZ()) > 0.85));
  }
}

TEST_CASE("cluster fallbacks") {
  auto pts = generate_sphere_points(50, 10.0);
  for (std::size_t i = 0; i < pts.size(); ++i) pts.inspected[i] = true;
  CHECK(cluster_uninspected(pts, 1).direction.isZero());
  pts.inspected[7] = false;
  CHECK(cluster_uninspected(pts, 1).direction.isApprox(pts.points[7].normalized()));
  // The north pole alone.
  for (std::size_t i = 0; i < pts.size(); ++i) pts.inspected[i] = true;
  pts.inspected[0] = false;
  const auto r = cluster_uninspected(pts, 3);
  CHECK(r.direction.isApprox(Vec3(0, 0, 1)));
  // Everything uninspected: a unit direction still comes back.
  pts.reset_flags();
  CHECK(cluster_uninspected(pts, 3).direction.norm() == doctest::Approx(1.0));
}
