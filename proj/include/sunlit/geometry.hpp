#pragma once

#include <cstdint>
#include <vector>

#include "sunlit/dynamics.hpp"

namespace sunlit {

/// Points distributed over the chief's surface, each with an inspected flag.
struct InspectionPointSet {
  std::vector<Vec3> points;
  std::vector<bool> inspected;
  double chief_radius = 10.0;

  std::size_t size() const { return points.size(); }
  std::size_t inspected_count() const;
  void reset_flags();
};

struct ClusterResult {
  Vec3 direction = Vec3::Zero();  // unit, or zero when nothing is left
  std::vector<std::size_t> cluster_sizes;
};

/// Near-equal-area ring distribution on a sphere of the given radius.
///
/// Latitude rings run pole to pole inclusive, with the ring count and the
/// per-ring point count chosen so that each point covers roughly
/// 4*pi / requested_count of the unit sphere. Points are generated on the unit
/// sphere and scaled afterwards, so the count does not depend on the radius.
/// The returned count is close to, but not always equal to, the request.
InspectionPointSet generate_sphere_points(int requested_count, double radius);

/// Right-hand side of the perception-cone test, r_c * [1 - (d - r_c) / d].
double perception_threshold(double agent_distance, double chief_radius);

/// True when point is inside the perception cone of an agent at agent_pos.
/// Boundary points count as visible.
bool is_visible(const Vec3& agent_pos, const Vec3& point, double chief_radius);

/// Indices of every point inside the perception cone. The agent must be
/// strictly outside the chief.
std::vector<std::size_t> visible_points(const Vec3& agent_pos,
                                        const InspectionPointSet& pts);

struct KMeansOptions {
  std::size_t max_clusters = 10;
  int max_iterations = 50;
};

/// k-means over the uninspected points; returns the direction of the centroid
/// of the most populous cluster (lowest index wins ties). Seeding uses
/// k-means++ driven by rng_seed, so the result is a pure function of its
/// inputs.
ClusterResult cluster_uninspected(const InspectionPointSet& pts,
                                  std::uint64_t rng_seed,
                                  const KMeansOptions& options = {});

}  // namespace sunlit
