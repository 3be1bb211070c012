#include "sunlit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "sunlit/error.hpp"

namespace sunlit {

std::size_t InspectionPointSet::inspected_count() const {
  return static_cast<std::size_t>(
      std::count(inspected.begin(), inspected.end(), true));
}

void InspectionPointSet::reset_flags() {
  inspected.assign(points.size(), false);
}

InspectionPointSet generate_sphere_points(int requested_count, double radius) {
  if (requested_count < 1) {
    throw Error(ErrorKind::Geometry, "requested point count must be >= 1");
  }
  if (!(std::isfinite(radius) && radius > 0.0)) {
    throw Error(ErrorKind::Geometry, "chief radius must be finite and > 0");
  }
  constexpr double kPi = std::numbers::pi;

  const double area = 4.0 * kPi / requested_count;
  const double spacing = std::sqrt(area);
  const int rings = std::max(1, static_cast<int>(std::lround(kPi / spacing)));
  // Rings include both poles, so there are rings - 1 latitude gaps.
  const double ring_step = rings > 1 ? kPi / (rings - 1) : kPi;
  const double arc_step = area / ring_step;

  InspectionPointSet set;
  set.chief_radius = radius;
  for (int m = 0; m < rings; ++m) {
    const double polar = rings > 1 ? m * ring_step : 0.0;
    const double sin_polar = std::sin(polar);
    const int per_ring = std::max(
        1, static_cast<int>(std::lround(2.0 * kPi * sin_polar / arc_step)));
    for (int k = 0; k < per_ring; ++k) {
      const double azimuth = 2.0 * kPi * k / per_ring;
      const Vec3 unit(sin_polar * std::cos(azimuth),
                      sin_polar * std::sin(azimuth), std::cos(polar));
      set.points.push_back(radius * unit);
    }
  }
  set.reset_flags();
  return set;
}

double perception_threshold(double agent_distance, double chief_radius) {
  return chief_radius *
         (1.0 - (agent_distance - chief_radius) / agent_distance);
}

bool is_visible(const Vec3& agent_pos, const Vec3& point, double chief_radius) {
  const double distance = agent_pos.norm();
  return (agent_pos / distance).dot(point) >=
         perception_threshold(distance, chief_radius);
}

std::vector<std::size_t> visible_points(const Vec3& agent_pos,
                                        const InspectionPointSet& pts) {
  const double distance = agent_pos.norm();
  if (!(distance > pts.chief_radius)) {
    throw Error(ErrorKind::Geometry,
                "agent must be strictly outside the chief for visibility");
  }
  const Vec3 boresight = agent_pos / distance;
  const double threshold = perception_threshold(distance, pts.chief_radius);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (boresight.dot(pts.points[i]) >= threshold) out.push_back(i);
  }
  return out;
}

ClusterResult cluster_uninspected(const InspectionPointSet& pts,
                                  std::uint64_t rng_seed,
                                  const KMeansOptions& options) {
  std::vector<Vec3> data;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!pts.inspected[i]) data.push_back(pts.points[i]);
  }
  ClusterResult result;
  if (data.empty()) return result;

  const std::size_t k =
      std::max<std::size_t>(1, std::min(options.max_clusters, data.size()));
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  // k-means++ seeding.
  std::vector<Vec3> centers;
  centers.reserve(k);
  centers.push_back(data[std::min(
      data.size() - 1, static_cast<std::size_t>(uniform(rng) * data.size()))]);
  std::vector<double> nearest(data.size(), std::numeric_limits<double>::max());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      nearest[i] = std::min(nearest[i], (data[i] - centers.back()).squaredNorm());
      total += nearest[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double target = uniform(rng) * total;
      pick = data.size() - 1;
      for (std::size_t i = 0; i < data.size(); ++i) {
        target -= nearest[i];
        if (target < 0.0) {
          pick = i;
          break;
        }
      }
    }
    centers.push_back(data[pick]);
  }

  std::vector<std::size_t> label(data.size(), k);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < data.size(); ++i) {
      std::size_t best = 0;
      double best_d = (data[i] - centers[0]).squaredNorm();
      for (std::size_t c = 1; c < k; ++c) {
        const double d = (data[i] - centers[c]).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (label[i] != best) {
        label[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
    std::vector<Vec3> sums(k, Vec3::Zero());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < data.size(); ++i) {
      sums[label[i]] += data[i];
      ++counts[label[i]];
    }
    // Empty clusters keep their previous center.
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) centers[c] = sums[c] / static_cast<double>(counts[c]);
    }
  }

  result.cluster_sizes.assign(k, 0);
  std::vector<Vec3> sums(k, Vec3::Zero());
  for (std::size_t i = 0; i < data.size(); ++i) {
    ++result.cluster_sizes[label[i]];
    sums[label[i]] += data[i];
  }
  const auto largest = static_cast<std::size_t>(
      std::max_element(result.cluster_sizes.begin(),
                       result.cluster_sizes.end()) -
      result.cluster_sizes.begin());
  Vec3 centroid = sums[largest];
  if (centroid.norm() <= 1e-12 * pts.chief_radius) {
    // Balanced antipodal members cancel; fall back to the first member.
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (label[i] == largest) {
        centroid = data[i];
        break;
      }
    }
  }
  result.direction = centroid.normalized();
  return result;
}

}  // namespace sunlit
