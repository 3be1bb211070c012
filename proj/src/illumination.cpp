#include "sunlit/illumination.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sunlit/error.hpp"

namespace sunlit {

namespace {

bool in_unit_interval(const Rgb& c) {
  return c.allFinite() && (c >= 0.0).all() && (c <= 1.0).all();
}

}  // namespace

void SurfaceMaterial::validate() const {
  if (!in_unit_interval(ambient) || !in_unit_interval(diffuse) ||
      !in_unit_interval(specular)) {
    throw Error(ErrorKind::Illumination,
                "material reflection constants must lie in [0, 1]");
  }
  if (!(shininess > 0.0)) {
    throw Error(ErrorKind::Illumination, "material shininess must be > 0");
  }
}

void LightSource::validate() const {
  if (!in_unit_interval(ambient) || !in_unit_interval(diffuse) ||
      !in_unit_interval(specular)) {
    throw Error(ErrorKind::Illumination,
                "light intensities must lie in [0, 1]");
  }
}

const char* to_string(IlluminationMode mode) {
  return mode == IlluminationMode::Binary ? "binary" : "spectral";
}

IlluminationMode illumination_mode_from_string(const std::string& name) {
  if (name == "binary") return IlluminationMode::Binary;
  if (name == "spectral") return IlluminationMode::Spectral;
  throw Error(ErrorKind::Config,
              "illumination mode must be 'binary' or 'spectral', got '" +
                  name + "'");
}

std::optional<double> ray_sphere_intersect(const Vec3& origin,
                                           const Vec3& direction,
                                           const Vec3& center, double radius) {
  const double a = direction.squaredNorm();
  if (!(a > 0.0)) {
    throw Error(ErrorKind::Illumination, "ray direction must be non-zero");
  }
  const Vec3 oc = origin - center;
  const double half_b = direction.dot(oc);
  const double c = oc.squaredNorm() - radius * radius;
  // Quarter of the textbook radicand b^2 - 4ac.
  const double radicand = half_b * half_b - a * c;
  if (radicand < 0.0) return std::nullopt;
  if (radicand <= kTangentTolerance * a * radius * radius) return std::nullopt;

  // Cancellation-free root pair.
  const double root = std::sqrt(radicand);
  const double q = half_b >= 0.0 ? -(half_b + root) : -(half_b - root);
  double d0 = q / a;
  double d1 = q != 0.0 ? c / q : -d0;
  if (d0 > d1) std::swap(d0, d1);
  if (d0 > 0.0) return d0;
  if (d1 > 0.0) return d1;
  return std::nullopt;
}

bool is_point_lit(const Vec3& point, const Vec3& sun_dir, double chief_radius) {
  const Vec3 origin = point + kShadowLift * chief_radius * sun_dir;
  return !ray_sphere_intersect(origin, sun_dir, Vec3::Zero(), chief_radius);
}

Rgb blinn_phong_rgb(const Vec3& point, const Vec3& agent_pos,
                    const Vec3& sun_dir, const SurfaceMaterial& material,
                    const LightSource& light) {
  const Vec3 normal = point.normalized();
  const Vec3 to_light = sun_dir.normalized();
  const Vec3 to_viewer = (agent_pos - point).normalized();

  const double diffuse = std::max(0.0, to_light.dot(normal));
  double specular = 0.0;
  const Vec3 sum = to_light + to_viewer;
  const double sum_norm = sum.norm();
  if (sum_norm > 1e-12) {
    const Vec3 halfway = sum / sum_norm;
    specular = std::pow(std::max(0.0, normal.dot(halfway)), material.shininess);
  }
  const Rgb raw = material.ambient * light.ambient +
                  material.diffuse * diffuse * light.diffuse +
                  material.specular * specular * light.specular;
  return raw.min(1.0).max(0.0);
}

IlluminationVerdict classify_point(const Vec3& point, const Vec3& agent_pos,
                                   const Vec3& sun_dir, double chief_radius,
                                   const IlluminationModel& model) {
  IlluminationVerdict verdict;
  verdict.occluded = !is_point_lit(point, sun_dir, chief_radius);
  if (verdict.occluded) return verdict;
  if (model.mode == IlluminationMode::Binary) {
    verdict.inspectable = true;
    return verdict;
  }
  const Rgb rgb =
      blinn_phong_rgb(point, agent_pos, sun_dir, model.material, model.light);
  verdict.rgb = rgb;
  verdict.inspectable = (rgb >= model.window.too_dark).all() &&
                        (rgb <= model.window.too_bright).all();
  return verdict;
}

std::vector<std::size_t> inspectable_points(
    const InspectionPointSet& pts, const std::vector<std::size_t>& candidates,
    const Vec3& agent_pos, const Vec3& sun_dir,
    const IlluminationModel& model) {
  std::vector<std::size_t> out;
  out.reserve(candidates.size());
  for (const std::size_t idx : candidates) {
    if (classify_point(pts.points[idx], agent_pos, sun_dir, pts.chief_radius,
                       model)
            .inspectable) {
      out.push_back(idx);
    }
  }
  return out;
}

}  // namespace sunlit
