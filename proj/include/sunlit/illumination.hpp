#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sunlit/geometry.hpp"

namespace sunlit {

using Rgb = Eigen::Array3d;

/// Surface reflection constants of the chief.
struct SurfaceMaterial {
  Rgb ambient = Rgb::Constant(0.4);
  Rgb diffuse = Rgb::Constant(0.1);
  Rgb specular = Rgb::Constant(1.0);
  double shininess = 100.0;

  void validate() const;
};

/// Intensity components of the single light source (the Sun).
struct LightSource {
  Rgb ambient = Rgb::Constant(1.0);
  Rgb diffuse = Rgb::Constant(1.0);
  Rgb specular = Rgb::Constant(1.0);

  void validate() const;
};

/// Per-channel brightness window for usable image data.
struct BrightnessWindow {
  double too_dark = 0.2;
  double too_bright = 0.83;
};

enum class IlluminationMode { Binary, Spectral };

const char* to_string(IlluminationMode mode);
IlluminationMode illumination_mode_from_string(const std::string& name);

struct IlluminationModel {
  IlluminationMode mode = IlluminationMode::Binary;
  SurfaceMaterial material;
  LightSource light;
  BrightnessWindow window;
};

struct IlluminationVerdict {
  bool occluded = true;
  std::optional<Rgb> rgb;  // only computed in spectral mode
  bool inspectable = false;
};

/// Scaled radicand magnitude below which a ray is considered tangent.
inline constexpr double kTangentTolerance = 1e-9;
/// Shadow-ray origin lift, as a fraction of the chief radius.
inline constexpr double kShadowLift = 1e-6;

/// Smallest positive distance along the ray to the sphere surface.
///
/// Solves |o + d q - c|^2 = r^2 for d. A negative radicand means a miss. A
/// radicand within kTangentTolerance of zero (scaled by |q|^2 r^2, i.e. the
/// impact parameter equals the radius) is a grazing ray and reported as a
/// miss. The direction need not be normalized but must be non-zero.
std::optional<double> ray_sphere_intersect(const Vec3& origin,
                                           const Vec3& direction,
                                           const Vec3& center, double radius);

/// True when the segment from a surface point toward the Sun leaves the chief
/// without re-entering it.
bool is_point_lit(const Vec3& point, const Vec3& sun_dir, double chief_radius);

/// Blinn-Phong shading at a surface point, clamped to [0, 1] per channel.
Rgb blinn_phong_rgb(const Vec3& point, const Vec3& agent_pos,
                    const Vec3& sun_dir, const SurfaceMaterial& material,
                    const LightSource& light);

/// Illumination verdict for a point already known to be in view.
IlluminationVerdict classify_point(const Vec3& point, const Vec3& agent_pos,
                                   const Vec3& sun_dir, double chief_radius,
                                   const IlluminationModel& model);

/// Indices among `candidates` whose verdict is inspectable.
std::vector<std::size_t> inspectable_points(
    const InspectionPointSet& pts, const std::vector<std::size_t>& candidates,
    const Vec3& agent_pos, const Vec3& sun_dir,
    const IlluminationModel& model);

}  // namespace sunlit
