#pragma once

// Reference implementations used only by the tests. Each is written from the
// governing equations, independent of the library code it checks.

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace oracle {

using V3 = Eigen::Vector3d;

struct CwState {
  V3 r;
  V3 v;
};

// Hill-frame accelerations, x radial, y along-track, z cross-track.
inline V3 cw_accel(const V3& r, const V3& v, const V3& f, double n, double m) {
  return V3(3.0 * n * n * r.x() + 2.0 * n * v.y() + f.x() / m,
            -2.0 * n * v.x() + f.y() / m,
            -n * n * r.z() + f.z() / m);
}

inline CwState rk4(CwState s, const V3& f, double n, double m, double dt,
                   int substeps) {
  const double h = dt / substeps;
  for (int i = 0; i < substeps; ++i) {
    const V3 k1r = s.v;
    const V3 k1v = cw_accel(s.r, s.v, f, n, m);
    const V3 k2r = s.v + 0.5 * h * k1v;
    const V3 k2v = cw_accel(s.r + 0.5 * h * k1r, s.v + 0.5 * h * k1v, f, n, m);
    const V3 k3r = s.v + 0.5 * h * k2v;
    const V3 k3v = cw_accel(s.r + 0.5 * h * k2r, s.v + 0.5 * h * k2v, f, n, m);
    const V3 k4r = s.v + h * k3v;
    const V3 k4v = cw_accel(s.r + h * k3r, s.v + h * k3v, f, n, m);
    s.r += h / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r);
    s.v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
  return s;
}

// Unforced closed-form solution of the CW equations.
inline CwState cw_closed_form(const CwState& s0, double n, double t) {
  const double c = std::cos(n * t);
  const double s = std::sin(n * t);
  const double x0 = s0.r.x(), y0 = s0.r.y(), z0 = s0.r.z();
  const double u0 = s0.v.x(), v0 = s0.v.y(), w0 = s0.v.z();
  CwState out;
  out.r = V3((4.0 - 3.0 * c) * x0 + s / n * u0 + 2.0 / n * (1.0 - c) * v0,
             6.0 * (s - n * t) * x0 + y0 - 2.0 / n * (1.0 - c) * u0 +
                 (4.0 * s - 3.0 * n * t) / n * v0,
             c * z0 + s / n * w0);
  out.v = V3(3.0 * n * s * x0 + c * u0 + 2.0 * s * v0,
             -6.0 * n * (1.0 - c) * x0 - 2.0 * s * u0 + (4.0 * c - 3.0) * v0,
             -n * s * z0 + c * w0);
  return out;
}

// Sphere tracing: march along the ray by the distance to the surface until
// the surface is reached or the ray is clearly past the sphere.
inline std::optional<double> march_to_sphere(const V3& origin, const V3& dir,
                                             const V3& center, double radius) {
  const V3 q = dir.normalized();
  const double scale = 1.0 / dir.norm();
  const bool inside = (origin - center).norm() < radius;
  const double far = (origin - center).norm() + 4.0 * radius;
  double t = 0.0;
  for (int i = 0; i < 2'000'000; ++i) {
    const double gap = (origin + t * q - center).norm() - radius;
    const double step = inside ? -gap : gap;
    if (step < 1e-10 * radius) return t * scale;
    if (t > far) return std::nullopt;
    // A ray moving away from the centre while outside can never come back.
    if (!inside && (origin + t * q - center).dot(q) > 0.0 && gap > 0.0) {
      return std::nullopt;
    }
    t += step;
  }
  return std::nullopt;
}

// Brute-force GAE: every advantage is an explicit discounted sum of TD errors
// up to the end of the episode that contains it.
inline std::vector<double> gae_double_loop(const std::vector<double>& rewards,
                                           const std::vector<double>& values,
                                           const std::vector<bool>& dones,
                                           double last_value, double gamma,
                                           double lambda) {
  const std::size_t n = rewards.size();
  std::vector<double> adv(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double sum = 0.0;
    double weight = 1.0;
    for (std::size_t l = t; l < n; ++l) {
      const double next = dones[l] ? 0.0 : (l + 1 < n ? values[l + 1] : last_value);
      const double delta = rewards[l] + gamma * next - values[l];
      sum += weight * delta;
      if (dones[l]) break;
      weight *= gamma * lambda;
    }
    adv[t] = sum;
  }
  return adv;
}

}  // namespace oracle
