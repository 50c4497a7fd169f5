#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "bext/geometry.hpp"
#include "bext/quadrature.hpp"

namespace bext {

// Product quadrature on a sphere in R^3: Gauss-Legendre in cos(theta) times
// a midpoint rule in azimuth. Weight sum is exactly 4*pi*rho^2.
struct SurfaceGrid {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  double radius = 1.0;
  int component = 0;

  std::size_t size() const { return points.size(); }

  double mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += weights[i] * f(points[i]);
    return s;
  }
};

inline SurfaceGrid surface_grid(int n, double rho, int resolution, int component = 0) {
  if (n != 3) throw unsupported_configuration("surface_grid: only n = 3 carries a surface grid");
  if (resolution < 4) throw std::invalid_argument("surface_grid: resolution must be >= 4");
  if (!(rho > 0.0)) throw std::invalid_argument("surface_grid: radius must be positive");
  const QuadratureRule polar = gauss_rule_1d(resolution, -1.0, 1.0);
  const int n_phi = 2 * resolution;
  SurfaceGrid grid;
  grid.radius = rho;
  grid.component = component;
  grid.points.reserve(static_cast<std::size_t>(resolution) * n_phi);
  grid.weights.reserve(static_cast<std::size_t>(resolution) * n_phi);
  const double wphi = 2.0 * kPi / n_phi;
  for (int i = 0; i < resolution; ++i) {
    const double u = polar.nodes[i];  // cos(theta)
    const double st = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (int j = 0; j < n_phi; ++j) {
      const double phi = (j + 0.5) * wphi;
      grid.points.push_back({rho * st * std::cos(phi), rho * st * std::sin(phi), rho * u});
      grid.weights.push_back(polar.weights[i] * wphi * rho * rho);
    }
  }
  return grid;
}

namespace detail {

// Radial map rule for [inner,outer] with node density ~ dist^{(beta-1)/beta}
// toward the listed graded endpoints; plain dt weights (no shell factor).
inline QuadratureRule graded_segment(double a, double b, double beta, int order, bool grade_at_a, bool grade_at_b) {
  const QuadratureRule base = gauss_rule_1d(order, 0.0, 1.0);
  QuadratureRule out;
  auto append = [&](double lo, double hi, bool toward_lo) {
    for (int i = 0; i < order; ++i) {
      const double u = base.nodes[i];
      const double v = std::pow(u, beta);
      const double dv = beta * std::pow(u, beta - 1.0);
      const double t = toward_lo ? lo + (hi - lo) * v : hi - (hi - lo) * v;
      out.nodes.push_back(t);
      out.weights.push_back(base.weights[i] * (hi - lo) * dv);
    }
  };
  if (grade_at_a && grade_at_b) {
    const double mid = 0.5 * (a + b);
    append(a, mid, true);
    append(mid, b, false);
  } else if (grade_at_b) {
    append(a, b, false);
  } else if (grade_at_a) {
    append(a, b, true);
  } else {
    const QuadratureRule plain = gauss_rule_1d(order, a, b);
    out.nodes = plain.nodes;
    out.weights = plain.weights;
  }
  return out;
}

// Keep quadrature nodes strictly off the boundary spheres.
inline void clamp_off_boundary(QuadratureRule& rule, double inner, double outer) {
  constexpr double kGap = 1e-12;
  for (double& t : rule.nodes) t = std::min(std::max(t, inner + kGap), outer - kGap);
}

// Plain radial rule (dt measure) over the radial extent of the domain,
// graded toward every boundary sphere.
inline QuadratureRule radial_map_rule(const DomainSpec& dom, double beta, int order) {
  dom.validate();
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("radial rules are defined for Ball and Annulus only");
  if (!(beta >= 1.0)) throw std::invalid_argument("graded rule: grading exponent must be >= 1");
  if (order < 2) throw std::invalid_argument("graded rule: radial order must be >= 2");
  QuadratureRule rule = dom.kind == DomainKind::Ball ? graded_segment(0.0, 1.0, beta, order, false, true)
                                                     : graded_segment(dom.r, 1.0, beta, order, true, true);
  clamp_off_boundary(rule, dom.kind == DomainKind::Ball ? 0.0 : dom.r, 1.0);
  rule.meta = {order, beta, "radial-extent"};
  return rule;
}

}  // namespace detail

// Volume rule over Omega for rotation-invariant integrands: nodes are radii,
// weights carry the full shell measure n*omega_n*t^{n-1} dt, and the node
// density increases like a power of the distance to each boundary sphere.
// Integrates 1 to |Omega| exactly up to roundoff.
inline QuadratureRule graded_volume_rule(const DomainSpec& dom, double beta = 3.0, int radial_order = 64) {
  QuadratureRule rule = detail::radial_map_rule(dom, beta, radial_order);
  const double shell = sphere_area(dom.n);
  for (std::size_t i = 0; i < rule.size(); ++i) rule.weights[i] *= shell * ipow(rule.nodes[i], dom.n - 1);
  rule.meta = {radial_order, beta, "volume"};
  return rule;
}

// Full volume grid for n = 3 (shells times surface grids), for integrands
// without rotational symmetry.
struct VolumeGrid3 {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }

  double mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }
};

inline VolumeGrid3 graded_volume_grid3(const DomainSpec& dom, double beta = 3.0, int radial_order = 48,
                                       int resolution = 16) {
  if (dom.n != 3) throw unsupported_configuration("graded_volume_grid3: full volume grids exist only for n = 3");
  const QuadratureRule radial = detail::radial_map_rule(dom, beta, radial_order);
  VolumeGrid3 grid;
  grid.points.reserve(radial.size() * static_cast<std::size_t>(resolution) * 2 * resolution);
  grid.weights.reserve(grid.points.capacity());
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const SurfaceGrid shell = surface_grid(3, radial.nodes[i], resolution);
    for (std::size_t k = 0; k < shell.size(); ++k) {
      grid.points.push_back(shell.points[k]);
      grid.weights.push_back(radial.weights[i] * shell.weights[k]);
    }
  }
  return grid;
}

}  // namespace bext
