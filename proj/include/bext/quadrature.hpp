#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bext/geometry.hpp"

namespace bext {

struct RuleMeta {
  int order = 0;          // Gauss order (per panel for composite rules)
  double grading = 0.0;   // grading exponent, when relevant
  std::string target;     // what measure the rule integrates against
};

// Nodes and positive weights for a 1-D quadrature. When a rule represents a
// volume measure the shell factor n*omega_n*t^{n-1} is folded into the
// weights, so sum(weights) equals the total mass of the target measure.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  RuleMeta meta;

  std::size_t size() const { return nodes.size(); }

  double mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
  }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
    return s;
  }
};

// Gauss-Legendre nodes and weights on [a,b] by Newton iteration on the
// Legendre polynomial; exact for polynomials of degree <= 2*order-1.
inline QuadratureRule gauss_rule_1d(int order, double a = -1.0, double b = 1.0) {
  if (order < 1) throw std::invalid_argument("gauss_rule_1d: order must be >= 1");
  if (!(a < b)) throw std::invalid_argument("gauss_rule_1d: need a < b");
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double xm = 0.5 * (b + a);
  const double xl = 0.5 * (b - a);
  const int m = (order + 1) / 2;
  for (int i = 1; i <= m; ++i) {
    double z = std::cos(kPi * (i - 0.25) / (order + 0.5));
    double z1, pp;
    do {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = order * (z * p1 - p2) / (z * z - 1.0);
      z1 = z;
      z = z1 - p1 / pp;
    } while (std::abs(z - z1) > 1e-15);
    rule.nodes[i - 1] = xm - xl * z;
    rule.nodes[order - i] = xm + xl * z;
    rule.weights[i - 1] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
    rule.weights[order - i] = rule.weights[i - 1];
  }
  rule.meta = {order, 0.0, "interval"};
  return rule;
}

// Composite Gauss rule over consecutive panels [b_0,b_1], [b_1,b_2], ...
inline QuadratureRule composite_gauss_rule(const std::vector<double>& breakpoints, int order_per_panel) {
  if (breakpoints.size() < 2) throw std::invalid_argument("composite_gauss_rule: need at least one panel");
  QuadratureRule out;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const QuadratureRule panel = gauss_rule_1d(order_per_panel, breakpoints[i], breakpoints[i + 1]);
    out.nodes.insert(out.nodes.end(), panel.nodes.begin(), panel.nodes.end());
    out.weights.insert(out.weights.end(), panel.weights.begin(), panel.weights.end());
  }
  out.meta = {order_per_panel, 0.0, "composite"};
  return out;
}

// Breakpoints a, a+first, a+first*ratio, ... geometrically widening toward b.
inline std::vector<double> geometric_breakpoints(double a, double b, double first, double ratio = 4.0) {
  std::vector<double> pts{a};
  double step = first;
  double x = a;
  while (x + step < b) {
    x += step;
    pts.push_back(x);
    step *= ratio;
  }
  pts.push_back(b);
  return pts;
}

// Angular rule on [0,pi] with panels clustering geometrically at theta = 0,
// where the reduced kernels of nearly touching sphere/point configurations
// concentrate. Resolves gaps |s - rho| down to ~1e-12 * rho.
inline QuadratureRule polar_angle_rule(int order_per_panel = 24, double eps0 = 1e-12) {
  QuadratureRule rule = composite_gauss_rule(geometric_breakpoints(0.0, kPi, kPi * eps0), order_per_panel);
  rule.meta = {order_per_panel, 0.0, "polar-angle [0,pi]"};
  return rule;
}

inline const QuadratureRule& default_polar_rule() {
  static const QuadratureRule rule = polar_angle_rule();
  return rule;
}

// Surface integral of a rotation-invariant kernel over the sphere of radius
// rho in R^n, seen from a point at distance s from the center:
//
//   int_{dB_rho} G(|x-y|) dS_y
//     = area(S^{n-2}) rho^{n-1} int_0^pi G(d(theta)) sin^{n-2}(theta) dtheta,
//   d(theta)^2 = (rho-s)^2 + 4 rho s sin^2(theta/2).
//
// Valid for any n >= 2 (n = 2 is the circle case used by the flat-disc
// reduction). The theta rule must cover [0,pi].
template <class Kernel>
double polar_reduce_sphere_integral(int n, double rho, double s, Kernel&& G, const QuadratureRule& theta_rule) {
  if (n < 2) throw std::invalid_argument("polar_reduce_sphere_integral: dimension must be >= 2");
  if (!(rho > 0.0)) throw std::invalid_argument("polar_reduce_sphere_integral: radius must be positive");
  if (s < 0.0) throw std::invalid_argument("polar_reduce_sphere_integral: source distance must be >= 0");
  if (std::abs(s - rho) <= 1e-13 * std::max(rho, s)) {
    // On-sphere evaluation is allowed only for kernels bounded at 0.
    if (!std::isfinite(static_cast<double>(G(0.0))))
      throw singular_configuration("polar_reduce_sphere_integral: source point on the sphere with singular kernel");
  }
  const double gap = rho - s;
  const double cross = 4.0 * rho * s;
  double sum = 0.0;
  for (std::size_t i = 0; i < theta_rule.nodes.size(); ++i) {
    const double theta = theta_rule.nodes[i];
    const double sh = std::sin(0.5 * theta);
    const double d = std::sqrt(gap * gap + cross * sh * sh);
    sum += theta_rule.weights[i] * G(d) * ipow(std::sin(theta), n - 2);
  }
  return unit_sphere_area(n - 2) * ipow(rho, n - 1) * sum;
}

template <class Kernel>
double polar_reduce_sphere_integral(int n, double rho, double s, Kernel&& G) {
  return polar_reduce_sphere_integral(n, rho, s, std::forward<Kernel>(G), default_polar_rule());
}

// Panels covering [0,R] by decades from R*1e-12 upward, refined geometrically
// around an interior near-singularity at `cluster` with innermost width
// `inner_scale`. Used for the radial leg of flat-disc integrals whose
// integrand varies on the scale of the evaluation height.
inline std::vector<double> clustered_breakpoints(double R, double cluster = -1.0, double inner_scale = 0.0) {
  std::vector<double> brk{0.0, R};
  for (double x = R; x > R * 1e-12; x /= 10.0) brk.push_back(x / 10.0);
  if (cluster > 0.0 && cluster < R && inner_scale > 0.0) {
    brk.push_back(cluster);
    for (double w = inner_scale; w < R; w *= 4.0) {
      if (cluster - w > 0.0) brk.push_back(cluster - w);
      if (cluster + w < R) brk.push_back(cluster + w);
    }
  }
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end(),
                        [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(1.0, std::abs(x)); }),
            brk.end());
  return brk;
}

}  // namespace bext
