#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bext/boundary.hpp"
#include "bext/closed_forms.hpp"
#include "bext/geometry.hpp"
#include "bext/grids.hpp"
#include "bext/quadrature.hpp"

namespace bext {

// Quadrature knobs shared by the operator evaluations. The defaults meet the
// tolerances used throughout; raising radial_order is the refinement axis
// used for error estimates.
struct QuadOptions {
  int radial_order = 64;
  double grading = 3.0;
  int surface_resolution = 24;
  int panel_order = 24;  // per-panel order for disc/tail integrals
};

// A function on Omega. Rotation-invariant fields carry a radial evaluator;
// general fields (n = 3) evaluate at points.
struct InteriorField {
  DomainSpec domain;
  bool radial = false;
  std::function<double(double)> radial_eval;
  std::function<double(std::span<const double>)> eval;
  std::string provenance;

  double operator()(double t) const { return radial_eval(t); }
  double operator()(std::span<const double> x) const {
    return radial ? radial_eval(euclidean_norm(x)) : eval(x);
  }
};

inline InteriorField make_radial_field(const DomainSpec& dom, std::function<double(double)> f,
                                       std::string provenance = "radial") {
  return InteriorField{dom, true, std::move(f), nullptr, std::move(provenance)};
}

inline InteriorField make_general_field(const DomainSpec& dom, std::function<double(std::span<const double>)> f,
                                        std::string provenance = "general") {
  return InteriorField{dom, false, nullptr, std::move(f), std::move(provenance)};
}

// f -> |max(f,0)|^p, the nonlinearity of the Euler-Lagrange iteration.
inline InteriorField field_positive_power(const InteriorField& g, double p) {
  InteriorField out = g;
  out.provenance = g.provenance + "^" + std::to_string(p);
  if (g.radial) {
    out.radial_eval = [inner = g.radial_eval, p](double t) { return std::pow(std::max(inner(t), 0.0), p); };
  } else {
    out.eval = [inner = g.eval, p](std::span<const double> x) { return std::pow(std::max(inner(x), 0.0), p); };
  }
  return out;
}

namespace detail {

inline void check_dimension(const DomainSpec& dom, std::span<const double> x, const char* who) {
  if (x.size() != static_cast<std::size_t>(dom.n))
    throw std::invalid_argument(std::string(who) + ": point has wrong dimension");
}

inline void check_interior(const DomainSpec& dom, std::span<const double> x, const char* who) {
  check_dimension(dom, x, who);
  constexpr double kGap = 1e-12;
  const double s = euclidean_norm(x);
  switch (dom.kind) {
    case DomainKind::Ball:
      if (!(s <= 1.0 - kGap)) throw std::domain_error(std::string(who) + ": point not strictly inside B_1");
      break;
    case DomainKind::Annulus:
      if (!(s >= dom.r + kGap && s <= 1.0 - kGap))
        throw std::domain_error(std::string(who) + ": point not strictly inside the annulus");
      break;
    case DomainKind::HalfSpaceWindow:
      if (!(x[dom.n - 1] > 0.0))
        throw std::domain_error(std::string(who) + ": point not strictly inside the half-space");
      break;
  }
}

inline void check_alpha(const DomainSpec& dom, double alpha, const char* who) {
  if (!(alpha > 1.0 && alpha < dom.n))
    throw std::invalid_argument(std::string(who) + ": kernel order alpha must lie in (1,n)");
}

// Boundary component whose sphere passes through y, or -1.
inline int boundary_component_of(const DomainSpec& dom, std::span<const double> y, double tol = 1e-9) {
  if (dom.kind == DomainKind::HalfSpaceWindow) {
    if (std::abs(y[dom.n - 1]) <= tol && euclidean_norm(y) <= dom.R + tol) return 0;
    return -1;
  }
  const double s = euclidean_norm(y);
  for (int c = 0; c < dom.boundary_components(); ++c)
    if (std::abs(s - dom.component_radius(c)) <= tol) return c;
  return -1;
}

inline double riesz_kernel(double d, double alpha, int n) { return std::pow(d, alpha - n); }

// E_alpha of componentwise-constant sphere data, by polar reduction.
inline double extend_spheres_constant(const DomainSpec& dom, const std::vector<double>& values, double alpha,
                                      double s) {
  double total = 0.0;
  for (int c = 0; c < dom.boundary_components(); ++c) {
    const double rho = dom.component_radius(c);
    total += values[c] *
             polar_reduce_sphere_integral(dom.n, rho, s, [&](double d) { return riesz_kernel(d, alpha, dom.n); });
  }
  return total;
}

// E_alpha of a radial profile on the flat disc B_R^{n-1}: the annulus of
// radius t in the disc is a sphere in R^{n-1}, so the ring integral is the
// (n-1)-dimensional polar reduction of the lifted kernel.
inline double extend_disc_profile(const DomainSpec& dom, const RadialProfile& f, double alpha,
                                  std::span<const double> x, const QuadOptions& opts) {
  const int n = dom.n;
  const double xn = x[n - 1];
  double perp2 = 0.0;
  for (int i = 0; i + 1 < n; ++i) perp2 += x[i] * x[i];
  const double s_perp = std::sqrt(perp2);
  const auto lifted = [&](double d) { return std::pow(d * d + xn * xn, 0.5 * (alpha - n)); };
  const QuadratureRule t_rule = composite_gauss_rule(
      clustered_breakpoints(dom.R, s_perp, 0.25 * std::max(xn, 1e-6 * dom.R)), opts.panel_order);
  double total = 0.0;
  for (std::size_t i = 0; i < t_rule.size(); ++i) {
    const double t = t_rule.nodes[i];
    total += t_rule.weights[i] * f.profile(t, 0) * polar_reduce_sphere_integral(n - 1, t, s_perp, lifted);
  }
  return total;
}

// E_alpha of sampled sphere data. The component's near value is extended
// through the polar reduction and only the fluctuation goes through the raw
// grid sum, so evaluation stays usable close to the sphere, where the raw sum
// alone would diverge.
inline double extend_dispatch(const BoundaryFunction& f, double alpha, std::span<const double> x,
                              const QuadOptions& opts) {
  const DomainSpec& dom = f.domain;
  if (dom.kind == DomainKind::HalfSpaceWindow) {
    if (const auto* p = std::get_if<RadialProfile>(&f.data)) return extend_disc_profile(dom, *p, alpha, x, opts);
    throw unsupported_configuration("extend_riesz: half-space data must be a radial profile");
  }
  if (f.componentwise_constant()) return extend_spheres_constant(dom, f.component_values(), alpha, euclidean_norm(x));
  const SampledSurface s = f.as_sampled();
  const double dist = euclidean_norm(x);
  std::size_t nearest = 0;
  double best = -2.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    double dot = 0.0;
    for (int k = 0; k < 3; ++k) dot += x[k] * s.grid.points[i][k];
    if (dot > best) {
      best = dot;
      nearest = i;
    }
  }
  const double fbar = s.values[nearest];
  double total =
      fbar * polar_reduce_sphere_integral(3, s.grid.radius, dist, [&](double d) { return riesz_kernel(d, alpha, 3); });
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const double dv = s.values[i] - fbar;
    if (dv == 0.0) continue;
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double e = x[k] - s.grid.points[i][k];
      d2 += e * e;
    }
    total += s.grid.weights[i] * dv * riesz_kernel(std::sqrt(d2), alpha, 3);
  }
  return total;
}
}  // namespace detail

// E_alpha f(x) = int_{dOmega} f(y) |x-y|^{alpha-n} dS_y for x strictly inside.
inline double extend_riesz(const BoundaryFunction& f, double alpha, std::span<const double> x,
                           const QuadOptions& opts = {}) {
  f.validate();
  detail::check_alpha(f.domain, alpha, "extend_riesz");
  detail::check_interior(f.domain, x, "extend_riesz");
  return detail::extend_dispatch(f, alpha, x, opts);
}

// The extension as a field over Omega; rotation-invariant data stays radial.
inline InteriorField extend_field(const BoundaryFunction& f, double alpha, const QuadOptions& opts = {}) {
  f.validate();
  detail::check_alpha(f.domain, alpha, "extend_field");
  const DomainSpec dom = f.domain;
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("extend_field: evaluate half-space extensions pointwise");
  if (f.componentwise_constant()) {
    const std::vector<double> values = f.component_values();
    return make_radial_field(
        dom, [dom, values, alpha](double t) { return detail::extend_spheres_constant(dom, values, alpha, t); },
        "E_alpha[spheres]");
  }
  const SampledSurface s = f.as_sampled();
  BoundaryFunction fs{dom, s};
  QuadOptions o = opts;
  return make_general_field(
      dom, [fs, alpha, o](std::span<const double> x) { return detail::extend_dispatch(fs, alpha, x, o); },
      "E_alpha[sampled]");
}

// R_alpha g(y) = int_Omega g(x) |x-y|^{alpha-n} dx for y on the boundary.
// Radial fields reduce to a 1-D integral of per-shell polar reductions (the
// shell average of the kernel is smooth through the touching configuration).
// General n = 3 fields additionally subtract the field value toward y on each
// shell so the sampled kernel sum only sees the vanishing fluctuation.
inline double restrict_riesz(const InteriorField& g, double alpha, std::span<const double> y,
                             const QuadOptions& opts = {}) {
  const DomainSpec& dom = g.domain;
  detail::check_alpha(dom, alpha, "restrict_riesz");
  detail::check_dimension(dom, y, "restrict_riesz");
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("restrict_riesz: supported on Ball and Annulus");
  if (detail::boundary_component_of(dom, y) < 0)
    throw std::domain_error("restrict_riesz: point does not lie on the boundary");
  const double s = euclidean_norm(y);
  const QuadratureRule radial = detail::radial_map_rule(dom, opts.grading, opts.radial_order);
  const auto kernel = [&](double d) { return detail::riesz_kernel(d, alpha, dom.n); };
  if (g.radial) {
    double total = 0.0;
    for (std::size_t i = 0; i < radial.size(); ++i) {
      const double t = radial.nodes[i];
      total += radial.weights[i] * g.radial_eval(t) * polar_reduce_sphere_integral(dom.n, t, s, kernel);
    }
    return total;
  }
  if (dom.n != 3) throw unsupported_configuration("restrict_riesz: general fields exist only for n = 3");
  std::array<double, 3> u{y[0] / s, y[1] / s, y[2] / s};
  double total = 0.0;
  for (std::size_t i = 0; i < radial.size(); ++i) {
    const double t = radial.nodes[i];
    const std::array<double, 3> toward{t * u[0], t * u[1], t * u[2]};
    const double gnear = g.eval(toward);
    double shell = gnear * polar_reduce_sphere_integral(3, t, s, kernel);
    const SurfaceGrid sg = surface_grid(3, t, opts.surface_resolution);
    for (std::size_t k = 0; k < sg.size(); ++k) {
      double d2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double e = sg.points[k][c] - y[c];
        d2 += e * e;
      }
      shell += sg.weights[k] * (g.eval(sg.points[k]) - gnear) * kernel(std::sqrt(d2));
    }
    total += radial.weights[i] * shell;
  }
  return total;
}

// Restriction onto a boundary sphere of rotation-invariant fields, where the
// value depends only on the component.
inline double restrict_riesz_component(const InteriorField& g, double alpha, int component,
                                       const QuadOptions& opts = {}) {
  if (!g.radial) throw unsupported_configuration("restrict_riesz_component: field must be radial");
  const DomainSpec& dom = g.domain;
  Point y(dom.n, 0.0);
  y[0] = dom.component_radius(component);
  return restrict_riesz(g, alpha, y, opts);
}

// Harmonic (Poisson) extension P_2 f. Constant-per-sphere data extends in
// closed form; sampled ball data goes through the Poisson kernel
// (1-|x|^2)/(n omega_n |x-y|^n), which is itself harmonic in x.
inline double harmonic_extend(const BoundaryFunction& f, std::span<const double> x, const QuadOptions& = {}) {
  f.validate();
  const DomainSpec& dom = f.domain;
  detail::check_interior(dom, x, "harmonic_extend");
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("harmonic_extend: supported on Ball and Annulus");
  if (f.componentwise_constant()) {
    const std::vector<double> v = f.component_values();
    if (dom.kind == DomainKind::Ball) return v[0];
    // radial harmonic interpolation c1 t^{2-n} + c2 through (1, v0), (r, v1)
    const double q = std::pow(dom.r, 2.0 - dom.n) - 1.0;
    const double c1 = (v[1] - v[0]) / q;
    const double c2 = v[0] - c1;
    return c1 * std::pow(euclidean_norm(x), 2.0 - dom.n) + c2;
  }
  if (dom.kind != DomainKind::Ball)
    throw unsupported_configuration("harmonic_extend: non-radial data is supported on the ball only");
  // The Poisson integral of a constant is that constant, so the nearest
  // sample value passes through exactly and only the fluctuation goes through
  // the kernel sum; this keeps near-boundary evaluation finite even at points
  // radially aligned with a grid node.
  const SampledSurface s = f.as_sampled();
  double s2 = 0.0;
  for (double xi : x) s2 += xi * xi;
  std::size_t nearest = 0;
  double best = -2.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    double dot = 0.0;
    for (int k = 0; k < 3; ++k) dot += x[k] * s.grid.points[i][k];
    if (dot > best) {
      best = dot;
      nearest = i;
    }
  }
  const double fbar = s.values[nearest];
  const double pref = (1.0 - s2) / sphere_area(3);
  double total = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const double dv = s.values[i] - fbar;
    if (dv == 0.0) continue;
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double e = x[k] - s.grid.points[i][k];
      d2 += e * e;
    }
    total += s.grid.weights[i] * dv / (d2 * std::sqrt(d2));
  }
  return fbar + pref * total;
}

inline InteriorField harmonic_field(const BoundaryFunction& f, const QuadOptions& opts = {}) {
  f.validate();
  const DomainSpec dom = f.domain;
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("harmonic_field: supported on Ball and Annulus");
  if (f.componentwise_constant()) {
    const std::vector<double> v = f.component_values();
    if (dom.kind == DomainKind::Ball)
      return make_radial_field(dom, [c = v[0]](double) { return c; }, "P_2[const]");
    const double q = std::pow(dom.r, 2.0 - dom.n) - 1.0;
    const double c1 = (v[1] - v[0]) / q;
    const double c2 = v[0] - c1;
    return make_radial_field(
        dom, [c1, c2, n = dom.n](double t) { return c1 * std::pow(t, 2.0 - n) + c2; }, "P_2[two-level]");
  }
  BoundaryFunction fs{dom, f.as_sampled()};
  QuadOptions o = opts;
  return make_general_field(
      dom, [fs, o](std::span<const double> x) { return harmonic_extend(fs, x, o); }, "P_2[sampled]");
}

// L^p norm over the boundary. Sphere components with constant data are exact
// component sums; disc profiles integrate over [0,R] with decade panels.
inline double lp_norm_boundary(const BoundaryFunction& f, double p, const QuadOptions& opts = {}) {
  f.validate();
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_boundary: exponent must be >= 1");
  const DomainSpec& dom = f.domain;
  if (dom.kind == DomainKind::HalfSpaceWindow) {
    const auto* prof = std::get_if<RadialProfile>(&f.data);
    if (!prof) throw unsupported_configuration("lp_norm_boundary: half-space data must be a radial profile");
    const QuadratureRule t_rule = composite_gauss_rule(clustered_breakpoints(dom.R), opts.panel_order + 8);
    double mass = 0.0;
    for (std::size_t i = 0; i < t_rule.size(); ++i) {
      const double t = t_rule.nodes[i];
      mass += t_rule.weights[i] * std::pow(std::abs(prof->profile(t, 0)), p) * ipow(t, dom.n - 2);
    }
    return std::pow(unit_sphere_area(dom.n - 2) * mass, 1.0 / p);
  }
  if (f.componentwise_constant()) {
    const std::vector<double> v = f.component_values();
    double mass = 0.0;
    for (int c = 0; c < dom.boundary_components(); ++c)
      mass += std::pow(std::abs(v[c]), p) * sphere_area(dom.n, dom.component_radius(c));
    return std::pow(mass, 1.0 / p);
  }
  const SampledSurface s = f.as_sampled();
  double mass = 0.0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) mass += s.grid.weights[i] * std::pow(std::abs(s.values[i]), p);
  return std::pow(mass, 1.0 / p);
}

struct NormEstimate {
  double value = 0.0;
  double error_estimate = 0.0;
};

namespace detail {

template <class Eval>
double lq_radial_pass(const DomainSpec& dom, Eval&& ev, double q, double beta, int order) {
  const QuadratureRule rule = graded_volume_rule(dom, beta, order);
  double mass = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = ev(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "lq_norm_interior: field not finite at radius " << rule.nodes[i];
      throw std::runtime_error(msg.str());
    }
    mass += rule.weights[i] * std::pow(std::abs(v), q);
  }
  return std::pow(mass, 1.0 / q);
}

template <class Eval>
double lq_grid_pass(const DomainSpec& dom, Eval&& ev, double q, double beta, int order, int resolution) {
  const VolumeGrid3 grid = graded_volume_grid3(dom, beta, order, resolution);
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = ev(grid.points[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "lq_norm_interior: field not finite at (" << grid.points[i][0] << ", " << grid.points[i][1] << ", "
          << grid.points[i][2] << ")";
      throw std::runtime_error(msg.str());
    }
    mass += grid.weights[i] * std::pow(std::abs(v), q);
  }
  return std::pow(mass, 1.0 / q);
}

}  // namespace detail

// L^q norm over Omega with the boundary-graded volume rule; the returned
// error estimate is the change under doubling the radial order.
inline NormEstimate lq_norm_interior(const InteriorField& g, double q, const QuadOptions& opts = {}) {
  if (!(q >= 1.0)) throw std::invalid_argument("lq_norm_interior: exponent must be >= 1");
  const DomainSpec& dom = g.domain;
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("lq_norm_interior: supported on Ball and Annulus");
  if (g.radial) {
    const double lo = detail::lq_radial_pass(dom, g.radial_eval, q, opts.grading, opts.radial_order);
    const double hi = detail::lq_radial_pass(dom, g.radial_eval, q, opts.grading, 2 * opts.radial_order);
    return {hi, std::abs(hi - lo) + 5e-15 * std::abs(hi)};
  }
  if (dom.n != 3) throw unsupported_configuration("lq_norm_interior: general fields exist only for n = 3");
  const int order = std::max(16, opts.radial_order / 2);
  const double lo = detail::lq_grid_pass(dom, g.eval, q, opts.grading, order, opts.surface_resolution);
  const double hi = detail::lq_grid_pass(dom, g.eval, q, opts.grading, 2 * order, opts.surface_resolution);
  return {hi, std::abs(hi - lo) + 5e-15 * std::abs(hi)};
}

// Signed integral int_Omega g dx with the same two-pass error estimate.
inline NormEstimate integral_interior(const InteriorField& g, const QuadOptions& opts = {}) {
  const DomainSpec& dom = g.domain;
  if (!g.radial) throw unsupported_configuration("integral_interior: implemented for radial fields");
  auto pass = [&](int order) {
    const QuadratureRule rule = graded_volume_rule(dom, opts.grading, order);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * g.radial_eval(rule.nodes[i]);
    return s;
  };
  const double lo = pass(opts.radial_order);
  const double hi = pass(2 * opts.radial_order);
  return {hi, std::abs(hi - lo) + 5e-15 * std::abs(hi)};
}

// ---- bubble tails on the half-space ----------------------------------------

// int_{|y'|>R} f_eps(y')^p dy' over the flat boundary R^{n-1}.
inline double bubble_boundary_tail_mass(const BubbleParams& p, double p_exp, double R) {
  p.validate();
  if (!(R > 0.0)) throw std::invalid_argument("bubble_boundary_tail_mass: R must be positive");
  std::vector<double> brk{R};
  for (double x = R; x < R * 1e10; x *= 10.0) brk.push_back(x * 10.0);
  const QuadratureRule rule = composite_gauss_rule(brk, 32);
  double mass = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    mass += rule.weights[i] * std::pow(bubble_f(p, t), p_exp) * ipow(t, p.n - 2);
  }
  return unit_sphere_area(p.n - 2) * mass;
}

// int_{R_+^n \ B_R^+} g_eps(x)^t dx, reduced over upper half-spheres.
inline double bubble_interior_tail_mass(const BubbleParams& p, double t_exp, double R) {
  p.validate();
  if (!(R > 0.0)) throw std::invalid_argument("bubble_interior_tail_mass: R must be positive");
  const QuadratureRule theta = gauss_rule_1d(32, 0.0, 0.5 * kPi);
  std::vector<double> brk{R};
  for (double x = R; x < R * 1e8; x *= 10.0) brk.push_back(x * 10.0);
  const QuadratureRule rho_rule = composite_gauss_rule(brk, 32);
  const double area = unit_sphere_area(p.n - 2);
  double total = 0.0;
  for (std::size_t i = 0; i < rho_rule.size(); ++i) {
    const double rho = rho_rule.nodes[i];
    double ang = 0.0;
    for (std::size_t j = 0; j < theta.size(); ++j) {
      const double th = theta.nodes[j];
      const double g = std::pow(p.eps / (rho * rho + 2.0 * p.eps * rho * std::cos(th) + p.eps * p.eps),
                                0.5 * (p.n + 2.0));
      ang += theta.weights[j] * std::pow(g, t_exp) * ipow(std::sin(th), p.n - 2);
    }
    total += rho_rule.weights[i] * ipow(rho, p.n - 1) * area * ang;
  }
  return total;
}

// Full-plane L^p norm of f_eps, integrated on panels scaled to eps.
inline double bubble_boundary_norm(const BubbleParams& p, double p_exp) {
  p.validate();
  std::vector<double> brk{0.0, p.eps * 1e-8};
  for (double x = p.eps * 1e-8; x < p.eps * 1e9; x *= 10.0) brk.push_back(x * 10.0);
  const QuadratureRule rule = composite_gauss_rule(brk, 32);
  double mass = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    mass += rule.weights[i] * std::pow(bubble_f(p, t), p_exp) * ipow(t, p.n - 2);
  }
  return std::pow(unit_sphere_area(p.n - 2) * mass, 1.0 / p_exp);
}

}  // namespace bext
