#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "bext/functionals.hpp"
#include "bext/operators.hpp"

namespace bext {

// Controls for the subcritical fixed-point iteration
//   f <- normalize( (R_2[(E_2 f)^{q-1}])^{n/(n-2)} ),
// whose fixed points solve the Euler-Lagrange system of E_{2,q}(Omega).
struct SolverConfig {
  double q = 4.0;             // exponent in (2, 2n/(n-2))
  double tol = 1e-8;          // relative sup-change of f AND quotient change
  int max_iter = 200;
  double damping = 1.0;       // mixing weight in (0,1]
  int radial_order = 64;      // boundary/volume discretization orders
  int surface_resolution = 12;
  double grading = 3.0;

  void validate(int n) const {
    const double crit = 2.0 * n / (n - 2.0);
    if (!(q > 2.0 && q < crit)) throw std::invalid_argument("SolverConfig: q must lie in (2, 2n/(n-2))");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("SolverConfig: damping must lie in (0,1]");
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig: tol must be positive");
    if (max_iter < 1) throw std::invalid_argument("SolverConfig: max_iter must be >= 1");
  }
};

struct SolverReport {
  BoundaryFunction final_f;
  std::vector<double> quotient_history;  // E_{2,q} estimate per accepted iterate
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
  double quotient = 0.0;
  int iterations = 0;
  double q = 0.0;
  bool holder_bound_ok = true;  // ball runs: estimate <= |B_1|^{1/q-1/2*} E_2(B_1)
};

namespace detail {

// State of the iteration: either one value per boundary sphere (rotation
// invariant data) or samples on the ball's surface grid (n = 3).
struct SolverState {
  bool componentwise = true;
  std::vector<double> values;  // per component, or per grid point
  SurfaceGrid grid;            // sampled mode only

  static SolverState from(const BoundaryFunction& f) {
    SolverState s;
    if (f.componentwise_constant()) {
      s.componentwise = true;
      s.values = f.component_values();
    } else {
      const SampledSurface smp = f.as_sampled();
      s.componentwise = false;
      s.grid = smp.grid;
      s.values = smp.values;
    }
    return s;
  }

  BoundaryFunction to_boundary(const DomainSpec& dom) const {
    if (componentwise) return BoundaryFunction{dom, ComponentConstant{values}};
    return BoundaryFunction{dom, SampledSurface{grid, values}};
  }

  double norm_lp(const DomainSpec& dom, double p) const {
    double mass = 0.0;
    if (componentwise) {
      for (std::size_t c = 0; c < values.size(); ++c)
        mass += std::pow(std::abs(values[c]), p) * sphere_area(dom.n, dom.component_radius(static_cast<int>(c)));
    } else {
      for (std::size_t i = 0; i < values.size(); ++i) mass += grid.weights[i] * std::pow(std::abs(values[i]), p);
    }
    return std::pow(mass, 1.0 / p);
  }

  void scale(double c) {
    for (double& v : values) v *= c;
  }

  double sup_diff(const SolverState& o) const {
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) d = std::max(d, std::abs(values[i] - o.values[i]));
    return d;
  }

  double sup() const {
    double d = 0.0;
    for (double v : values) d = std::max(d, std::abs(v));
    return d;
  }
};

// One Euler-Lagrange update of a rotation-invariant state: everything
// reduces to 1-D quadrature against per-shell polar reductions.
struct RadialElWorkspace {
  DomainSpec dom;
  QuadratureRule radial;           // dt rule over the radial extent
  std::vector<double> shell_full;  // n*omega_n t^{n-1} factors per node

  RadialElWorkspace(const DomainSpec& d, const SolverConfig& cfg)
      : dom(d), radial(detail::radial_map_rule(d, cfg.grading, cfg.radial_order)) {
    shell_full.resize(radial.size());
    for (std::size_t i = 0; i < radial.size(); ++i)
      shell_full[i] = sphere_area(dom.n) * ipow(radial.nodes[i], dom.n - 1);
  }

  std::vector<double> extension_at_nodes(const std::vector<double>& comp_values) const {
    std::vector<double> v(radial.size());
    const auto kernel = [&](double d) { return std::pow(d, 2.0 - dom.n); };
    for (std::size_t i = 0; i < radial.size(); ++i) {
      double acc = 0.0;
      for (int c = 0; c < dom.boundary_components(); ++c)
        acc += comp_values[c] * polar_reduce_sphere_integral(dom.n, dom.component_radius(c), radial.nodes[i], kernel);
      v[i] = acc;
    }
    return v;
  }

  // R_2[v^{q-1}] on boundary component c.
  double restrict_power(const std::vector<double>& v, double q, int c) const {
    const double s = dom.component_radius(c);
    const auto kernel = [&](double d) { return std::pow(d, 2.0 - dom.n); };
    double acc = 0.0;
    for (std::size_t i = 0; i < radial.size(); ++i)
      acc += radial.weights[i] * std::pow(v[i], q - 1.0) *
             polar_reduce_sphere_integral(dom.n, radial.nodes[i], s, kernel);
    return acc;
  }

  double lq_of(const std::vector<double>& v, double q) const {
    double mass = 0.0;
    for (std::size_t i = 0; i < radial.size(); ++i)
      mass += radial.weights[i] * shell_full[i] * std::pow(v[i], q);
    return std::pow(mass, 1.0 / q);
  }
};

// Sampled-ball workspace (n = 3): the extension is tabulated once per step on
// a fixed volume grid; restriction subtracts the field value toward each
// boundary point so the kernel sum only sees the vanishing fluctuation.
struct SampledElWorkspace {
  DomainSpec dom;
  SurfaceGrid bgrid;
  QuadratureRule radial;
  std::vector<SurfaceGrid> shells;

  SampledElWorkspace(const DomainSpec& d, const SurfaceGrid& boundary_grid, const SolverConfig& cfg)
      : dom(d), bgrid(boundary_grid), radial(detail::radial_map_rule(d, cfg.grading, std::max(24, cfg.radial_order / 2))) {
    shells.reserve(radial.size());
    for (std::size_t i = 0; i < radial.size(); ++i)
      shells.push_back(surface_grid(3, radial.nodes[i], cfg.surface_resolution));
  }

  // E_2 f at x for sampled values on bgrid, with near-boundary subtraction.
  double extend_at(const std::vector<double>& f, std::span<const double> x) const {
    const double s = euclidean_norm(x);
    std::size_t nearest = 0;
    double best = -2.0;
    for (std::size_t i = 0; i < bgrid.size(); ++i) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += x[k] * bgrid.points[i][k];
      if (dot > best) {
        best = dot;
        nearest = i;
      }
    }
    const double fbar = f[nearest];
    double total = fbar * polar_reduce_sphere_integral(3, 1.0, s, [](double d) { return 1.0 / d; });
    for (std::size_t i = 0; i < bgrid.size(); ++i) {
      const double dv = f[i] - fbar;
      if (dv == 0.0) continue;
      double d2 = 0.0;
      for (int k = 0; k < 3; ++k) {
        const double e = x[k] - bgrid.points[i][k];
        d2 += e * e;
      }
      total += bgrid.weights[i] * dv / std::sqrt(d2);
    }
    return total;
  }

  // One full step: returns (unnormalized new samples, L^q norm of E_2 f).
  std::pair<std::vector<double>, double> step(const std::vector<double>& f, double q) const {
    // tabulate v = E_2 f on the volume grid and toward each boundary node
    std::vector<std::vector<double>> v(shells.size());
    for (std::size_t i = 0; i < shells.size(); ++i) {
      v[i].resize(shells[i].size());
      for (std::size_t k = 0; k < shells[i].size(); ++k) v[i][k] = extend_at(f, shells[i].points[k]);
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < shells.size(); ++i)
      for (std::size_t k = 0; k < shells[i].size(); ++k)
        mass += radial.weights[i] * shells[i].weights[k] * std::pow(std::max(v[i][k], 0.0), q);
    const double lq = std::pow(mass, 1.0 / q);

    std::vector<double> out(bgrid.size());
    for (std::size_t j = 0; j < bgrid.size(); ++j) {
      const std::array<double, 3>& y = bgrid.points[j];
      double total = 0.0;
      for (std::size_t i = 0; i < shells.size(); ++i) {
        const double t = radial.nodes[i];
        const std::array<double, 3> toward{t * y[0], t * y[1], t * y[2]};
        const double gnear = std::pow(std::max(extend_at(f, toward), 0.0), q - 1.0);
        double shell = gnear * polar_reduce_sphere_integral(3, t, 1.0, [](double d) { return 1.0 / d; });
        for (std::size_t k = 0; k < shells[i].size(); ++k) {
          double d2 = 0.0;
          for (int c = 0; c < 3; ++c) {
            const double e = shells[i].points[k][c] - y[c];
            d2 += e * e;
          }
          shell += shells[i].weights[k] * (std::pow(std::max(v[i][k], 0.0), q - 1.0) - gnear) / std::sqrt(d2);
        }
        total += radial.weights[i] * shell;
      }
      out[j] = std::pow(std::max(total, 0.0), dom.n / (dom.n - 2.0));
    }
    return {std::move(out), lq};
  }
};

}  // namespace detail

// One fixed-point update f -> normalize((R_2[(E_2 f)^{q-1}])^{n/(n-2)}).
// Maps rotation-invariant data to rotation-invariant data by construction.
inline BoundaryFunction el_step(const BoundaryFunction& f, double q, const SolverConfig& cfg = {}) {
  f.validate();
  const DomainSpec dom = f.domain;
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("el_step: supported on Ball and Annulus");
  SolverConfig c = cfg;
  c.q = q;
  c.validate(dom.n);
  if (!f.nonnegative()) throw std::invalid_argument("el_step: boundary data must be nonnegative");
  if (f.identically_zero()) throw std::invalid_argument("el_step: boundary data must not vanish identically");

  detail::SolverState state = detail::SolverState::from(f);
  const double p = 2.0 * (dom.n - 1.0) / dom.n;
  state.scale(1.0 / state.norm_lp(dom, p));

  detail::SolverState next = state;
  if (state.componentwise) {
    detail::RadialElWorkspace ws(dom, c);
    const std::vector<double> v = ws.extension_at_nodes(state.values);
    for (int comp = 0; comp < dom.boundary_components(); ++comp)
      next.values[comp] = std::pow(std::max(ws.restrict_power(v, q, comp), 0.0), dom.n / (dom.n - 2.0));
  } else {
    detail::SampledElWorkspace ws(dom, state.grid, c);
    next.values = ws.step(state.values, q).first;
  }
  next.scale(1.0 / next.norm_lp(dom, p));
  return next.to_boundary(dom);
}

// Damped fixed-point iteration for the subcritical extremal problem. The
// quotient history is kept non-decreasing: a step that would lower the
// quotient beyond slack halves the damping and is retried, and plateaus keep
// the earlier iterate. Non-convergence is reported, not thrown.
inline SolverReport solve_subcritical(const DomainSpec& dom, const SolverConfig& cfg, const BoundaryFunction& init) {
  dom.validate();
  init.validate();
  if (!init.domain.same_shape(dom)) throw std::invalid_argument("solve_subcritical: init lives on a different domain");
  cfg.validate(dom.n);
  if (!init.nonnegative()) throw std::invalid_argument("solve_subcritical: init must be nonnegative");
  if (init.identically_zero()) throw std::invalid_argument("solve_subcritical: init must not vanish identically");

  const int n = dom.n;
  const double p = 2.0 * (n - 1.0) / n;
  const double q = cfg.q;

  detail::SolverState state = detail::SolverState::from(init);
  state.scale(1.0 / state.norm_lp(dom, p));

  // quotient + raw step for the current state
  std::unique_ptr<detail::RadialElWorkspace> rws;
  std::unique_ptr<detail::SampledElWorkspace> sws;
  if (state.componentwise)
    rws = std::make_unique<detail::RadialElWorkspace>(dom, cfg);
  else
    sws = std::make_unique<detail::SampledElWorkspace>(dom, state.grid, cfg);

  auto evaluate = [&](const detail::SolverState& s) -> std::pair<double, std::vector<double>> {
    if (rws) {
      const std::vector<double> v = rws->extension_at_nodes(s.values);
      std::vector<double> raw(dom.boundary_components());
      for (int comp = 0; comp < dom.boundary_components(); ++comp)
        raw[comp] = std::pow(std::max(rws->restrict_power(v, q, comp), 0.0), n / (n - 2.0));
      return {rws->lq_of(v, q), std::move(raw)};
    }
    auto [raw, lq] = sws->step(s.values, q);
    return {lq, std::move(raw)};
  };

  SolverReport rep;
  rep.q = q;
  auto [Q, raw] = evaluate(state);
  rep.quotient_history.push_back(Q);
  double damping = cfg.damping;
  const double slack = 1e-12;

  int attempts = 0;
  while (attempts < cfg.max_iter) {
    ++attempts;
    detail::SolverState candidate = state;
    candidate.values = raw;
    candidate.scale(1.0 / candidate.norm_lp(dom, p));
    if (damping < 1.0) {
      for (std::size_t i = 0; i < candidate.values.size(); ++i)
        candidate.values[i] = (1.0 - damping) * state.values[i] + damping * candidate.values[i];
      candidate.scale(1.0 / candidate.norm_lp(dom, p));
    }
    auto [Qc, raw_c] = evaluate(candidate);
    if (Qc < Q - slack * std::max(1.0, std::abs(Q))) {
      damping *= 0.5;  // safeguard: retry the same state more cautiously
      if (damping < 1e-4) break;
      continue;
    }
    const double residual = candidate.sup_diff(state) / std::max(state.sup(), 1e-300);
    const double dq = std::abs(Qc - Q) / std::max(1.0, std::abs(Q));
    state = std::move(candidate);
    Q = Qc;
    raw = std::move(raw_c);
    rep.quotient_history.push_back(Q);
    rep.residual = residual;
    rep.iterations = attempts;
    if (residual <= cfg.tol && dq <= cfg.tol) {
      rep.converged = true;
      break;
    }
  }

  rep.quotient = Q;
  rep.final_f = state.to_boundary(dom);
  if (dom.kind == DomainKind::Ball) {
    const double bound = std::exp((1.0 / q - (n - 2.0) / (2.0 * n)) * log_unit_ball_volume(n)) *
                         sharp_constant_ball(n);
    rep.holder_bound_ok = rep.quotient <= bound * (1.0 + 1e-9);
  }
  return rep;
}

inline SolverReport solve_subcritical(const DomainSpec& dom, const SolverConfig& cfg) {
  const BoundaryFunction init = dom.kind == DomainKind::Annulus ? BoundaryFunction::two_level(dom, 1.0, 2.0)
                                                                : BoundaryFunction::constant(dom, 1.0);
  return solve_subcritical(dom, cfg, init);
}

struct ContinuationResult {
  std::vector<std::pair<double, double>> points;  // (q, E_{2,q} estimate)
  std::vector<SolverReport> reports;
  bool all_converged = true;
};

// Warm-started sweep of solve_subcritical along an increasing q grid toward
// the critical exponent. Any non-converged solve marks the sweep tentative.
inline ContinuationResult continuation_to_critical(const DomainSpec& dom, std::span<const double> q_grid,
                                                   const SolverConfig& base) {
  dom.validate();
  if (q_grid.empty()) throw std::invalid_argument("continuation_to_critical: empty q grid");
  const double crit = 2.0 * dom.n / (dom.n - 2.0);
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    if (!(q_grid[i] > 2.0 && q_grid[i] < crit))
      throw std::invalid_argument("continuation_to_critical: q values must lie in (2, 2n/(n-2))");
    if (i > 0 && !(q_grid[i] > q_grid[i - 1]))
      throw std::invalid_argument("continuation_to_critical: q grid must be strictly increasing");
  }
  ContinuationResult out;
  BoundaryFunction f = dom.kind == DomainKind::Annulus ? BoundaryFunction::two_level(dom, 1.0, 2.0)
                                                       : BoundaryFunction::constant(dom, 1.0);
  for (double q : q_grid) {
    SolverConfig cfg = base;
    cfg.q = q;
    SolverReport rep = solve_subcritical(dom, cfg, f);
    out.all_converged = out.all_converged && rep.converged;
    out.points.emplace_back(q, rep.quotient);
    f = rep.final_f;  // warm start
    out.reports.push_back(std::move(rep));
  }
  return out;
}

}  // namespace bext
