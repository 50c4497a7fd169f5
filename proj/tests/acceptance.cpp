// Acceptance suite: one line per criterion, strict tolerances, nonzero exit
// on any failure. Each criterion is self-contained and timed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bext/cli.hpp"
#include "bext/closed_forms.hpp"
#include "bext/functionals.hpp"
#include "bext/operators.hpp"
#include "bext/report.hpp"
#include "bext/solver.hpp"

using namespace bext;

namespace {

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<bool(std::string&)> run;
};

bool within(double got, double want, double rel_tol) { return std::abs(got / want - 1.0) <= rel_tol; }

char detail_buf[256];

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  std::snprintf(detail_buf, sizeof(detail_buf), pattern, a, b, c);
  return detail_buf;
}

// --- criterion bodies ---------------------------------------------------------

bool c1_single_layer_ball(std::string& detail) {
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    for (double s : {0.0, 0.25, 0.5, 0.75, 0.95}) {
      const double quad = polar_reduce_sphere_integral(n, 1.0, s, [&](double d) { return std::pow(d, 2.0 - n); });
      worst = std::max(worst, std::abs(quad / single_layer_ball(n, s) - 1.0));
    }
  }
  detail = fmt("max rel err %.2e (tol 1e-10)", worst);
  return worst <= 1e-10;
}

bool c2_single_layer_exterior(std::string& detail) {
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    for (double r : {0.1, 0.2, 0.5}) {
      for (double s : {0.6, 0.8, 0.95}) {
        const double quad = polar_reduce_sphere_integral(n, r, s, [&](double d) { return std::pow(d, 2.0 - n); });
        worst = std::max(worst, std::abs(quad / single_layer_sphere_exterior(n, r, s) - 1.0));
      }
    }
  }
  detail = fmt("max rel err %.2e (tol 1e-10)", worst);
  return worst <= 1e-10;
}

bool c3_sharp_ball_constant(std::string& detail) {
  double worst = 0.0;
  double n3 = 0.0;
  for (int n = 3; n <= 8; ++n) {
    const QuotientReport rep = rayleigh_J2(BoundaryFunction::constant(DomainSpec::ball(n), 1.0));
    worst = std::max(worst, std::abs(rep.quotient / sharp_constant_ball(n) - 1.0));
    if (n == 3) n3 = rep.quotient;
  }
  detail = fmt("max rel err %.2e (tol 1e-8); J_2(1,B_1)|_{n=3} = %.7f", worst, n3);
  return worst <= 1e-8 && within(n3, 2.3904733198783872, 1e-8);
}

bool c4_annulus_riesz_sweep(std::string& detail) {
  SweepSpec spec;
  spec.theorem = SweepTheorem::AnnulusRiesz;
  spec.r_grid = cli::log_grid(1e-3, 0.3, 40);
  const SweepResult res = run_sweep(spec);
  double worst_quad = 0.0;
  for (const ReportRow& row : res.rows) {
    if (row.verdict != Verdict::ExceedsBall || !(row.margin > 3.0 * row.error_estimate)) {
      detail = fmt("margin %.3e fails 3x error %.3e at r=%.4f", row.margin, row.error_estimate, row.r);
      return false;
    }
    worst_quad = std::max(worst_quad, std::abs(row.quotient / annulus_C2_exact(row.r, 3) - 1.0));
  }
  if (worst_quad > 1e-8) {
    detail = fmt("quadrature vs closed form rel err %.2e exceeds 1e-8", worst_quad);
    return false;
  }
  const double slope = res.summaries[0].fitted_slope;
  detail = fmt("40 margins > 3x err; quad err %.1e; slope %.6f vs 0.75", worst_quad, slope);
  return within(slope, 0.75, 1e-2);
}

bool c5_annulus_poisson(std::string& detail) {
  const DomainSpec dom = DomainSpec::annulus(3, 0.05);
  const TwoLevelSearch best = optimize_two_level_a(dom, TwoLevelObjective::PoissonSurrogate, 1.01, 10.0, 16);
  const QuotientReport& sur = best.best_report;
  const bool margin_ok = sur.verdict == Verdict::ExceedsBall && sur.margin() > 3.0 * sur.error_estimate;
  const double iso = isoperimetric_conformal(BoundaryFunction::two_level(dom, 1.0, best.best_a));
  const bool iso_ok = iso > isoperimetric_ball(3) && iso > 0.45474;
  detail = fmt("surrogate %.6f > 0.674340 (margin %.2e); iso %.6f > 0.454735", sur.quotient, sur.margin(), iso);
  return margin_ok && iso_ok;
}

bool c6_bubble_identity(std::string& detail) {
  const DomainSpec win = DomainSpec::half_space_window(3, 1e4);
  const BubbleParams bp{1.0, 3};
  const BoundaryFunction f =
      BoundaryFunction::radial_profile(win, [bp](double t, int) { return bubble_f(bp, t); });
  std::mt19937_64 rng(1234u);
  std::uniform_real_distribution<double> uperp(0.0, 4.0), uh(0.1, 3.0);
  std::vector<double> ratios;
  for (int k = 0; k < 20; ++k) {
    const Point x{uperp(rng), 0.0, uh(rng)};
    ratios.push_back(extend_riesz(f, 2.0, x) / std::pow(bubble_g(bp, x), 0.2));
  }
  double mean = 0.0;
  for (double v : ratios) mean += v;
  mean /= ratios.size();
  double worst = 0.0;
  for (double v : ratios) worst = std::max(worst, std::abs(v / mean - 1.0));
  double worst_axis = 0.0;
  for (double xn : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double v = extend_riesz(f, 2.0, Point{0.0, 0.0, xn});
    worst_axis = std::max(worst_axis, std::abs(v * (1.0 + xn) / (2.0 * kPi) - 1.0));
  }
  detail = fmt("ratio dev %.2e; axis vs 2*pi dev %.2e (tol 1e-4)", worst, worst_axis);
  return worst <= 1e-4 && worst_axis <= 1e-4;
}

bool c7_eps_invariance(std::string& detail) {
  const double p = 4.0 / 3.0;
  const double n01 = bubble_boundary_norm({0.1, 3}, p);
  const double n1 = bubble_boundary_norm({1.0, 3}, p);
  const double n10 = bubble_boundary_norm({10.0, 3}, p);
  const double dev = std::max(std::abs(n01 / n1 - 1.0), std::abs(n10 / n1 - 1.0));
  detail = fmt("norms agree to %.2e (tol 1e-10); value %.12f", dev, n1);
  return dev <= 1e-10;
}

bool c8_tail_scaling(std::string& detail) {
  const BubbleParams bp{1.0, 3};
  const double p = 4.0 / 3.0;
  const double m2 = bubble_boundary_tail_mass(bp, p, 1e2);
  const double m3 = bubble_boundary_tail_mass(bp, p, 1e3);
  const double m4 = bubble_boundary_tail_mass(bp, p, 1e4);
  const double s23 = (std::log(m3) - std::log(m2)) / std::log(10.0);
  const double s34 = (std::log(m4) - std::log(m3)) / std::log(10.0);
  const double dev = std::max(std::abs(s23 / -2.0 - 1.0), std::abs(s34 / -2.0 - 1.0));
  detail = fmt("slopes %.5f, %.5f vs -(n-1) = -2 (tol 2%%)", s23, s34);
  return dev <= 0.02;
}

bool c9_solver(std::string& detail) {
  const DomainSpec ball = DomainSpec::ball(3);
  const double p = 4.0 / 3.0;
  const double c0 = std::pow(sphere_area(3), -1.0 / p);
  double worst_fixed = 0.0;
  for (double q : {3.0, 4.0, 5.0, 5.9}) {
    const BoundaryFunction next = el_step(BoundaryFunction::constant(ball, c0), q);
    worst_fixed = std::max(worst_fixed, std::abs(next.component_values()[0] / c0 - 1.0));
  }
  if (worst_fixed > 1e-12) {
    detail = fmt("constant fixed-point residual %.2e exceeds 1e-12", worst_fixed);
    return false;
  }
  SolverConfig cfg;
  const std::vector<double> grid{4.0, 5.0, 5.5, 5.9, 5.99};
  const ContinuationResult cont = continuation_to_critical(ball, grid, cfg);
  bool monotone = true;
  for (const SolverReport& rep : cont.reports) {
    for (std::size_t i = 1; i < rep.quotient_history.size(); ++i)
      monotone = monotone && rep.quotient_history[i] >=
                                 rep.quotient_history[i - 1] - 1e-12 * std::max(1.0, rep.quotient_history[i - 1]);
  }
  const double limit = cont.points.back().second;
  detail = fmt("fixed-pt res %.1e; continuation(q->5.99) = %.6f vs %.6f", worst_fixed, limit,
               sharp_constant_ball(3));
  return monotone && cont.all_converged && within(limit, sharp_constant_ball(3), 1e-2);
}

bool c10_duality(std::string& detail) {
  const DomainSpec dom = DomainSpec::ball(3);
  const BoundaryFunction f = BoundaryFunction::constant(dom, 1.0);
  const std::vector<std::function<double(double)>> gs = {
      [](double) { return 1.0; },
      [](double t) { return t * t; },
      [](double t) { return std::exp(-t); },
      [](double t) { return 1.0 / (1.0 + t * t); },
      [](double t) { return std::cos(t); },
  };
  const QuadratureRule vol = graded_volume_rule(dom, 3.0, 96);
  const InteriorField Ef = extend_field(f, 2.0);
  double worst = 0.0;
  for (const auto& g : gs) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < vol.size(); ++i)
      lhs += vol.weights[i] * Ef.radial_eval(vol.nodes[i]) * g(vol.nodes[i]);
    const double rhs = sphere_area(3) * restrict_riesz_component(make_radial_field(dom, g, "g"), 2.0, 0);
    worst = std::max(worst, std::abs(lhs / rhs - 1.0));
  }
  detail = fmt("max rel mismatch %.2e (tol 1e-8) over 5 radial pairs", worst);
  return worst <= 1e-8;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "single-layer ball identity, n=3..8", 1.0, c1_single_layer_ball},
      {2, "exterior single-layer identity, n=3..8", 1.0, c2_single_layer_exterior},
      {3, "sharp ball constant via Rayleigh quotient", 5.0, c3_sharp_ball_constant},
      {4, "annulus beats ball: C_2 sweep + small-r slope", 30.0, c4_annulus_riesz_sweep},
      {5, "annulus Poisson quotient and isoperimetric constant", 10.0, c5_annulus_poisson},
      {6, "half-space bubble identity, truncation 1e4", 30.0, c6_bubble_identity},
      {7, "bubble norm eps-invariance", 5.0, c7_eps_invariance},
      {8, "boundary tail scaling law", 5.0, c8_tail_scaling},
      {9, "solver fixed point, monotonicity, continuation", 60.0, c9_solver},
      {10, "extension/restriction duality", 5.0, c10_duality},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = dt <= c.time_limit_s;
    if (!in_time) detail += fmt("; runtime %.2fs exceeds %.0fs", dt, c.time_limit_s);
    ok = ok && in_time;
    std::printf("[%s] criterion %2d: %-52s %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(),
                detail.c_str(), dt);
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
