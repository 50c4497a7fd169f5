#include <cmath>
#include <random>

#include "bext/closed_forms.hpp"
#include "bext/solver.hpp"
#include "doctest.h"

using namespace bext;

namespace {

bool monotone_up_to_slack(const std::vector<double>& h, double slack = 1e-12) {
  for (std::size_t i = 1; i < h.size(); ++i)
    if (h[i] < h[i - 1] - slack * std::max(1.0, std::abs(h[i - 1]))) return false;
  return true;
}

double state_norm(const BoundaryFunction& f, double p) {
  // L^p boundary norm straight from the representation
  return lp_norm_boundary(f, p);
}

}  // namespace

TEST_SUITE_BEGIN("solver");

TEST_CASE("constants on the ball are fixed points of the EL step") {
  const DomainSpec ball = DomainSpec::ball(3);
  const double p = 2.0 * (3 - 1.0) / 3.0;
  const double c0 = std::pow(sphere_area(3), -1.0 / p);  // normalized constant
  for (double q : {3.0, 4.0, 5.0, 5.9}) {
    const BoundaryFunction f = BoundaryFunction::constant(ball, c0);
    const BoundaryFunction next = el_step(f, q);
    const double c1 = next.component_values()[0];
    CHECK(std::abs(c1 / c0 - 1.0) <= 1e-12);
  }
}

TEST_CASE("EL step agrees with the composed public-operator route") {
  // normalize(restrict(E_2 f^{q-1})^{n/(n-2)}) assembled from the public API
  const DomainSpec dom = DomainSpec::annulus(3, 0.1);
  const double q = 4.0;
  const double p = 4.0 / 3.0;
  BoundaryFunction f = BoundaryFunction::two_level(dom, 1.0, 2.0);
  const double nf = lp_norm_boundary(f, p);
  f = BoundaryFunction::two_level(dom, 1.0 / nf, 2.0 / nf);
  const InteriorField power = field_positive_power(extend_field(f, 2.0), q - 1.0);
  std::vector<double> raw(2);
  for (int c = 0; c < 2; ++c) raw[c] = std::pow(restrict_riesz_component(power, 2.0, c), 3.0);
  BoundaryFunction manual = BoundaryFunction::two_level(dom, raw[0], raw[1]);
  const double nm = lp_norm_boundary(manual, p);
  const BoundaryFunction stepped = el_step(f, q);
  CHECK(stepped.component_values()[0] == doctest::Approx(raw[0] / nm).epsilon(1e-12));
  CHECK(stepped.component_values()[1] == doctest::Approx(raw[1] / nm).epsilon(1e-12));
}

TEST_CASE("EL step rejects invalid input") {
  const DomainSpec ball = DomainSpec::ball(3);
  CHECK_THROWS_AS(el_step(BoundaryFunction::constant(ball, 0.0), 3.0), std::invalid_argument);
  CHECK_THROWS_AS(el_step(BoundaryFunction::constant(ball, -1.0), 3.0), std::invalid_argument);
  CHECK_THROWS_AS(el_step(BoundaryFunction::constant(ball, 1.0), 2.0), std::invalid_argument);
  CHECK_THROWS_AS(el_step(BoundaryFunction::constant(ball, 1.0), 6.0), std::invalid_argument);
}

TEST_CASE("ball solve with constant init: one step, closed-form quotient") {
  const DomainSpec ball = DomainSpec::ball(3);
  SolverConfig cfg;
  cfg.q = 3.0;
  const SolverReport rep = solve_subcritical(ball, cfg, BoundaryFunction::constant(ball, 1.0));
  CHECK(rep.converged);
  CHECK(rep.holder_bound_ok);
  // n*omega_n * omega_n^{1/3} / (n*omega_n)^{3/4}
  const double want = 4.0 * kPi * std::pow(unit_ball_volume(3), 1.0 / 3.0) / std::pow(4.0 * kPi, 0.75);
  CHECK(rep.quotient == doctest::Approx(want).epsilon(1e-10));
  CHECK(rep.quotient == doctest::Approx(3.0350464054984608).epsilon(1e-10));
  CHECK(monotone_up_to_slack(rep.quotient_history));
  // iterates stay normalized
  CHECK(state_norm(rep.final_f, 4.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("annulus solve: monotone quotient history, beats the ball baseline") {
  const DomainSpec dom = DomainSpec::annulus(3, 0.05);
  SolverConfig cfg;
  cfg.q = 5.9;
  const SolverReport rep = solve_subcritical(dom, cfg);
  CHECK(rep.converged);
  CHECK(monotone_up_to_slack(rep.quotient_history));
  CHECK(state_norm(rep.final_f, 4.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
  // ball value of the same subcritical quotient (constants are extremal there)
  const double ball_q = 4.0 * kPi * std::pow(unit_ball_volume(3), 1.0 / 5.9) / std::pow(4.0 * kPi, 0.75);
  CHECK(rep.quotient > ball_q);
  CHECK(rep.quotient == doctest::Approx(2.40788).epsilon(1e-4));
  // two-level init stays two-level (rotational equivariance by construction)
  CHECK(rep.final_f.componentwise_constant());
}

TEST_CASE("solver reports non-convergence instead of throwing") {
  const DomainSpec dom = DomainSpec::annulus(3, 0.05);
  SolverConfig cfg;
  cfg.q = 5.9;
  cfg.max_iter = 1;
  const SolverReport rep = solve_subcritical(dom, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations <= 1);
}

TEST_CASE("continuation on the ball approaches the sharp constant") {
  const DomainSpec ball = DomainSpec::ball(3);
  SolverConfig cfg;
  const std::vector<double> grid{4.0, 5.0, 5.5, 5.9, 5.99};
  const ContinuationResult cont = continuation_to_critical(ball, grid, cfg);
  CHECK(cont.all_converged);
  CHECK(cont.points.size() == grid.size());
  CHECK(std::abs(cont.points.back().second / sharp_constant_ball(3) - 1.0) <= 0.01);
  // estimates decrease toward the critical value on the ball
  for (std::size_t i = 1; i < cont.points.size(); ++i) CHECK(cont.points[i].second < cont.points[i - 1].second);
}

TEST_CASE("continuation on the annulus stays above the sharp ball constant") {
  const DomainSpec dom = DomainSpec::annulus(3, 0.05);
  SolverConfig cfg;
  const std::vector<double> grid{5.5, 5.9, 5.99};
  const ContinuationResult cont = continuation_to_critical(dom, grid, cfg);
  CHECK(cont.all_converged);
  CHECK(cont.points.back().second > sharp_constant_ball(3));
}

TEST_CASE("single-entry continuation equals a direct solve") {
  const DomainSpec ball = DomainSpec::ball(3);
  SolverConfig cfg;
  const std::vector<double> grid{4.0};
  const ContinuationResult cont = continuation_to_critical(ball, grid, cfg);
  cfg.q = 4.0;
  const SolverReport direct = solve_subcritical(ball, cfg);
  CHECK(cont.points[0].second == doctest::Approx(direct.quotient).epsilon(1e-14));
  CHECK_THROWS_AS(continuation_to_critical(ball, std::vector<double>{5.0, 4.0}, cfg), std::invalid_argument);
  CHECK_THROWS_AS(continuation_to_critical(ball, std::vector<double>{}, cfg), std::invalid_argument);
}

TEST_CASE("holder comparison bound holds on every ball run") {
  const DomainSpec ball = DomainSpec::ball(3);
  for (double q : {3.0, 4.5, 5.9}) {
    SolverConfig cfg;
    cfg.q = q;
    const SolverReport rep = solve_subcritical(ball, cfg);
    CHECK(rep.holder_bound_ok);
    const double bound = std::pow(unit_ball_volume(3), 1.0 / q - 1.0 / 6.0) * sharp_constant_ball(3);
    CHECK(rep.quotient <= bound * (1.0 + 1e-9));
  }
}

TEST_CASE("random positive sampled init on the ball converges to the constant") {
  const DomainSpec ball = DomainSpec::ball(3);
  const SurfaceGrid grid = surface_grid(3, 1.0, 10);
  std::mt19937_64 rng(424242u);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  std::vector<double> vals(grid.size());
  for (double& v : vals) v = u(rng);
  const BoundaryFunction init = BoundaryFunction::sampled(ball, grid, vals);

  SolverConfig cfg;
  cfg.q = 3.0;
  cfg.tol = 1e-7;
  cfg.max_iter = 60;
  cfg.radial_order = 48;
  cfg.surface_resolution = 10;
  const SolverReport rep = solve_subcritical(ball, cfg, init);
  CHECK(rep.converged);
  CHECK(monotone_up_to_slack(rep.quotient_history));

  // final iterate is numerically constant over the sphere grid
  const SampledSurface fin = rep.final_f.as_sampled();
  double lo = 1e300, hi = -1e300;
  for (double v : fin.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK((hi - lo) / hi <= 1e-3);
  // and the quotient matches the constant-data closed form of the discretization
  const double want = 4.0 * kPi * std::pow(unit_ball_volume(3), 1.0 / 3.0) / std::pow(4.0 * kPi, 0.75);
  CHECK(rep.quotient == doctest::Approx(want).epsilon(1e-3));
}

TEST_SUITE_END();
