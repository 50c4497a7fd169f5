#pragma once

#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bext/report.hpp"

namespace bext {

namespace cli {

struct CheckRow {
  std::string name;
  double got = 0.0;
  double want = 0.0;
  double tol = 0.0;
  bool pass = false;
};

inline CheckRow check_rel(std::string name, double got, double want, double tol) {
  const double err = std::abs(got / want - 1.0);
  return {std::move(name), got, want, tol, err <= tol};
}

inline CheckRow check_abs(std::string name, double got, double want, double tol) {
  const double err = std::abs(got - want);
  return {std::move(name), got, want, tol, err <= tol};
}

inline int print_table(const std::vector<CheckRow>& rows) {
  int failures = 0;
  std::printf("%-58s %-24s %-24s %s\n", "check", "computed", "reference", "status");
  for (const CheckRow& row : rows) {
    std::printf("%-58s %-24.16e %-24.16e %s\n", row.name.c_str(), row.got, row.want, row.pass ? "pass" : "FAIL");
    if (!row.pass) ++failures;
  }
  std::printf("%zu checks, %d failures\n", rows.size(), failures);
  return failures == 0 ? 0 : 1;
}

// "3" or "3..8" -> inclusive list
inline std::vector<int> parse_dim_range(const std::string& text) {
  const std::size_t dots = text.find("..");
  std::vector<int> out;
  if (dots == std::string::npos) {
    out.push_back(std::stoi(text));
  } else {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    if (hi < lo) throw CLI::ValidationError("--n", "empty dimension range");
    for (int n = lo; n <= hi; ++n) out.push_back(n);
  }
  for (int n : out)
    if (n < 3 || n > kMaxDim) throw CLI::ValidationError("--n", "dimensions must lie in 3..16");
  return out;
}

inline std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > lo) || count < 1) throw CLI::ValidationError("--r-min/--r-max/--r-count", "bad log grid");
  std::vector<double> out;
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < count; ++i) out.push_back(std::exp(la + (lb - la) * i / (count - 1.0)));
  return out;
}

inline int run_verify_single_layer(const std::vector<int>& dims) {
  std::vector<CheckRow> rows;
  char name[96];
  for (int n : dims) {
    for (double s : {0.0, 0.25, 0.5, 0.75, 0.95}) {
      const double quad = polar_reduce_sphere_integral(n, 1.0, s, [&](double d) { return std::pow(d, 2.0 - n); });
      std::snprintf(name, sizeof(name), "ball single layer n=%d |x|=%.2f", n, s);
      rows.push_back(check_rel(name, quad, single_layer_ball(n, s), 1e-10));
    }
    for (double r : {0.1, 0.2, 0.5}) {
      for (double s : {0.6, 0.8, 0.95}) {
        const double quad = polar_reduce_sphere_integral(n, r, s, [&](double d) { return std::pow(d, 2.0 - n); });
        std::snprintf(name, sizeof(name), "exterior single layer n=%d r=%.1f |x|=%.2f", n, r, s);
        rows.push_back(check_rel(name, quad, single_layer_sphere_exterior(n, r, s), 1e-10));
      }
    }
  }
  return print_table(rows);
}

inline int run_verify_sharp_constants(const std::vector<int>& dims) {
  std::vector<CheckRow> rows;
  char name[96];
  for (int n : dims) {
    const QuotientReport rep = rayleigh_J2(BoundaryFunction::constant(DomainSpec::ball(n), 1.0));
    std::snprintf(name, sizeof(name), "J_2(1, B_1) vs sharp constant n=%d", n);
    rows.push_back(check_rel(name, rep.quotient, sharp_constant_ball(n), 1e-8));
    std::snprintf(name, sizeof(name), "Theta_2 = isoperimetric^{(n-2)/2} n=%d", n);
    rows.push_back(check_rel(name, theta2_ball(n), std::pow(isoperimetric_ball(n), 0.5 * (n - 2.0)), 1e-12));
    for (double r : {0.1, 0.3}) {
      const QuotientReport c2 = c2_functional(DomainSpec::annulus(n, r));
      std::snprintf(name, sizeof(name), "C_2(A_r) quadrature vs closed form n=%d r=%.1f", n, r);
      rows.push_back(check_rel(name, c2.quotient, annulus_C2_exact(r, n), 1e-8));
    }
  }
  return print_table(rows);
}

inline int run_verify_bubble(int n, double eps, double trunc) {
  if (n != 3) throw CLI::ValidationError("--n", "the bubble suite is wired for n = 3");
  std::vector<CheckRow> rows;
  const DomainSpec win = DomainSpec::half_space_window(3, trunc);
  const BubbleParams bp{eps, 3};
  const BoundaryFunction f =
      BoundaryFunction::radial_profile(win, [bp](double t, int) { return bubble_f(bp, t); });

  std::mt19937_64 rng(1234u);
  std::uniform_real_distribution<double> uperp(0.0, 4.0), uh(0.1, 3.0);
  std::vector<double> ratios;
  for (int k = 0; k < 20; ++k) {
    const Point x{uperp(rng), 0.0, uh(rng)};
    const double v = extend_riesz(f, 2.0, x);
    ratios.push_back(v / std::pow(bubble_g(bp, x), (3.0 - 2.0) / (3.0 + 2.0)));
  }
  double mean = 0.0;
  for (double v : ratios) mean += v;
  mean /= ratios.size();
  double worst = 0.0;
  for (double v : ratios) worst = std::max(worst, std::abs(v / mean - 1.0));
  rows.push_back(check_abs("extension/g^{(n-2)/(n+2)} ratio: max deviation from mean", worst, 0.0, 1e-4));

  // on-axis closed form E f_eps(0, x_n) = 2*pi*eps^{1/2}... at eps=1: 2*pi/(1+x_n)
  if (eps == 1.0) {
    for (double xn : {0.25, 1.0, 4.0}) {
      const double v = extend_riesz(f, 2.0, Point{0.0, 0.0, xn});
      char name[96];
      std::snprintf(name, sizeof(name), "on-axis extension * (1+x_n) vs 2*pi at x_n=%.2f", xn);
      rows.push_back(check_rel(name, v * (1.0 + xn), 2.0 * kPi, 1e-4));
    }
  }

  const double n01 = bubble_boundary_norm({eps / 10.0, 3}, 4.0 / 3.0);
  const double n1 = bubble_boundary_norm({eps, 3}, 4.0 / 3.0);
  const double n10 = bubble_boundary_norm({eps * 10.0, 3}, 4.0 / 3.0);
  rows.push_back(check_rel("bubble norm eps-invariance (eps/10 vs eps)", n01, n1, 1e-10));
  rows.push_back(check_rel("bubble norm eps-invariance (10*eps vs eps)", n10, n1, 1e-10));
  return print_table(rows);
}

inline int run_verify_duality(void) {
  std::vector<CheckRow> rows;
  const DomainSpec dom = DomainSpec::ball(3);
  const BoundaryFunction f = BoundaryFunction::constant(dom, 1.0);
  const std::vector<std::pair<std::string, std::function<double(double)>>> gs = {
      {"g = 1", [](double) { return 1.0; }},
      {"g = t^2", [](double t) { return t * t; }},
      {"g = exp(-t)", [](double t) { return std::exp(-t); }},
      {"g = 1/(1+t^2)", [](double t) { return 1.0 / (1.0 + t * t); }},
      {"g = cos(t)", [](double t) { return std::cos(t); }},
  };
  const QuadratureRule vol = graded_volume_rule(dom, 3.0, 96);
  const InteriorField Ef = extend_field(f, 2.0);
  for (const auto& [label, g] : gs) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < vol.size(); ++i)
      lhs += vol.weights[i] * Ef.radial_eval(vol.nodes[i]) * g(vol.nodes[i]);
    const double rhs = sphere_area(3) * restrict_riesz_component(make_radial_field(dom, g, label), 2.0, 0);
    rows.push_back(check_rel("<E_2 f, g> = <f, R_2 g> for " + label, lhs, rhs, 1e-8));
  }
  return print_table(rows);
}

}  // namespace cli

// Command-line front end; returns the process exit code.
//   0  all requested checks passed / outputs written
//   1  a verification check failed
//   2  configuration, validation, or I/O error
//   3  solver did not converge (report still written)
inline int cli_main(int argc, const char* const* argv) {
  CLI::App app{"boundary extension operators on balls and annuli: verification suites, "
               "sharp-constant sweeps, and the subcritical extremal solver"};
  app.set_config("--config", "", "flat key=value file overriding defaults (section [sweep], [solve], ...)");
  app.require_subcommand(1);

  // verify ---------------------------------------------------------------
  CLI::App* verify = app.add_subcommand("verify", "run a named identity suite and print a pass/fail table");
  std::string suite;
  verify->add_option("suite", suite, "single-layer | sharp-constants | bubble | duality")->required();
  std::string dim_text = "3";
  double eps = 1.0, trunc = 1e4;
  verify->add_option("--n", dim_text, "dimension or inclusive range, e.g. 3 or 3..8");
  verify->add_option("--eps", eps, "bubble scale");
  verify->add_option("--trunc", trunc, "half-space truncation radius");

  // sweep ----------------------------------------------------------------
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep over annuli; writes CSV (and JSON) reports");
  std::string theorem;
  sweep->add_option("theorem", theorem, "annulus-riesz | annulus-poisson")
      ->required()
      ->check(CLI::IsMember({"annulus-riesz", "annulus-poisson"}));
  std::vector<int> sweep_dims{3};
  sweep->add_option("--n", sweep_dims, "dimensions to sweep");
  double r_min = 1e-3, r_max = 0.3;
  int r_count = 40;
  sweep->add_option("--r-min", r_min, "smallest inner radius");
  sweep->add_option("--r-max", r_max, "largest inner radius");
  sweep->add_option("--r-count", r_count, "number of log-spaced radii");
  std::vector<double> r_explicit;
  sweep->add_option("--r", r_explicit, "explicit radii (overrides the log grid)");
  double a_min = 1.01, a_max = 10.0;
  int a_count = 16;
  sweep->add_option("--a-min", a_min, "smallest inner boundary value (Poisson)");
  sweep->add_option("--a-max", a_max, "largest inner boundary value (Poisson)");
  sweep->add_option("--a-count", a_count, "a-grid size (Poisson)");
  std::string out_path, json_path;
  sweep->add_option("--out", out_path, "CSV output path")->required();
  sweep->add_option("--json", json_path, "optional JSON output path");
  int workers = 0;
  sweep->add_option("--workers", workers, "worker threads (0 = hardware)");

  // solve ----------------------------------------------------------------
  CLI::App* solve = app.add_subcommand("solve", "subcritical extremal iteration; writes a JSON report");
  std::string domain_kind = "ball";
  solve->add_option("--domain", domain_kind, "ball | annulus")->check(CLI::IsMember({"ball", "annulus"}));
  int solve_n = 3;
  double solve_r = 0.1;
  solve->add_option("--n", solve_n, "dimension");
  solve->add_option("--r", solve_r, "annulus inner radius");
  double q = 0.0;
  solve->add_option("--q", q, "subcritical exponent in (2, 2n/(n-2))")->required();
  SolverConfig cfg;
  solve->add_option("--tol", cfg.tol, "relative fixed-point residual target");
  solve->add_option("--max-iter", cfg.max_iter, "iteration cap");
  solve->add_option("--damping", cfg.damping, "mixing weight in (0,1]");
  solve->add_option("--radial-order", cfg.radial_order, "radial quadrature order");
  std::string init_kind = "default";
  solve->add_option("--init", init_kind, "default | const | two-level | random");
  double a0 = 2.0;
  solve->add_option("--a0", a0, "inner value for two-level init");
  unsigned long long seed = 20240817ull;
  solve->add_option("--seed", seed, "seed for random init");
  int resolution = 10;
  solve->add_option("--resolution", resolution, "surface grid resolution for random init");
  std::string solve_out;
  solve->add_option("--out", solve_out, "JSON report path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      const std::vector<int> dims = cli::parse_dim_range(dim_text);
      if (suite == "single-layer") return cli::run_verify_single_layer(dims);
      if (suite == "sharp-constants") return cli::run_verify_sharp_constants(dims);
      if (suite == "bubble") return cli::run_verify_bubble(dims.front(), eps, trunc);
      if (suite == "duality") return cli::run_verify_duality();
      std::cerr << "unknown verify suite: " << suite << "\n";
      return 2;
    }

    if (*sweep) {
      SweepSpec spec;
      spec.theorem = theorem == "annulus-riesz" ? SweepTheorem::AnnulusRiesz : SweepTheorem::AnnulusPoisson;
      spec.n_list = sweep_dims;
      spec.r_grid = r_explicit.empty() ? cli::log_grid(r_min, r_max, r_count) : r_explicit;
      if (spec.theorem == SweepTheorem::AnnulusPoisson) spec.a_grid = cli::log_grid(a_min, a_max, a_count);
      spec.output_path = out_path;
      spec.workers = workers;
      spec.validate();  // before any file is opened
      const SweepResult result = run_sweep(spec);
      write_text_file(out_path, to_csv(result.rows));
      if (!json_path.empty()) write_text_file(json_path, sweep_to_json(spec, result).dump(2) + "\n");
      for (const SweepSummary& s : result.summaries) {
        std::printf("n=%d: r* = %s", s.n, format_real(s.r_star).c_str());
        if (!std::isnan(s.fitted_slope))
          std::printf(", fitted small-r slope = %.6f (reference %.6f)", s.fitted_slope, s.slope_reference);
        std::printf("\n");
      }
      std::printf("wrote %zu rows to %s\n", result.rows.size(), out_path.c_str());
      return 0;
    }

    // solve
    const DomainSpec dom =
        domain_kind == "ball" ? DomainSpec::ball(solve_n) : DomainSpec::annulus(solve_n, solve_r);
    cfg.q = q;
    cfg.surface_resolution = resolution;
    BoundaryFunction init = BoundaryFunction::constant(dom, 1.0);
    if (init_kind == "default") {
      init = dom.kind == DomainKind::Annulus ? BoundaryFunction::two_level(dom, 1.0, a0) : init;
    } else if (init_kind == "const") {
      // keep the constant
    } else if (init_kind == "two-level") {
      init = BoundaryFunction::two_level(dom, 1.0, a0);
    } else if (init_kind == "random") {
      if (dom.kind != DomainKind::Ball || dom.n != 3) {
        std::cerr << "random init requires the n = 3 ball\n";
        return 2;
      }
      const SurfaceGrid grid = surface_grid(3, 1.0, resolution);
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> u(0.5, 1.5);
      std::vector<double> vals(grid.size());
      for (double& v : vals) v = u(rng);
      init = BoundaryFunction::sampled(dom, grid, vals);
    } else {
      std::cerr << "unknown init kind: " << init_kind << "\n";
      return 2;
    }
    const SolverReport rep = solve_subcritical(dom, cfg, init);
    const nlohmann::json j = solver_report_to_json(dom, rep);
    if (!solve_out.empty()) write_text_file(solve_out, j.dump(2) + "\n");
    std::printf("q=%.6g converged=%s iterations=%d residual=%.3e quotient=%.16e\n", rep.q,
                rep.converged ? "true" : "false", rep.iterations, rep.residual, rep.quotient);
    return rep.converged ? 0 : 3;
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const unsupported_configuration& e) {
    std::cerr << "unsupported configuration: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace bext
