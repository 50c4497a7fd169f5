#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bext/closed_forms.hpp"
#include "bext/operators.hpp"

namespace bext {

enum class Verdict { ExceedsBall, BelowBall, WithinTolerance };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::ExceedsBall: return "ExceedsBall";
    case Verdict::BelowBall: return "BelowBall";
    case Verdict::WithinTolerance: return "WithinTolerance";
  }
  return "?";
}

// Outcome of a quotient evaluation against the relevant ball sharp constant.
// A strict-inequality verdict is issued only when the margin clears three
// times the combined quadrature error estimate.
struct QuotientReport {
  double numerator = 0.0;
  std::string numerator_norm;
  double denominator = 0.0;
  std::string denominator_norm;
  double quotient = 0.0;
  double reference = 0.0;
  Verdict verdict = Verdict::WithinTolerance;
  double error_estimate = 0.0;

  double margin() const { return quotient - reference; }
};

inline Verdict classify(double quotient, double reference, double error_estimate) {
  if (quotient - reference > 3.0 * error_estimate) return Verdict::ExceedsBall;
  if (reference - quotient > 3.0 * error_estimate) return Verdict::BelowBall;
  return Verdict::WithinTolerance;
}

inline QuotientReport make_report(double num, std::string num_norm, double den, std::string den_norm,
                                  double reference, double error_estimate) {
  QuotientReport rep;
  rep.numerator = num;
  rep.numerator_norm = std::move(num_norm);
  rep.denominator = den;
  rep.denominator_norm = std::move(den_norm);
  rep.quotient = num / den;
  rep.reference = reference;
  rep.error_estimate = std::max(error_estimate, 5e-15 * std::abs(rep.quotient));
  rep.verdict = classify(rep.quotient, reference, rep.error_estimate);
  return rep;
}

// J_2(f) = ||E_2 f||_{L^{2n/(n-2)}(Omega)} / ||f||_{L^{2(n-1)/n}(dOmega)},
// reported against E_2(B_1). Any value above the reference certifies the
// existence criterion up to quadrature error.
inline QuotientReport rayleigh_J2(const BoundaryFunction& f, const QuadOptions& opts = {}) {
  f.validate();
  const int n = f.domain.n;
  const double p = 2.0 * (n - 1.0) / n;
  const double den = lp_norm_boundary(f, p, opts);
  if (!(den > 0.0)) throw std::domain_error("rayleigh_J2: boundary function is degenerate (zero norm)");
  const NormEstimate num = lq_norm_interior(extend_field(f, 2.0, opts), 2.0 * n / (n - 2.0), opts);
  const double err = (num.error_estimate / den) + 1e-14 * (num.value / den);
  QuotientReport rep = make_report(num.value, "||E_2 f||_{L^{2n/(n-2)}(Omega)}", den,
                                   "||f||_{L^{2(n-1)/n}(dOmega)}", sharp_constant_ball(n), err);
  return rep;
}

// C_2(Omega) = |Omega|^{-(n+2)/(2n)} |dOmega|^{-n/(2(n-1))} * iint |x-y|^{2-n},
// the lower-bound functional of the annulus argument; the double integral is
// int_Omega E_2(1).
inline QuotientReport c2_functional(const DomainSpec& dom, const QuadOptions& opts = {}) {
  dom.validate();
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("c2_functional: supported on Ball and Annulus");
  const int n = dom.n;
  const BoundaryFunction one = BoundaryFunction::constant(dom, 1.0);
  const NormEstimate num = integral_interior(extend_field(one, 2.0, opts), opts);
  const double lden = ((n + 2.0) / (2.0 * n)) * std::log(dom.volume()) +
                      (n / (2.0 * (n - 1.0))) * std::log(dom.boundary_area());
  const double den = std::exp(lden);
  return make_report(num.value, "iint_{Omega x dOmega} |x-y|^{2-n}", den,
                     "|Omega|^{(n+2)/(2n)} |dOmega|^{n/(2(n-1))}", sharp_constant_ball(n),
                     num.error_estimate / den);
}

// Full harmonic-extension quotient and its Lebesgue-duality surrogate.
// The surrogate int P_2 f / (|Omega|^{(n+2)/(2n)} ||f||) never exceeds the
// full quotient, so a surrogate above Theta_2(B_1) already certifies it.
struct PoissonReport {
  QuotientReport full;
  QuotientReport surrogate;
};

inline PoissonReport poisson_quotient(const BoundaryFunction& f, const QuadOptions& opts = {}) {
  f.validate();
  const DomainSpec& dom = f.domain;
  if (dom.kind == DomainKind::HalfSpaceWindow)
    throw unsupported_configuration("poisson_quotient: supported on Ball and Annulus");
  if (!f.nonnegative() || f.identically_zero())
    throw std::domain_error("poisson_quotient: boundary data must be positive");
  const int n = dom.n;
  const double p = 2.0 * (n - 1.0) / (n - 2.0);
  const double den = lp_norm_boundary(f, p, opts);
  if (!(den > 0.0)) throw std::domain_error("poisson_quotient: boundary function is degenerate");
  const InteriorField P = harmonic_field(f, opts);
  const double theta_ref = theta2_ball(n);

  const NormEstimate num_full = lq_norm_interior(P, 2.0 * n / (n - 2.0), opts);
  PoissonReport rep;
  rep.full = make_report(num_full.value, "||P_2 f||_{L^{2n/(n-2)}(Omega)}", den, "||f||_{L^{2(n-1)/(n-2)}(dOmega)}",
                         theta_ref, num_full.error_estimate / den);

  // For positive data the L^1 integral equals the q = 1 norm.
  const NormEstimate mean = P.radial ? integral_interior(P, opts) : lq_norm_interior(P, 1.0, opts);
  const double vol_pow = std::pow(dom.volume(), (n + 2.0) / (2.0 * n));
  rep.surrogate = make_report(mean.value, "int_Omega P_2 f dx", vol_pow * den,
                              "|Omega|^{(n+2)/(2n)} ||f||_{L^{2(n-1)/(n-2)}(dOmega)}", theta_ref,
                              mean.error_estimate / (vol_pow * den));
  return rep;
}

// Isoperimetric constant of the scalar-flat conformal metric generated by f:
// I(Omega, (P_2 f)^{4/(n-2)} g_0) = poisson_quotient(f)^{2/(n-2)}.
inline double isoperimetric_conformal(const BoundaryFunction& f, const QuadOptions& opts = {}) {
  if (!f.nonnegative() || f.identically_zero())
    throw std::domain_error("isoperimetric_conformal: boundary data must be positive (metric degenerates)");
  const PoissonReport rep = poisson_quotient(f, opts);
  return std::pow(rep.full.quotient, 2.0 / (f.domain.n - 2.0));
}

// ---- two-level test-function search -----------------------------------------

enum class TwoLevelObjective { RieszJ2, PoissonSurrogate };

struct TwoLevelSearch {
  double best_a = 1.0;
  double best_value = 0.0;
  QuotientReport best_report;
  std::vector<std::pair<double, double>> samples;  // (a, objective)
};

namespace detail {

inline QuotientReport two_level_report(const DomainSpec& dom, TwoLevelObjective obj, double a,
                                       const QuadOptions& opts) {
  const BoundaryFunction f = BoundaryFunction::two_level(dom, 1.0, a);
  if (obj == TwoLevelObjective::RieszJ2) return rayleigh_J2(f, opts);
  return poisson_quotient(f, opts).surrogate;
}

}  // namespace detail

// Sweep a over a log grid and refine around the best sample by golden-section.
inline TwoLevelSearch optimize_two_level_a(const DomainSpec& dom, TwoLevelObjective obj, double a_lo = 1.01,
                                           double a_hi = 10.0, int grid = 16, const QuadOptions& opts = {}) {
  if (dom.kind != DomainKind::Annulus)
    throw std::invalid_argument("optimize_two_level_a: two-level data lives on the annulus");
  if (!(a_lo > 0.0 && a_hi > a_lo) || grid < 2) throw std::invalid_argument("optimize_two_level_a: bad search grid");
  TwoLevelSearch out;
  const double la = std::log(a_lo), lb = std::log(a_hi);
  std::size_t best_idx = 0;
  for (int i = 0; i < grid; ++i) {
    const double a = std::exp(la + (lb - la) * i / (grid - 1.0));
    const QuotientReport rep = detail::two_level_report(dom, obj, a, opts);
    out.samples.emplace_back(a, rep.quotient);
    if (out.samples[i].second > out.samples[best_idx].second) best_idx = i;
  }
  double lo = out.samples[best_idx > 0 ? best_idx - 1 : 0].first;
  double hi = out.samples[std::min(best_idx + 1, out.samples.size() - 1)].first;
  if (lo == hi) {
    out.best_a = lo;
  } else {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double v1 = detail::two_level_report(dom, obj, x1, opts).quotient;
    double v2 = detail::two_level_report(dom, obj, x2, opts).quotient;
    for (int it = 0; it < 40 && (hi - lo) > 1e-10 * hi; ++it) {
      if (v1 < v2) {
        lo = x1;
        x1 = x2;
        v1 = v2;
        x2 = lo + phi * (hi - lo);
        v2 = detail::two_level_report(dom, obj, x2, opts).quotient;
      } else {
        hi = x2;
        x2 = x1;
        v2 = v1;
        x1 = hi - phi * (hi - lo);
        v1 = detail::two_level_report(dom, obj, x1, opts).quotient;
      }
    }
    out.best_a = 0.5 * (lo + hi);
  }
  out.best_report = detail::two_level_report(dom, obj, out.best_a, opts);
  out.best_value = out.best_report.quotient;
  return out;
}

}  // namespace bext
