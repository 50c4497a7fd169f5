#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "bext/geometry.hpp"

namespace bext {

// Exact identities behind the annulus computations. Everything here is a
// closed form; all quadrature paths are tested against these.

// int_{dB_1} |x-y|^{2-n} dS_y = n*omega_n for every |x| < 1.
inline double single_layer_ball(int n, double s) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("single_layer_ball: dimension out of range");
  if (!(std::abs(s) < 1.0)) throw std::domain_error("single_layer_ball: point must lie strictly inside B_1");
  return sphere_area(n);
}

// int_{dB_r} |x-y|^{2-n} dS_y = n*omega_n r^{n-1} / |x|^{n-2} for |x| > r.
inline double single_layer_sphere_exterior(int n, double r, double s) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("single_layer_sphere_exterior: dimension out of range");
  if (!(r > 0.0)) throw std::invalid_argument("single_layer_sphere_exterior: sphere radius must be positive");
  if (!(s > r)) throw std::domain_error("single_layer_sphere_exterior: point must lie strictly outside the sphere");
  return sphere_area(n) * ipow(r, n - 1) / ipow(s, n - 2);
}

// Sharp constant E_2(B_1) = n^{(n-2)/(2(n-1))} omega_n^{1 - 1/n - 1/(2(n-1))},
// equal to the Rayleigh quotient of the constant boundary function.
inline double sharp_constant_ball(int n) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("sharp_constant_ball: dimension out of range");
  const double lw = log_unit_ball_volume(n);
  const double en = ((n - 2.0) / (2.0 * (n - 1.0))) * std::log(static_cast<double>(n)) +
                    (1.0 - 1.0 / n - 1.0 / (2.0 * (n - 1.0))) * lw;
  return std::exp(en);
}

// Isoperimetric constant of the Euclidean unit ball, |B_1|^{1/n}/|dB_1|^{1/(n-1)}.
inline double isoperimetric_ball(int n) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("isoperimetric_ball: dimension out of range");
  const double lw = log_unit_ball_volume(n);
  return std::exp(-std::log(static_cast<double>(n)) / (n - 1.0) - lw / (static_cast<double>(n) * (n - 1.0)));
}

// Sharp constant Theta_2(B_1) for the harmonic-extension quotient;
// equals isoperimetric_ball(n)^{(n-2)/2}.
inline double theta2_ball(int n) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("theta2_ball: dimension out of range");
  const double lw = log_unit_ball_volume(n);
  const double lnw = std::log(static_cast<double>(n)) + lw;
  return std::exp(((n - 2.0) / (2.0 * n)) * lw - ((n - 2.0) / (2.0 * (n - 1.0))) * lnw);
}

// The three ball constants bundled per dimension. theta2_ball is exactly
// isoperimetric_ball^{(n-2)/2}.
struct SharpConstants {
  int n = 3;
  double e2_ball = 0.0;
  double theta2_ball = 0.0;
  double isoperimetric_ball = 0.0;
};

inline SharpConstants sharp_constants(int n) {
  return {n, sharp_constant_ball(n), theta2_ball(n), isoperimetric_ball(n)};
}

// Extremal pair for the half-space extension inequality, peaked at scale eps.
struct BubbleParams {
  double eps = 1.0;
  int n = 3;

  void validate() const {
    if (!(eps > 0.0)) throw std::invalid_argument("BubbleParams: eps must be positive");
    if (n < 3 || n > kMaxDim) throw std::invalid_argument("BubbleParams: dimension out of range");
  }
};

// f_eps(y) = (eps/(eps^2+|y|^2))^{n/2} on the flat boundary R^{n-1}.
inline double bubble_f(const BubbleParams& p, double abs_y) {
  p.validate();
  return std::pow(p.eps / (p.eps * p.eps + abs_y * abs_y), 0.5 * p.n);
}

inline double bubble_f(const BubbleParams& p, std::span<const double> y) {
  return bubble_f(p, euclidean_norm(y));
}

// g_eps(x) = (eps/((x_n+eps)^2+|x'|^2))^{(n+2)/2} on the closed half-space.
inline double bubble_g(const BubbleParams& p, std::span<const double> x) {
  p.validate();
  if (x.size() != static_cast<std::size_t>(p.n)) throw std::invalid_argument("bubble_g: point has wrong dimension");
  const double xn = x[p.n - 1];
  if (xn < 0.0) throw std::domain_error("bubble_g: point must lie in the closed upper half-space");
  double perp2 = 0.0;
  for (int i = 0; i + 1 < p.n; ++i) perp2 += x[i] * x[i];
  return std::pow(p.eps / ((xn + p.eps) * (xn + p.eps) + perp2), 0.5 * (p.n + 2.0));
}

inline double bubble_g_axis(const BubbleParams& p, double xn) {
  p.validate();
  if (xn < 0.0) throw std::domain_error("bubble_g_axis: height must be >= 0");
  return std::pow(p.eps / ((xn + p.eps) * (xn + p.eps)), 0.5 * (p.n + 2.0));
}

// Coefficients of the harmonic extension c1 |x|^{2-n} + c2 of two-level data
// (1 on dB_1, a on dB_r) to the annulus A_r.
struct AnnulusHarmonicCoeffs {
  double c1 = 0.0;
  double c2 = 1.0;
  double r = 0.0;
  double a = 1.0;
  int n = 3;

  double value(double t) const { return c1 * std::pow(t, 2.0 - n) + c2; }
};

inline AnnulusHarmonicCoeffs annulus_harmonic_coeffs(double r, double a, int n) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("annulus_harmonic_coeffs: dimension out of range");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("annulus_harmonic_coeffs: inner radius must lie in (0,1)");
  if (!(a > 0.0)) throw std::invalid_argument("annulus_harmonic_coeffs: inner boundary value must be positive");
  const double rn2 = ipow(r, n - 2);
  AnnulusHarmonicCoeffs c;
  c.c1 = rn2 * (a - 1.0) / (1.0 - rn2);
  c.c2 = (1.0 - a * rn2) / (1.0 - rn2);
  c.r = r;
  c.a = a;
  c.n = n;
  return c;
}

// Exact lower-bound functional
//   C_2(A_r) = n w (w (1-r^n) + (n w r^{n-1}/2)(1-r^2))
//              / ((w (1-r^n))^{(n+2)/(2n)} (n w (1+r^{n-1}))^{n/(2(n-1))}),
// with w = omega_n; r = 0 gives C_2(B_1) = E_2(B_1).
inline double annulus_C2_exact(double r, int n) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("annulus_C2_exact: dimension out of range");
  if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("annulus_C2_exact: radius must lie in [0,1)");
  const double w = unit_ball_volume(n);
  const double nw = n * w;
  const double vol = w * (1.0 - ipow(r, n));
  const double area = nw * (1.0 + ipow(r, n - 1));
  const double num = nw * (vol + 0.5 * nw * ipow(r, n - 1) * (1.0 - r * r));
  const double lden = ((n + 2.0) / (2.0 * n)) * std::log(vol) + (n / (2.0 * (n - 1.0))) * std::log(area);
  return num * std::exp(-lden);
}

// The two exact ingredients of the annulus Poisson test quotient.
inline double annulus_two_level_boundary_norm(double r, double a, int n, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("annulus_two_level_boundary_norm: exponent must be >= 1");
  return std::pow(sphere_area(n) * (1.0 + std::pow(a, p) * ipow(r, n - 1)), 1.0 / p);
}

// int_{A_r} P_2 f dx = omega_n ((n/2) c1 (1-r^2) + c2 (1-r^n)).
inline double annulus_poisson_mean_integral(double r, double a, int n) {
  const AnnulusHarmonicCoeffs c = annulus_harmonic_coeffs(r, a, n);
  return unit_ball_volume(n) * (0.5 * n * c.c1 * (1.0 - r * r) + c.c2 * (1.0 - ipow(r, n)));
}

// Duality surrogate int P_2 f / (|A_r|^{(n+2)/(2n)} ||f||), assembled from
// the closed forms above; exceeds Theta_2(B_1) for small r and suitable a>1.
inline double annulus_poisson_surrogate_exact(double r, double a, int n) {
  const double p = 2.0 * (n - 1.0) / (n - 2.0);
  const double vol = unit_ball_volume(n) * (1.0 - ipow(r, n));
  return annulus_poisson_mean_integral(r, a, n) /
         (std::pow(vol, (n + 2.0) / (2.0 * n)) * annulus_two_level_boundary_norm(r, a, n, p));
}

}  // namespace bext
