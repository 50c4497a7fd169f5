#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bext {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Largest supported ambient dimension. The sharp-constant formulas raise
// n*omega_n to exponents like n/(2(n-1)); past this the naive powers shed
// accuracy, so higher dimensions are rejected outright.
inline constexpr int kMaxDim = 16;

struct singular_configuration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unsupported_configuration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// log |B_1| in R^n, kept in log form so powers of omega_n and n*omega_n can
// be assembled without overflow.
inline double log_unit_ball_volume(int n) {
  if (n < 1) throw std::invalid_argument("log_unit_ball_volume: invalid dimension " + std::to_string(n));
  return 0.5 * n * std::log(kPi) - std::lgamma(0.5 * n + 1.0);
}

// omega_n = |B_1|. Convention used throughout: |B_1| = omega_n and
// |S^{n-1}| = n*omega_n (so |A_r| = omega_n (1 - r^n)).
inline double unit_ball_volume(int n) { return std::exp(log_unit_ball_volume(n)); }

// x^k for small non-negative integer k.
inline double ipow(double x, int k) {
  double p = 1.0;
  for (double b = x; k > 0; k >>= 1, b *= b)
    if (k & 1) p *= b;
  return p;
}

// |S^{n-1}_rho| = n*omega_n*rho^{n-1}, the sphere of radius rho in R^n.
inline double sphere_area(int n, double rho = 1.0) {
  return n * unit_ball_volume(n) * ipow(rho, n - 1);
}

// Area of the unit sphere S^k sitting in R^{k+1}; area(S^0) = 2, which is
// what makes the polar reduction valid down to ambient dimension 2.
inline double unit_sphere_area(int k) {
  if (k < 0) throw std::invalid_argument("unit_sphere_area: negative sphere index");
  return std::exp(std::log(2.0) + 0.5 * (k + 1) * std::log(kPi) - std::lgamma(0.5 * (k + 1)));
}

using Point = std::vector<double>;

inline double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

enum class DomainKind { Ball, Annulus, HalfSpaceWindow };

// The three computational domains: the unit ball B_1 with boundary S^{n-1},
// the annulus A_r = B_1 \ B_r with boundary S^{n-1} u rS^{n-1}, and the
// truncated half-space B_R^+ whose data lives on the flat disc patch
// B_R^{n-1} in {x_n = 0}.
struct DomainSpec {
  DomainKind kind = DomainKind::Ball;
  int n = 3;
  double r = 0.0;  // inner radius, Annulus only
  double R = 0.0;  // truncation radius, HalfSpaceWindow only

  static DomainSpec ball(int n) {
    DomainSpec d{DomainKind::Ball, n, 0.0, 0.0};
    d.validate();
    return d;
  }
  static DomainSpec annulus(int n, double r) {
    DomainSpec d{DomainKind::Annulus, n, r, 0.0};
    d.validate();
    return d;
  }
  static DomainSpec half_space_window(int n, double R) {
    DomainSpec d{DomainKind::HalfSpaceWindow, n, 0.0, R};
    d.validate();
    return d;
  }

  void validate() const {
    if (n < 3) throw std::invalid_argument("DomainSpec: dimension must be >= 3");
    if (n > kMaxDim) throw std::invalid_argument("DomainSpec: dimension exceeds supported maximum 16");
    if (kind == DomainKind::Annulus && !(r > 0.0 && r < 1.0))
      throw std::invalid_argument("DomainSpec: annulus inner radius must lie in (0,1)");
    if (kind == DomainKind::HalfSpaceWindow && !(R > 0.0))
      throw std::invalid_argument("DomainSpec: half-space truncation radius must be positive");
  }

  int boundary_components() const { return kind == DomainKind::Annulus ? 2 : 1; }

  // Radius of boundary component c; component 0 is the outer sphere (or the
  // disc patch), component 1 the inner sphere of the annulus.
  double component_radius(int c) const {
    if (c < 0 || c >= boundary_components())
      throw std::invalid_argument("DomainSpec: no such boundary component");
    switch (kind) {
      case DomainKind::Ball: return 1.0;
      case DomainKind::Annulus: return c == 0 ? 1.0 : r;
      case DomainKind::HalfSpaceWindow: return R;
    }
    return 0.0;
  }

  double volume() const {
    switch (kind) {
      case DomainKind::Ball: return unit_ball_volume(n);
      case DomainKind::Annulus: return unit_ball_volume(n) * (1.0 - ipow(r, n));
      case DomainKind::HalfSpaceWindow: return 0.5 * unit_ball_volume(n) * ipow(R, n);
    }
    return 0.0;
  }

  // Total mass of the boundary carrying data: for the half-space window this
  // is the area of the flat patch B_R^{n-1}, not the hemispherical cap.
  double boundary_area() const {
    switch (kind) {
      case DomainKind::Ball: return sphere_area(n);
      case DomainKind::Annulus: return sphere_area(n) * (1.0 + ipow(r, n - 1));
      case DomainKind::HalfSpaceWindow: return unit_ball_volume(n - 1) * ipow(R, n - 1);
    }
    return 0.0;
  }

  bool same_shape(const DomainSpec& o) const {
    return kind == o.kind && n == o.n && r == o.r && R == o.R;
  }
};

}  // namespace bext
