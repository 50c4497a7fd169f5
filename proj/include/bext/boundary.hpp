#pragma once

#include <cmath>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bext/geometry.hpp"
#include "bext/grids.hpp"

namespace bext {

// One value per boundary component; on the annulus the order is
// (outer, inner), matching DomainSpec::component_radius.
struct ComponentConstant {
  std::vector<double> values;
};

// Callable of (|y|, component). On spheres this collapses to one value per
// component; on the half-space window it is a genuine profile over the disc.
struct RadialProfile {
  std::function<double(double, int)> profile;
};

// Point samples on a surface grid (n = 3 only).
struct SampledSurface {
  SurfaceGrid grid;
  std::vector<double> values;
};

// Pointwise callable; internally resampled onto a surface grid, so n = 3.
struct ClosedFormBoundary {
  std::function<double(std::span<const double>)> fn;
  int resolution = 32;
};

struct BoundaryFunction {
  DomainSpec domain;
  std::variant<ComponentConstant, RadialProfile, SampledSurface, ClosedFormBoundary> data;

  static BoundaryFunction constant(const DomainSpec& dom, double v) {
    BoundaryFunction f{dom, ComponentConstant{std::vector<double>(dom.boundary_components(), v)}};
    f.validate();
    return f;
  }

  // Two-level annulus data: outer sphere value, inner sphere value.
  static BoundaryFunction two_level(const DomainSpec& dom, double outer, double inner) {
    if (dom.kind != DomainKind::Annulus)
      throw std::invalid_argument("BoundaryFunction::two_level: domain must be an annulus");
    BoundaryFunction f{dom, ComponentConstant{{outer, inner}}};
    f.validate();
    return f;
  }

  static BoundaryFunction radial_profile(const DomainSpec& dom, std::function<double(double, int)> profile) {
    BoundaryFunction f{dom, RadialProfile{std::move(profile)}};
    f.validate();
    return f;
  }

  static BoundaryFunction sampled(const DomainSpec& dom, SurfaceGrid grid, std::vector<double> values) {
    BoundaryFunction f{dom, SampledSurface{std::move(grid), std::move(values)}};
    f.validate();
    return f;
  }

  static BoundaryFunction closed_form(const DomainSpec& dom, std::function<double(std::span<const double>)> fn,
                                      int resolution = 32) {
    BoundaryFunction f{dom, ClosedFormBoundary{std::move(fn), resolution}};
    f.validate();
    return f;
  }

  void validate() const {
    domain.validate();
    if (const auto* cc = std::get_if<ComponentConstant>(&data)) {
      if (cc->values.size() != static_cast<std::size_t>(domain.boundary_components()))
        throw std::invalid_argument("BoundaryFunction: one value per boundary component required");
      for (double v : cc->values)
        if (!std::isfinite(v)) throw std::invalid_argument("BoundaryFunction: values must be finite");
    } else if (const auto* s = std::get_if<SampledSurface>(&data)) {
      if (domain.n != 3) throw unsupported_configuration("BoundaryFunction: sampled data exists only for n = 3");
      if (domain.kind != DomainKind::Ball)
        throw unsupported_configuration("BoundaryFunction: sampled data is supported on the ball");
      if (s->values.size() != s->grid.size())
        throw std::invalid_argument("BoundaryFunction: one sample per grid point required");
      for (double v : s->values)
        if (!std::isfinite(v)) throw std::invalid_argument("BoundaryFunction: samples must be finite");
    } else if (const auto* c = std::get_if<ClosedFormBoundary>(&data)) {
      if (domain.n != 3 || domain.kind != DomainKind::Ball)
        throw unsupported_configuration("BoundaryFunction: closed-form data is resampled on the n = 3 ball only");
      if (!c->fn) throw std::invalid_argument("BoundaryFunction: missing callable");
    } else if (const auto* p = std::get_if<RadialProfile>(&data)) {
      if (!p->profile) throw std::invalid_argument("BoundaryFunction: missing profile");
    }
  }

  // Spheres admit only rotation-invariant "radial" data, which is constant
  // per component; the half-space disc does not reduce this way.
  bool componentwise_constant() const {
    if (domain.kind == DomainKind::HalfSpaceWindow) return std::holds_alternative<ComponentConstant>(data);
    return std::holds_alternative<ComponentConstant>(data) || std::holds_alternative<RadialProfile>(data);
  }

  std::vector<double> component_values() const {
    if (const auto* cc = std::get_if<ComponentConstant>(&data)) return cc->values;
    if (const auto* p = std::get_if<RadialProfile>(&data)) {
      if (domain.kind == DomainKind::HalfSpaceWindow)
        throw unsupported_configuration("BoundaryFunction: disc profiles are not componentwise constant");
      std::vector<double> v(domain.boundary_components());
      for (int c = 0; c < domain.boundary_components(); ++c) v[c] = p->profile(domain.component_radius(c), c);
      return v;
    }
    throw unsupported_configuration("BoundaryFunction: representation has no component values");
  }

  // Materialize sampled data (resolves ClosedFormBoundary through a grid).
  SampledSurface as_sampled() const {
    if (const auto* s = std::get_if<SampledSurface>(&data)) return *s;
    if (const auto* c = std::get_if<ClosedFormBoundary>(&data)) {
      SampledSurface s;
      s.grid = surface_grid(domain.n, domain.component_radius(0), c->resolution);
      s.values.resize(s.grid.size());
      for (std::size_t i = 0; i < s.grid.size(); ++i) s.values[i] = c->fn(s.grid.points[i]);
      return s;
    }
    throw unsupported_configuration("BoundaryFunction: representation is not point-sampled");
  }

  bool nonnegative() const {
    if (componentwise_constant()) {
      for (double v : component_values())
        if (v < 0.0) return false;
      return true;
    }
    const SampledSurface s = as_sampled();
    for (double v : s.values)
      if (v < 0.0) return false;
    return true;
  }

  bool identically_zero() const {
    if (componentwise_constant()) {
      for (double v : component_values())
        if (v != 0.0) return false;
      return true;
    }
    const SampledSurface s = as_sampled();
    for (double v : s.values)
      if (v != 0.0) return false;
    return true;
  }
};

}  // namespace bext
