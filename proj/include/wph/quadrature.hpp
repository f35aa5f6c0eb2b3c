#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wph::quad {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule of the given order (order >= 1). Thread-safe.
const GaussLegendre& gauss_legendre(int order);

/// Nodes and weights of a composite rule over [a, b].
struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
  [[nodiscard]] double integrate(std::span<const double> values) const;
};

/// Composite Gauss-Legendre over [a, b] split into `panels` equal panels.
Grid composite_gl(double a, double b, int panels, int order);

/// Composite Gauss-Legendre with panel edges at every breakpoint in (a, b)
/// and each sub-interval split into panels no longer than `max_panel`.
Grid composite_gl(double a, double b, std::span<const double> breakpoints, double max_panel, int order);

/// Integrate a function over [a, b] with composite Gauss-Legendre.
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 16, int order = 32);

/// Periodic trapezoid rule on n uniform samples of one period (no duplicate endpoint).
double trapezoid_periodic(std::span<const double> values, double period);

}  // namespace wph::quad
