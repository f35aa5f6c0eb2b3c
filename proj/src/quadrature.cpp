#include "wph/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "wph/errors.hpp"

namespace wph::quad {
namespace {

GaussLegendre build_rule(int order) {
  GaussLegendre rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const auto n = static_cast<unsigned>(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, x);
      const double pm1 = std::legendre(n - 1, x);
      dp = order * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = std::legendre(n, x);
    const double pm1 = std::legendre(n - 1, x);
    dp = order * (x * p - pm1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  return rule;
}

void append_panel(Grid& grid, double a, double b, const GaussLegendre& rule) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    grid.nodes.push_back(mid + half * rule.nodes[k]);
    grid.weights.push_back(half * rule.weights[k]);
  }
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw InputError("Gauss-Legendre order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) {
    if (order == 1) {
      it = cache.emplace(order, GaussLegendre{{0.0}, {2.0}}).first;
    } else {
      it = cache.emplace(order, build_rule(order)).first;
    }
  }
  return it->second;
}

double Grid::integrate(std::span<const double> values) const {
  if (values.size() != weights.size()) throw InputError("grid/value size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += weights[i] * values[i];
  return sum;
}

Grid composite_gl(double a, double b, int panels, int order) {
  if (panels < 1) throw InputError("composite rule needs at least one panel");
  const auto& rule = gauss_legendre(order);
  Grid grid;
  grid.nodes.reserve(static_cast<std::size_t>(panels) * order);
  grid.weights.reserve(static_cast<std::size_t>(panels) * order);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = (p + 1 == panels) ? b : a + (p + 1) * h;
    append_panel(grid, lo, hi, rule);
  }
  return grid;
}

Grid composite_gl(double a, double b, std::span<const double> breakpoints, double max_panel, int order) {
  std::vector<double> edges{a};
  std::vector<double> inner(breakpoints.begin(), breakpoints.end());
  std::sort(inner.begin(), inner.end());
  for (double x : inner) {
    if (x > a && x < b && x - edges.back() > 1e-14) edges.push_back(x);
  }
  edges.push_back(b);
  const auto& rule = gauss_legendre(order);
  Grid grid;
  for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
    const double len = edges[e + 1] - edges[e];
    const int panels = std::max(1, static_cast<int>(std::ceil(len / max_panel - 1e-12)));
    const double h = len / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = edges[e] + p * h;
      const double hi = (p + 1 == panels) ? edges[e + 1] : edges[e] + (p + 1) * h;
      append_panel(grid, lo, hi, rule);
    }
  }
  return grid;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order) {
  const Grid grid = composite_gl(a, b, panels, order);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) sum += grid.weights[i] * f(grid.nodes[i]);
  return sum;
}

double trapezoid_periodic(std::span<const double> values, double period) {
  if (values.empty()) return 0.0;
  const double sum = std::accumulate(values.begin(), values.end(), 0.0);
  return sum * period / static_cast<double>(values.size());
}

}  // namespace wph::quad
