#include "wph/jacobi1d.hpp"

#include <algorithm>
#include <cmath>

#include "wph/errors.hpp"
#include "wph/fourier.hpp"
#include "wph/quadrature.hpp"

namespace wph::jacobi {

GreenKernel GreenKernel::circle(double length) {
  if (!(length > 0.0)) throw InputError("circle length must be positive");
  return {Topology::Circle, length};
}

GreenKernel GreenKernel::segment(double length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InputError("segment length must be positive and finite");
  return {Topology::Segment, length};
}

GreenKernel GreenKernel::line() { return {Topology::Line, geom::kInf}; }

double GreenKernel::operator()(double y, double s) const {
  const double L = length_;
  switch (topology_) {
    case Topology::Circle: {
      double d = std::fmod(std::abs(y - s), L);
      d = std::min(d, L - d);
      return -std::cosh(d - 0.5 * L) / (2.0 * std::sinh(0.5 * L));
    }
    case Topology::Segment: {
      // Written with decaying exponentials so large L does not overflow.
      const double d = std::abs(y - s);
      const double denom = 1.0 - std::exp(-2.0 * L);
      const double far = std::exp(-d) + std::exp(d - 2.0 * L);
      const double sum = std::exp(y + s - L) + std::exp(-y - s - L);
      return -0.5 * (far - sum) / denom;
    }
    case Topology::Line:
      return -0.5 * std::exp(-std::abs(y - s));
  }
  return 0.0;
}

double GreenKernel::dy(double y, double s) const {
  const double L = length_;
  const double sign = (y > s) ? 1.0 : (y < s ? -1.0 : 0.0);
  switch (topology_) {
    case Topology::Circle: {
      double diff = std::fmod(y - s, L);
      if (diff < -0.5 * L) diff += L;
      if (diff > 0.5 * L) diff -= L;
      const double d = std::abs(diff);
      const double sg = (diff > 0) ? 1.0 : (diff < 0 ? -1.0 : 0.0);
      return -sg * std::sinh(d - 0.5 * L) / (2.0 * std::sinh(0.5 * L));
    }
    case Topology::Segment: {
      const double d = std::abs(y - s);
      const double denom = 1.0 - std::exp(-2.0 * L);
      const double far = std::exp(-d) - std::exp(d - 2.0 * L);
      const double sum = std::exp(y + s - L) - std::exp(-y - s - L);
      return 0.5 * (sign * far + sum) / denom;
    }
    case Topology::Line:
      return 0.5 * sign * std::exp(-std::abs(y - s));
  }
  return 0.0;
}

std::string to_string(Method m) { return m == Method::Spectral ? "spectral" : "kernel"; }

namespace {

void require_uniform_periodic(const FieldOnGeodesic& F) {
  if (!F.curve.periodic()) throw InputError("periodic solver needs a closed curve");
  if (F.s.size() < 3 || F.s.size() != F.values.size()) throw InputError("too few samples");
  const double L = F.curve.length();
  const auto n = F.s.size() - 1;
  const double h = L / static_cast<double>(n);
  for (std::size_t j = 0; j < F.s.size(); ++j) {
    if (std::abs(F.s[j] - F.s.front() - h * static_cast<double>(j)) > 1e-9 * std::max(1.0, L)) {
      throw InputError("samples are not uniform over one period");
    }
  }
}

FieldOnGeodesic make_field(const FieldOnGeodesic& like, qdiff::FieldKind kind, std::vector<double> period) {
  FieldOnGeodesic out{like.curve, kind, like.s, std::move(period)};
  if (out.curve.periodic()) out.values.push_back(out.values.front());
  return out;
}

// Lag integral ∫_{-L/2}^{L/2} w(τ) f(s_i + τ) dτ for every sample s_i, with
// f the trigonometric interpolant of the samples. Panels meet at τ = 0 where
// the kernels have their kink.
std::vector<double> lag_integral(const std::vector<double>& samples, double L, const std::function<double(double)>& w,
                                 const PeriodicOptions& opts) {
  const double zero[] = {0.0};
  const auto grid = quad::composite_gl(-0.5 * L, 0.5 * L, zero, opts.max_panel, opts.order);
  std::vector<double> out(samples.size(), 0.0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double weight = grid.weights[k] * w(grid.nodes[k]);
    const auto shifted = fourier::shifted(samples, L, grid.nodes[k]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += weight * shifted[i];
  }
  return out;
}

}  // namespace

JacobiSolution solve_periodic(const FieldOnGeodesic& F, Method method, const PeriodicOptions& opts) {
  require_uniform_periodic(F);
  const double L = F.curve.length();
  const auto f = F.period_values();
  std::vector<double> u;
  std::vector<double> uy;
  if (method == Method::Spectral) {
    u = fourier::apply_multiplier(f, L, [](double k) { return fourier::Complex(1.0 / (1.0 + k * k), 0.0); });
    uy = fourier::derivative(u, L, 1);
  } else {
    const double scale = 1.0 / (2.0 * std::sinh(0.5 * L));
    u = lag_integral(f, L, [&](double tau) { return scale * std::cosh(std::abs(tau) - 0.5 * L); }, opts);
    uy = lag_integral(
        f, L,
        [&](double tau) {
          const double sg = tau > 0 ? 1.0 : (tau < 0 ? -1.0 : 0.0);
          return -scale * sg * std::sinh(std::abs(tau) - 0.5 * L);
        },
        opts);
  }
  JacobiSolution sol;
  sol.U = make_field(F, qdiff::FieldKind::JacobiU, std::move(u));
  sol.Uy = make_field(F, qdiff::FieldKind::VariationV, std::move(uy));
  sol.method = method;
  sol.energy = energy(sol);
  return sol;
}

JacobiSolution solve_segment(const std::function<double(double)>& F, double length, SegmentBoundary bc,
                             const SegmentOptions& opts) {
  const auto kernel = GreenKernel::segment(length);
  const double half = 0.5 * length;
  JacobiSolution sol;
  sol.method = Method::Kernel;
  sol.a = (bc.left + bc.right) / (2.0 * std::cosh(half));
  sol.b = (bc.right - bc.left) / (2.0 * std::sinh(half));

  auto evaluate = [&](double y, double& u, double& uy) {
    std::vector<double> breaks = opts.breakpoints;
    breaks.push_back(y);
    const auto grid = quad::composite_gl(-half, half, breaks, opts.max_panel, opts.order);
    double pu = 0.0;
    double pd = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double s = grid.nodes[k];
      const double fs = F(s);
      pu += grid.weights[k] * kernel(y, s) * fs;
      pd += grid.weights[k] * kernel.dy(y, s) * fs;
    }
    u = -pu + sol.a * std::cosh(y) + sol.b * std::sinh(y);
    uy = -pd + sol.a * std::sinh(y) + sol.b * std::cosh(y);
  };

  const auto outer = quad::composite_gl(-half, half, opts.breakpoints, opts.max_panel, opts.order);
  sol.quad_nodes = outer.nodes;
  sol.quad_weights = outer.weights;
  sol.quad_U.resize(outer.size());
  sol.quad_Uy.resize(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) evaluate(outer.nodes[i], sol.quad_U[i], sol.quad_Uy[i]);

  const auto curve = geom::GeodesicCurve::segment(length);
  const int n = std::max(2, opts.samples);
  sol.U = FieldOnGeodesic{curve, qdiff::FieldKind::JacobiU, {}, {}};
  sol.Uy = FieldOnGeodesic{curve, qdiff::FieldKind::VariationV, {}, {}};
  for (int j = 0; j <= n; ++j) {
    const double y = (j == n) ? half : -half + length * j / n;
    double u = 0.0;
    double uy = 0.0;
    evaluate(y, u, uy);
    sol.U.s.push_back(y);
    sol.U.values.push_back(u);
    sol.Uy.s.push_back(y);
    sol.Uy.values.push_back(uy);
  }
  sol.energy = energy(sol);
  return sol;
}

double energy(const JacobiSolution& sol) {
  if (!sol.quad_nodes.empty()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sol.quad_nodes.size(); ++i) {
      sum += sol.quad_weights[i] * (sol.quad_U[i] * sol.quad_U[i] + sol.quad_Uy[i] * sol.quad_Uy[i]);
    }
    return sum;
  }
  const auto u = sol.U.period_values();
  const auto uy = sol.Uy.period_values();
  std::vector<double> density(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) density[i] = u[i] * u[i] + uy[i] * uy[i];
  return quad::trapezoid_periodic(density, sol.U.curve.length());
}

double integral_uf(const JacobiSolution& sol, const FieldOnGeodesic& F) {
  const auto u = sol.U.period_values();
  const auto f = F.period_values();
  if (u.size() != f.size()) throw InputError("solution and source grids differ");
  std::vector<double> prod(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) prod[i] = u[i] * f[i];
  return quad::trapezoid_periodic(prod, F.curve.length());
}

double second_term_kernel(const FieldOnGeodesic& F, const PeriodicOptions& opts) {
  return second_term_kernel(F, F, opts);
}

double second_term_kernel(const FieldOnGeodesic& F, const FieldOnGeodesic& G, const PeriodicOptions& opts) {
  require_uniform_periodic(F);
  require_uniform_periodic(G);
  if (F.s.size() != G.s.size() || F.curve.length() != G.curve.length()) {
    throw InputError("fields must share one grid");
  }
  const double L = F.curve.length();
  const auto f = F.period_values();
  const auto g = G.period_values();
  const double scale = 1.0 / (2.0 * std::sinh(0.5 * L));
  const double zero[] = {0.0};
  const auto lag = quad::composite_gl(-0.5 * L, 0.5 * L, zero, opts.max_panel, opts.order);
  const double h = L / static_cast<double>(f.size());
  double total = 0.0;
  for (std::size_t k = 0; k < lag.size(); ++k) {
    const auto shifted = fourier::shifted(g, L, lag.nodes[k]);
    double row = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) row += f[i] * shifted[i];
    total += lag.weights[k] * std::cosh(std::abs(lag.nodes[k]) - 0.5 * L) * row;
  }
  return scale * h * total;
}

double green_residual(const JacobiSolution& sol, const FieldOnGeodesic& F) {
  const auto u = sol.U.period_values();
  const auto f = F.period_values();
  const auto upp = fourier::derivative(u, F.curve.length(), 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(upp[i] - u[i] + f[i]));
  return worst;
}

double line_kernel_energy(const std::function<double(double)>& F, double half_width, double max_panel, int order,
                          const std::vector<double>& breakpoints) {
  const auto outer = quad::composite_gl(-half_width, half_width, breakpoints, max_panel, order);
  std::vector<double> fvals(outer.size());
  for (std::size_t i = 0; i < outer.size(); ++i) fvals[i] = F(outer.nodes[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < outer.size(); ++i) {
    if (fvals[i] == 0.0) continue;
    const double y = outer.nodes[i];
    std::vector<double> breaks = breakpoints;
    breaks.push_back(y);
    const auto inner = quad::composite_gl(-half_width, half_width, breaks, max_panel, order);
    double u = 0.0;
    for (std::size_t k = 0; k < inner.size(); ++k) {
      u += inner.weights[k] * 0.5 * std::exp(-std::abs(y - inner.nodes[k])) * F(inner.nodes[k]);
    }
    total += outer.weights[i] * fvals[i] * u;
  }
  return total;
}

}  // namespace wph::jacobi
