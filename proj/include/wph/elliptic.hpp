#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "wph/qdiff.hpp"

// Surface side of the Hessian: rotationally reduced solves of (Δ - 2)u = rhs
// on the cylinder, the subsolution inequality, collar decay, and the
// flat-parallel boundary value problem.
namespace wph::elliptic {

using geom::CylinderChart;
using qdiff::Complex;
using qdiff::QuadDiff;

/// u(-x_max) = left, u(x_max) = right.
struct Dirichlet {
  double x_max = 0.0;
  double left = 0.0;
  double right = 0.0;
};

/// Bounded on the complete annulus |x| < π/(2 ell).
struct Bounded {};

using RadialBoundary = std::variant<Dirichlet, Bounded>;

struct RadialOptions {
  /// Intervals of the coarse grid (even, so x = 0 is a node).
  int intervals = 4096;
  bool richardson = true;
};

/// Solution of u'' - 2 ell² sec²(ell x) u = rhs on a uniform grid.
struct RadialProfile {
  double ell = 1.0;
  RadialBoundary bc;
  std::vector<double> x;
  std::vector<double> u;

  [[nodiscard]] double x_max() const { return x.back(); }
  /// Cubic interpolation between nodes.
  [[nodiscard]] double value_at(double xq) const;
  [[nodiscard]] double at_center() const { return u[u.size() / 2]; }
  /// max |u'' - 2g u - rhs| over interior nodes, fourth-order differences.
  [[nodiscard]] double max_residual(const std::function<double(double)>& rhs) const;
};

/// rhs given directly. For Bounded the end values use the limit of
/// cos²(ell x)·rhs, evaluated just inside the ends.
[[nodiscard]] RadialProfile solve_rotational(const CylinderChart& chart, const std::function<double(double)>& rhs,
                                             RadialBoundary bc, const RadialOptions& opts = {});

/// Same equation, but the caller supplies cos²(ell x)·rhs(x), which stays
/// finite at the ends of the annulus.
[[nodiscard]] RadialProfile solve_rotational_scaled(const CylinderChart& chart,
                                                    const std::function<double(double)>& scaled_rhs,
                                                    RadialBoundary bc, const RadialOptions& opts = {});

/// Homogeneous solutions tan(ell x) and x tan(ell x) + 1/ell.
[[nodiscard]] double homogeneous_u1(double ell, double x);
[[nodiscard]] double homogeneous_u2(double ell, double x);

/// Variation-of-parameters solution at the given points (independent of the
/// finite-difference solver).
[[nodiscard]] std::vector<double> variation_of_parameters(const CylinderChart& chart,
                                                          const std::function<double(double)>& rhs,
                                                          RadialBoundary bc, const std::vector<double>& points);

/// u₁v₁ and u₂v₂ at x with v₁ = ∫₀ˣ u₂ rhs, v₂ = -∫₀ˣ u₁ rhs.
struct ParticularSplit {
  double u1v1 = 0.0;
  double u2v2 = 0.0;
};
[[nodiscard]] ParticularSplit particular_split(const CylinderChart& chart, const std::function<double(double)>& rhs,
                                               double x);

/// Bounded solution of (Δ - 2)u = -2 |Φ|²/g² (y-averaged) on the cylinder.
[[nodiscard]] RadialProfile first_term_profile(const QuadDiff& phi, const RadialOptions& opts = {});
/// Polarised version: rhs -2 Re(Φ conj Ψ)/g².
[[nodiscard]] RadialProfile first_term_profile(const QuadDiff& phi, const QuadDiff& psi,
                                               const RadialOptions& opts = {});

/// ∫ over the core circle of u₀ = ell · ū₀(0).
[[nodiscard]] double first_term(const QuadDiff& phi, const RadialOptions& opts = {});
[[nodiscard]] double first_term(const QuadDiff& phi, const QuadDiff& psi, const RadialOptions& opts = {});

struct SubsolutionResult {
  double min_gap = 0.0;
  double max_v = 0.0;
  int evaluated = 0;
  int skipped = 0;
};

struct SubsolutionOptions {
  double h = 1e-3;
  /// Skip points where ‖Φ‖² < zero_margin · max ‖Φ‖² over the samples.
  double zero_margin = 1e-4;
};

/// min over the points of Δ_g v + 4v with v = ‖Φ‖², Δ_g = (1/g)Δ₀.
[[nodiscard]] SubsolutionResult subsolution_gap(const QuadDiff& phi, const std::vector<Complex>& points,
                                                const SubsolutionOptions& opts = {});

inline constexpr double kCollarRate = 8.885765876316732;  // √8 π

struct DecayBound {
  double c0 = 0.0;
  double rate = kCollarRate;
  double x_max = 0.0;

  /// c0 cosh(rate x0) / cosh(rate x_max).
  [[nodiscard]] double operator()(double x0) const;
};

[[nodiscard]] DecayBound collar_decay_bound(double c0, const CylinderChart& chart);

struct CollarCheck {
  bool ok = true;
  DecayBound bound;
  /// max over the grid of ∫|Φ|² dy / bound(x0).
  double worst_ratio = 0.0;
};

/// Checks the cosh(√8π x) decay of ∫_{x = x0}|Φ|² across the collar.
/// Requires a zero period (a₀ = 0).
[[nodiscard]] CollarCheck verify_collar_decay(const QuadDiff& phi, int grid = 201);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least squares of log y against log x. Needs three or more points.
[[nodiscard]] LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

struct FlatParallelRow {
  double ell = 0.0;
  double x_max = 0.0;
  double u0 = 0.0;
  double integral = 0.0;  // ell · u(0)
  double u1v1 = 0.0;
  double particular = 0.0;  // u₁v₁ + u₂v₂ at x_max
};

struct FlatParallelResult {
  std::vector<FlatParallelRow> rows;
  LogLogFit u0_fit;
  LogLogFit integral_fit;
  /// Fit of |u₁v₁ / (u₁v₁ + u₂v₂)| at the collar boundary against ell.
  LogLogFit split_fit;
};

/// u'' - 2g u = D₃ cosh(√8π x) cos²(ell x), u(±X) = c0 on the collar, with
/// D₃ = c0 / (ell² cosh(√8π X)).
[[nodiscard]] FlatParallelRow flatparallel_solve(double ell, double c0 = 1.0);
[[nodiscard]] FlatParallelResult flatparallel_scaling(const std::vector<double>& ells, double c0 = 1.0);

/// max over radii and angles of ‖μ‖ / (r (log 1/r)²) on the cusp chart.
[[nodiscard]] double cusp_mu_decay(const QuadDiff& phi, const std::vector<double>& radii, int angles = 64);

/// Angular average of ‖Φ‖² on the circle |z| = exp(-2π y) of the cusp chart.
[[nodiscard]] double cusp_circle_normsq(const QuadDiff& phi, double y, int angles = 64);

/// Cusp tail of the first term in horocycle height y: y²u'' - 2u = -2v(y),
/// u(y_j) = cap, u bounded as y → ∞ (basis y², y⁻¹). Returns ∫_{y_j}^{y_end} u dy/y.
[[nodiscard]] double cusp_tail_first_term(const std::function<double(double)>& v, double y_junction, double y_end,
                                          double cap);

}  // namespace wph::elliptic
