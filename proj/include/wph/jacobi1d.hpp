#pragma once

#include <functional>
#include <string>
#include <vector>

#include "wph/qdiff.hpp"

// The operator d²/dy² - 1 along a geodesic: Green's kernels, solvers for
// U'' - U = -F, and three routes to the energy ∫ U'² + U².
namespace wph::jacobi {

using qdiff::FieldOnGeodesic;

enum class Topology { Circle, Segment, Line };

/// Closed-form kernel K with K'' - K = δ.
///   circle:  -cosh(d - L/2) / (2 sinh(L/2)),  d the circle distance
///   segment: -[cosh(L - |y-s|) - cosh(y+s)] / (2 sinh L) on [-L/2, L/2]
///   line:    -e^{-|y-s|} / 2
class GreenKernel {
 public:
  static GreenKernel circle(double length);
  static GreenKernel segment(double length);
  static GreenKernel line();

  [[nodiscard]] Topology topology() const { return topology_; }
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] double operator()(double y, double s) const;
  /// ∂K/∂y.
  [[nodiscard]] double dy(double y, double s) const;

 private:
  GreenKernel(Topology t, double length) : topology_(t), length_(length) {}
  Topology topology_;
  double length_;
};

[[nodiscard]] inline double kernel_eval(const GreenKernel& k, double s, double t) { return k(s, t); }

enum class Method { Spectral, Kernel };

[[nodiscard]] std::string to_string(Method m);

struct JacobiSolution {
  FieldOnGeodesic U;
  FieldOnGeodesic Uy;
  double energy = 0.0;
  Method method = Method::Spectral;
  /// Segment problems: coefficients of cosh y and sinh y fitted to the
  /// boundary values.
  double a = 0.0;
  double b = 0.0;
  /// Segment problems: Gauss-Legendre grid the energy was integrated on.
  std::vector<double> quad_nodes;
  std::vector<double> quad_weights;
  std::vector<double> quad_U;
  std::vector<double> quad_Uy;
};

struct PeriodicOptions {
  /// Kernel backend: longest Gauss-Legendre panel in the lag variable.
  double max_panel = 0.25;
  int order = 16;
};

/// Periodic solution of U'' - U = -F on a closed geodesic. F must be
/// sampled uniformly over one period (n + 1 samples, last = first).
[[nodiscard]] JacobiSolution solve_periodic(const FieldOnGeodesic& F, Method method = Method::Spectral,
                                            const PeriodicOptions& opts = {});

/// Boundary data for solve_segment.
struct SegmentBoundary {
  double left = 0.0;
  double right = 0.0;
};

struct SegmentOptions {
  double max_panel = 0.5;
  int order = 16;
  /// Uniform samples exported in JacobiSolution::U / Uy.
  int samples = 256;
  /// Extra breakpoints where the source is only C¹ (e.g. glued pieces).
  std::vector<double> breakpoints;
};

/// Solution of U'' - U = -F on [-L/2, L/2] with U(±L/2) given: particular
/// part from the segment kernel plus a cosh y + b sinh y.
[[nodiscard]] JacobiSolution solve_segment(const std::function<double(double)>& F, double length,
                                           SegmentBoundary bc, const SegmentOptions& opts = {});

/// ∫ U_y² + U² by the quadrature matching the solution's grid.
[[nodiscard]] double energy(const JacobiSolution& sol);

/// ∫ U F over a closed curve (periodic trapezoid).
[[nodiscard]] double integral_uf(const JacobiSolution& sol, const FieldOnGeodesic& F);

/// (1 / (2 sinh(L/2))) ∬ F(p) cosh(d(p,q) - L/2) F(q) ds ds by direct quadrature.
[[nodiscard]] double second_term_kernel(const FieldOnGeodesic& F, const PeriodicOptions& opts = {});

/// Polarised form of the above for two fields on the same circle.
[[nodiscard]] double second_term_kernel(const FieldOnGeodesic& F, const FieldOnGeodesic& G,
                                        const PeriodicOptions& opts = {});

/// max |U'' - U + F| with U'' by spectral differentiation (closed curves).
[[nodiscard]] double green_residual(const JacobiSolution& sol, const FieldOnGeodesic& F);

/// (1/2) ∬ e^{-|s-y|} F(s) F(y) ds dy over [-half, half]², F negligible outside.
[[nodiscard]] double line_kernel_energy(const std::function<double(double)>& F, double half_width,
                                        double max_panel = 0.5, int order = 16,
                                        const std::vector<double>& breakpoints = {});

}  // namespace wph::jacobi
