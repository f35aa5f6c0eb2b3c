#pragma once

#include <string>
#include <vector>

#include "wph/elliptic.hpp"
#include "wph/jacobi1d.hpp"
#include "wph/qdiff.hpp"

// The Weil-Petersson Hessian of geodesic length: first variation, the
// two-term second variation, its bounds, the cylinder family and the
// regularised Hessian of an arc between two cusps.
namespace wph::hessian {

using qdiff::Complex;
using qdiff::QuadDiff;

struct GridInfo {
  int n = 0;
  double tol = 0.0;
  std::vector<std::string> backends;
};

struct HessianReport {
  double first_term = 0.0;
  double second_term_energy = 0.0;
  double second_term_kernel = 0.0;
  double total = 0.0;
  double lower_bound_third = 0.0;
  double upper_bound = 0.0;
  double first_variation = 0.0;
  GridInfo grid;

  /// Empty when every report invariant holds, else a description of the first failure.
  [[nodiscard]] std::string invariant_failure(bool nonzero_input = true) const;
};

struct HessianOptions {
  /// Samples along the core geodesic.
  int samples = 256;
  elliptic::RadialOptions radial;
  jacobi::PeriodicOptions kernel;
  /// x-resolution of the search for sup ‖Φ‖² over the annulus.
  int sup_grid = 800;
  double tol = 1e-7;
};

/// ∫ Re Φ/g ds along a closed model geodesic.
[[nodiscard]] double first_variation(const QuadDiff& phi, const geom::GeodesicCurve& curve, int samples = 256);

/// Hessian of the core length of a cylinder in the direction Φ.
[[nodiscard]] HessianReport hessian_closed(const QuadDiff& phi, const HessianOptions& opts = {});

/// Components of the polarised form Hess[Φ, Ψ].
struct PolarHessian {
  double first_term = 0.0;
  double second_term_energy = 0.0;
  double second_term_kernel = 0.0;
  double total = 0.0;
};

[[nodiscard]] PolarHessian hessian_polar(const QuadDiff& phi, const QuadDiff& psi, const HessianOptions& opts = {});

/// sup over the annulus of ‖Φ‖² (grid search followed by local refinement).
[[nodiscard]] double sup_norm_sq(const QuadDiff& phi, int x_grid = 800);

/// ell · total >= (1/3) first_variation² - 1e-9.
[[nodiscard]] bool check_two_thirds_inequality(const HessianReport& report, double ell);

struct FamilyRow {
  double s = 0.0;
  double ell = 0.0;
  double dl_ds = 0.0;
  double d2l_ds2 = 0.0;
  double d2_sqrt_l = 0.0;
  double d2_l23 = 0.0;
  double formula_hess = 0.0;
};

struct FamilyScan {
  std::vector<FamilyRow> rows;
  /// ell ≈ kappa s² through the origin.
  double kappa = 0.0;
  double r2 = 0.0;
  /// ‖∂/∂ell‖²_WP · ell at each row; constant along the family.
  std::vector<double> norm_times_ell;
};

/// WP arclength reparametrisation of the family of cylinders, with
/// finite-difference and formula values of d²ell/ds².
[[nodiscard]] FamilyScan cylinder_family_scan(double ell0, double ell1, int steps);

/// WP arclength from ell = 0 to ell along the family.
[[nodiscard]] double family_arclength(double ell);

/// Two cusp tails joined by a unit band. Tail fields are the adapted
/// Im Φ/g along cusp rays at the given angles; inside |s| < 1/2 the field is
/// the cubic Hermite interpolant of the tail values and slopes.
class ArcModel {
 public:
  ArcModel(QuadDiff phi, double right_angle, double left_angle);

  [[nodiscard]] const QuadDiff& phi() const { return phi_; }
  /// F = Im Φ/g in the adapted frame; Im μ = -F.
  [[nodiscard]] double field(double s) const;
  [[nodiscard]] double field_derivative(double s) const;

 private:
  // Tail value and σ-derivative at depth σ >= 0 along the ray at `angle`.
  [[nodiscard]] double tail(double sigma, double angle) const;
  [[nodiscard]] double tail_slope(double sigma, double angle) const;

  QuadDiff phi_;
  double right_angle_;
  double left_angle_;
  double fl_, fr_, dl_, dr_;
};

struct ArcRow {
  double length = 0.0;
  double a = 0.0;
  double b = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  double energy = 0.0;
  double first_term = 0.0;
};

struct ArcResult {
  std::vector<ArcRow> rows;
  double line_energy = 0.0;
  /// Exponential decay rates of |a_n|, |b_n| in units of L_n/2.
  double a_rate = 0.0;
  double b_rate = 0.0;
  /// max |energy_n - energy_{n-1}| over rows with L_n >= 30.
  double cauchy_tail = 0.0;
};

struct ArcOptions {
  std::vector<double> lengths{10, 15, 20, 25, 30, 35, 40};
  double right_angle = 0.7853981633974483;
  double left_angle = 0.39269908169744816;
  double max_panel = 0.5;
  int order = 16;
};

[[nodiscard]] ArcResult hessian_arc(const QuadDiff& phi, const ArcOptions& opts = {});

}  // namespace wph::hessian
