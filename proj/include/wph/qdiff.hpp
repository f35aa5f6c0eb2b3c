#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "wph/geom.hpp"

namespace wph::qdiff {

using Complex = std::complex<double>;
using geom::GeodesicCurve;
using geom::ModelSurface;

/// φ ≡ c (cylinder or disk).
struct Constant {
  Complex c;
};

/// One term A e^{2πnz} + B e^{-2πnz} of a cylinder differential. For n = 0
/// the term is the constant A + B.
struct FourierMode {
  int n = 0;
  Complex A;
  Complex B;
};

struct CylinderFourier {
  std::vector<FourierMode> modes;
};

/// φ(z) = Σ a_k z^k on the disk.
struct DiskPolynomial {
  std::vector<Complex> coeffs;
};

/// φ(z) = double_pole/z² + c/z + Σ tail_k z^k on the cusp chart.
/// A non-zero double_pole is not integrable; it exists so that the pairing's
/// divergence check has something to reject.
struct CuspPrincipal {
  Complex c;
  std::vector<Complex> tail;
  Complex double_pole{0.0, 0.0};
};

using Representation = std::variant<Constant, CylinderFourier, DiskPolynomial, CuspPrincipal>;

/// Holomorphic quadratic differential φ(z) dz² in closed form.
class QuadDiff {
 public:
  QuadDiff(ModelSurface chart, Representation rep);

  [[nodiscard]] const ModelSurface& chart() const { return chart_; }
  [[nodiscard]] const Representation& representation() const { return rep_; }
  [[nodiscard]] std::string kind_name() const;

  /// Coefficient φ(z) in the chart coordinate.
  [[nodiscard]] Complex phi(Complex z) const;
  /// Complex derivative φ'(z).
  [[nodiscard]] Complex dphi(Complex z) const;
  /// Beltrami differential μ = conj(φ)/g.
  [[nodiscard]] Complex mu(Complex z) const;
  /// Pointwise ‖Φ‖² = |φ|²/g².
  [[nodiscard]] double norm_sq(Complex z) const;

  /// Cylinder only: y-Fourier coefficients at abscissa x, keyed by frequency.
  [[nodiscard]] std::map<int, Complex> frequency_profile(double x) const;
  /// Cylinder only: ∫₀¹ |φ(x + iy)|² dy (Parseval, exact).
  [[nodiscard]] double line_norm_sq(double x) const;
  /// Cylinder only: the frequency-zero coefficient a₀ (constant in x).
  [[nodiscard]] Complex mode_zero() const;
  /// Cylinder only: ∮_{x = x0} φ dy by the periodic trapezoid rule.
  [[nodiscard]] Complex period(double x0, int samples = 64) const;
  /// Largest |frequency| present (cylinder), 0 otherwise.
  [[nodiscard]] int max_frequency() const;

  [[nodiscard]] QuadDiff scaled(Complex factor) const;
  [[nodiscard]] bool is_zero() const;

  friend QuadDiff operator+(const QuadDiff& a, const QuadDiff& b);

 private:
  ModelSurface chart_;
  Representation rep_;
};

/// Finite-difference Cauchy-Riemann residual |∂φ/∂z̄| at z.
[[nodiscard]] double dbar_residual(const QuadDiff& phi, Complex z, double h = 1e-5);

enum class FieldKind { ImPhiOverG, RePhiOverG, NormPhiSq, JacobiU, VariationV };

[[nodiscard]] std::string to_string(FieldKind kind);

/// Real function sampled at uniform arclength spacing along a geodesic.
/// Closed curves carry n + 1 samples with the last equal to the first.
struct FieldOnGeodesic {
  GeodesicCurve curve = GeodesicCurve::segment(1.0);
  FieldKind kind = FieldKind::ImPhiOverG;
  std::vector<double> s;
  std::vector<double> values;

  [[nodiscard]] double spacing() const { return s.size() > 1 ? s[1] - s[0] : 0.0; }
  /// Samples of one period without the duplicated endpoint (closed curves).
  [[nodiscard]] std::vector<double> period_values() const;
  [[nodiscard]] double max_abs() const;
};

/// Φ/g in the frame adapted to the geodesic at arclength s. The real part
/// integrates to the first variation, the imaginary part is 𝓕 = Im Φ/g.
///   cylinder core:  φ(i s/ell) / ell²
///   disk ray θ:     e^{2iθ} φ(re^{iθ}) / g
///   cusp ray θ:     -e^{2iθ} φ(re^{iθ}) / g  (frame where the ray is vertical)
[[nodiscard]] Complex adapted_value(const QuadDiff& phi, const GeodesicCurve& curve, double s);

/// Closed curves: n intervals over one period. Open curves: n intervals over [s0, s1].
[[nodiscard]] FieldOnGeodesic restrict_im_over_g(const QuadDiff& phi, const GeodesicCurve& curve, int n,
                                                  double s0 = 0.0, double s1 = 0.0);
[[nodiscard]] FieldOnGeodesic restrict_re_over_g(const QuadDiff& phi, const GeodesicCurve& curve, int n,
                                                  double s0 = 0.0, double s1 = 0.0);
[[nodiscard]] FieldOnGeodesic restrict_normsq(const QuadDiff& phi, const GeodesicCurve& curve, int n,
                                               double s0 = 0.0, double s1 = 0.0);

struct PairingOptions {
  /// Disk: truncation radius.
  double disk_radius = 1.0 - 1e-3;
  /// Disk: Richardson-extrapolate in the truncation radius.
  bool richardson = true;
  /// Cusp: integrate log(1/r) over [0, cusp_depth].
  double cusp_depth = 40.0;
  /// Relative size of the deepest half of the cusp integral above which the
  /// integral is declared divergent.
  double divergence_tol = 1e-6;
  int radial_panels = 64;
  int order = 16;
  int angular_samples = 64;
};

/// Re ∬ φ conj(ψ) / g dx dy over the chart's (truncated) fundamental domain.
[[nodiscard]] double wp_pairing(const QuadDiff& phi, const QuadDiff& psi, const PairingOptions& opts = {});

}  // namespace wph::qdiff
