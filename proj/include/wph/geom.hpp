#pragma once

#include <complex>
#include <limits>
#include <variant>

namespace wph::geom {

using Complex = std::complex<double>;

/// Hyperbolic annulus with core geodesic {x = 0} of length ell.
/// Coordinates z = x + iy, |x| < π/(2 ell), y in [0, 1) periodic,
/// metric ell² sec²(ell x) |dz|².
class CylinderChart {
 public:
  explicit CylinderChart(double ell);

  [[nodiscard]] double ell() const { return ell_; }
  [[nodiscard]] double density(double x) const;
  /// Half-width π/(2 ell) of the complete annulus.
  [[nodiscard]] double half_width() const;
  /// Half-width (1/ell) sec⁻¹(1/ell) of the embedded collar; requires ell < 1.
  [[nodiscard]] double collar_half_width() const;

 private:
  double ell_;
};

/// Poincaré disk, metric 4|dz|²/(1 - |z|²)².
struct DiskChart {
  [[nodiscard]] double density(Complex z) const;
  /// Hyperbolic distance between two points.
  [[nodiscard]] static double distance(Complex a, Complex b);
};

/// Punctured unit disk with the cusp metric |z|⁻² (log 1/|z|)⁻² |dz|².
struct CuspChart {
  [[nodiscard]] double density(Complex z) const;
};

using ModelSurface = std::variant<CylinderChart, DiskChart, CuspChart>;

[[nodiscard]] double density(const ModelSurface& chart, Complex z);

/// True when z lies in the chart and at least `margin` (coordinate distance)
/// away from its boundary.
[[nodiscard]] bool contains(const ModelSurface& chart, Complex z, double margin = 0.0);

/// Gaussian curvature K = -(1/2G) Δ₀ log G by centred finite differences.
/// Throws DomainError if the stencil leaves the chart.
[[nodiscard]] double curvature_at(const ModelSurface& chart, Complex z, double h = 1e-4);

enum class CurveKind { ClosedCircle, Segment, InfiniteArc };

/// Arclength-parametrised model geodesic.
///   core circle (cylinder):   s in [0, ell),        point (0, s/ell)
///   disk ray at angle θ:      s in [0, ∞),          r = tanh(s/2)
///   cusp ray at angle θ:      s in (-∞, ∞),         r = exp(-e^s)
///   segment:                  s in [-L/2, L/2],     abstract arc
class GeodesicCurve {
 public:
  static GeodesicCurve core_circle(const CylinderChart& chart);
  static GeodesicCurve disk_ray(double angle);
  static GeodesicCurve cusp_ray(double angle);
  static GeodesicCurve segment(double length);
  /// Circle {x = x0} of a cylinder; a geodesic only for x0 = 0. Kept so that
  /// callers can ask for unsupported curves and get a clean error.
  static GeodesicCurve cylinder_circle(const CylinderChart& chart, double x0);

  [[nodiscard]] const ModelSurface& chart() const { return chart_; }
  [[nodiscard]] CurveKind kind() const { return kind_; }
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] double angle() const { return angle_; }
  [[nodiscard]] double offset() const { return offset_; }
  [[nodiscard]] bool periodic() const { return kind_ == CurveKind::ClosedCircle; }
  /// False for curves built by cylinder_circle with x0 != 0.
  [[nodiscard]] bool is_model_geodesic() const;
  [[nodiscard]] Complex point_at(double s) const;

 private:
  GeodesicCurve(ModelSurface chart, CurveKind kind, double length, double angle, double offset)
      : chart_(chart), kind_(kind), length_(length), angle_(angle), offset_(offset) {}

  ModelSurface chart_;
  CurveKind kind_;
  double length_;
  double angle_;
  double offset_;
};

/// Distance along the curve: min(|s-t|, L-|s-t|) on closed curves, |s-t| otherwise.
[[nodiscard]] double geodesic_distance(const GeodesicCurve& curve, double s, double t);

/// Length of the circle {x = x0} on the cylinder by quadrature.
[[nodiscard]] double circle_length(const CylinderChart& chart, double x0);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace wph::geom
