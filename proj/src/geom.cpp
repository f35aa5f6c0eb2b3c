#include "wph/geom.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wph/errors.hpp"
#include "wph/quadrature.hpp"

namespace wph::geom {

using std::numbers::pi;

CylinderChart::CylinderChart(double ell) : ell_(ell) {
  if (!(ell > 0.0) || !std::isfinite(ell)) throw DomainError("cylinder core length must be positive");
}

double CylinderChart::density(double x) const {
  if (std::abs(x) >= half_width()) throw DomainError("x outside the annulus");
  const double sec = 1.0 / std::cos(ell_ * x);
  return ell_ * ell_ * sec * sec;
}

double CylinderChart::half_width() const { return pi / (2.0 * ell_); }

double CylinderChart::collar_half_width() const {
  if (ell_ >= 1.0) throw DomainError("collar width needs ell < 1");
  return std::acos(ell_) / ell_;
}

double DiskChart::density(Complex z) const {
  const double r2 = std::norm(z);
  if (r2 >= 1.0) throw DomainError("point outside the unit disk");
  const double d = 1.0 - r2;
  return 4.0 / (d * d);
}

double DiskChart::distance(Complex a, Complex b) {
  const double ratio = std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
  return 2.0 * std::atanh(ratio);
}

double CuspChart::density(Complex z) const {
  const double r = std::abs(z);
  if (!(r > 0.0) || r >= 1.0) throw DomainError("point outside the punctured disk");
  const double lg = std::log(r);
  return 1.0 / (r * r * lg * lg);
}

double density(const ModelSurface& chart, Complex z) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CylinderChart>) {
          return c.density(z.real());
        } else {
          return c.density(z);
        }
      },
      chart);
}

bool contains(const ModelSurface& chart, Complex z, double margin) {
  return std::visit(
      [&](const auto& c) -> bool {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, CylinderChart>) {
          return std::abs(z.real()) + margin < c.half_width();
        } else if constexpr (std::is_same_v<T, DiskChart>) {
          return std::abs(z) + margin < 1.0;
        } else {
          const double r = std::abs(z);
          return r - margin > 0.0 && r + margin < 1.0;
        }
      },
      chart);
}

double curvature_at(const ModelSurface& chart, Complex z, double h) {
  if (!contains(chart, z, 2.0 * h)) {
    throw DomainError("curvature stencil leaves the chart at z = " + std::to_string(z.real()) + " + " +
                      std::to_string(z.imag()) + "i");
  }
  auto lg = [&](Complex w) { return std::log(density(chart, w)); };
  // Fourth-order five-point second differences in each direction.
  auto d2 = [&](Complex dir) {
    return (-lg(z + 2.0 * h * dir) + 16.0 * lg(z + h * dir) - 30.0 * lg(z) + 16.0 * lg(z - h * dir) -
            lg(z - 2.0 * h * dir)) /
           (12.0 * h * h);
  };
  const double lap = d2(Complex(1.0, 0.0)) + d2(Complex(0.0, 1.0));
  return -lap / (2.0 * density(chart, z));
}

GeodesicCurve GeodesicCurve::core_circle(const CylinderChart& chart) {
  return {chart, CurveKind::ClosedCircle, chart.ell(), 0.0, 0.0};
}

GeodesicCurve GeodesicCurve::disk_ray(double angle) { return {DiskChart{}, CurveKind::InfiniteArc, kInf, angle, 0.0}; }

GeodesicCurve GeodesicCurve::cusp_ray(double angle) { return {CuspChart{}, CurveKind::InfiniteArc, kInf, angle, 0.0}; }

GeodesicCurve GeodesicCurve::segment(double length) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InputError("segment length must be positive and finite");
  return {CuspChart{}, CurveKind::Segment, length, 0.0, 0.0};
}

GeodesicCurve GeodesicCurve::cylinder_circle(const CylinderChart& chart, double x0) {
  if (std::abs(x0) >= chart.half_width()) throw DomainError("circle outside the annulus");
  return {chart, CurveKind::ClosedCircle, chart.ell() / std::cos(chart.ell() * x0), 0.0, x0};
}

bool GeodesicCurve::is_model_geodesic() const { return offset_ == 0.0; }

Complex GeodesicCurve::point_at(double s) const {
  const Complex dir = std::polar(1.0, angle_);
  if (std::holds_alternative<CylinderChart>(chart_)) {
    const double y = s / length_;
    return {offset_, y - std::floor(y)};
  }
  if (std::holds_alternative<DiskChart>(chart_)) {
    if (s < 0.0) throw DomainError("disk ray is parametrised by s >= 0");
    return std::tanh(0.5 * s) * dir;
  }
  if (kind_ == CurveKind::Segment) throw UnsupportedGeodesic("abstract segment has no chart embedding");
  return std::exp(-std::exp(s)) * dir;
}

double geodesic_distance(const GeodesicCurve& curve, double s, double t) {
  double d = std::abs(s - t);
  if (curve.periodic()) {
    const double len = curve.length();
    d = std::fmod(d, len);
    d = std::min(d, len - d);
  }
  return d;
}

double circle_length(const CylinderChart& chart, double x0) {
  const double sqrt_g = std::sqrt(chart.density(x0));
  return quad::integrate([&](double) { return sqrt_g; }, 0.0, 1.0, 4, 8);
}

}  // namespace wph::geom
