#include "wph/thurston.hpp"

#include <cmath>
#include <numbers>

#include "wph/elliptic.hpp"
#include "wph/errors.hpp"
#include "wph/quadrature.hpp"

namespace wph::thurston {
namespace {

using std::numbers::pi;

void require_disk(const QuadDiff& phi) {
  if (!std::holds_alternative<geom::DiskChart>(phi.chart())) throw InputError("flow correlation lives on the disk");
}

// Bound for |φ| on the closed unit disk.
double coefficient_bound(const QuadDiff& phi) {
  const auto& rep = phi.representation();
  if (const auto* poly = std::get_if<qdiff::DiskPolynomial>(&rep)) {
    double m = 0.0;
    for (const auto& a : poly->coeffs) m += std::abs(a);
    return m;
  }
  if (const auto* c = std::get_if<qdiff::Constant>(&rep)) return std::abs(c->c);
  throw InputError("flow correlation needs a polynomial differential");
}

}  // namespace

double fiber_average_first_variation(const QuadDiff& phi, Complex p, int n_theta) {
  require_disk(phi);
  const Complex v = phi.phi(p) / geom::density(phi.chart(), p);
  double sum = 0.0;
  for (int k = 0; k < n_theta; ++k) sum += (std::polar(1.0, 4.0 * pi * k / n_theta) * v).real();
  return sum / n_theta;
}

Complex recentered_phi(const QuadDiff& phi, Complex p, Complex w) {
  const Complex den = 1.0 + std::conj(p) * w;
  const Complex T = (w + p) / den;
  const Complex dT = (1.0 - std::norm(p)) / (den * den);
  return phi.phi(T) * dT * dT;
}

double flow_correlation_I2(const FlowCorrelation& fc) {
  require_disk(fc.phi);
  if (!geom::contains(fc.phi.chart(), fc.p)) throw DomainError("base point outside the disk");
  const double m = coefficient_bound(fc.phi);
  // Transported coefficients are bounded by m (1 + |p|)²/(1 - |p|)² on the disk.
  const double mp = m * std::pow((1.0 + std::abs(fc.p)) / (1.0 - std::abs(fc.p)), 2);
  const double tail = std::exp(-fc.t_max) * mp * mp / 16.0;
  if (tail > fc.tail_tol) {
    throw TruncationError("flow time t_max = " + std::to_string(fc.t_max) + " leaves a tail of order " +
                          std::to_string(tail));
  }
  const Complex a0 = recentered_phi(fc.phi, fc.p, 0.0);
  const auto grid = quad::composite_gl(0.0, fc.t_max, fc.t_panels, fc.order);
  double total = 0.0;
  for (int k = 0; k < fc.n_theta; ++k) {
    const double theta = 2.0 * pi * k / fc.n_theta;
    const Complex rot = std::polar(1.0, 2.0 * theta);
    const double base = (rot * a0).imag() / 4.0;
    if (base == 0.0) continue;
    double inner = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double t = grid.nodes[j];
      const double r = std::tanh(0.5 * t);
      const double s = 1.0 / std::cosh(0.5 * t);
      // 1/g(r) = (1 - r²)²/4 = sech⁴(t/2)/4.
      inner += grid.weights[j] * std::exp(-t) * (rot * recentered_phi(fc.phi, fc.p, std::polar(r, theta))).imag() *
               s * s * s * s / 4.0;
    }
    total += base * inner;
  }
  return total / fc.n_theta;
}

double constant_function_identity(double ell) {
  geom::CylinderChart chart(ell);
  // (Δ_g - 2)u = -2 is u'' - 2g u = -2g; times cos²(ell x) the source is -2ell².
  const auto prof =
      elliptic::solve_rotational_scaled(chart, [ell](double) { return -2.0 * ell * ell; }, elliptic::Bounded{});
  return prof.at_center();
}

double half_angle_average(Complex a, Complex b, int n_theta) {
  double sum = 0.0;
  for (int k = 0; k < n_theta; ++k) {
    const Complex rot = std::polar(1.0, 4.0 * pi * k / n_theta);
    sum += (rot * a).imag() * (rot * b).imag();
  }
  return sum / n_theta;
}

double radial_constant() {
  return quad::integrate([](double r) { return 2.0 * (1.0 - r) * (1.0 - r); }, 0.0, 1.0, 1, 8);
}

ThurstonRatio thurston_ratio(const QuadDiff& phi, Complex p, double t_max) {
  require_disk(phi);
  ThurstonRatio out;
  if (phi.is_zero()) return out;
  const double collapse = constant_function_identity();
  auto at = [&](Complex q, double& i1, double& i2, double& w) {
    w = phi.norm_sq(q);
    i1 = collapse * w;
    FlowCorrelation fc{phi, q, t_max};
    i2 = flow_correlation_I2(fc);
  };
  at(p, out.i1, out.i2, out.wp_density);
  if (out.wp_density > 1e-14 * std::pow(coefficient_bound(phi), 2)) {
    out.ratio = (out.i1 + out.i2) / out.wp_density;
    return out;
  }
  // φ(p) = 0: average numerator and denominator over an annulus around p.
  out.averaged = true;
  out.i1 = out.i2 = out.wp_density = 0.0;
  const double rmax = 1.0 - std::abs(p);
  for (double rho : {0.15, 0.3, 0.45}) {
    for (int k = 0; k < 8; ++k) {
      const Complex q = p + std::polar(rho * rmax, 2.0 * pi * (k + 0.5) / 8.0);
      double i1, i2, w;
      at(q, i1, i2, w);
      out.i1 += i1;
      out.i2 += i2;
      out.wp_density += w;
    }
  }
  out.ratio = (out.i1 + out.i2) / out.wp_density;
  return out;
}

}  // namespace wph::thurston
