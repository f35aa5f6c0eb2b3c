#include "wph/qdiff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wph/errors.hpp"
#include "wph/quadrature.hpp"

namespace wph::qdiff {

using std::numbers::pi;
using geom::CuspChart;
using geom::CylinderChart;
using geom::DiskChart;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Complex poly_eval(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex poly_deriv(const std::vector<Complex>& coeffs, Complex z) {
  Complex acc(0.0, 0.0);
  for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * z + static_cast<double>(k) * coeffs[k];
  return acc;
}

const CylinderChart& require_cylinder(const ModelSurface& chart) {
  if (const auto* c = std::get_if<CylinderChart>(&chart)) return *c;
  throw InputError("operation is defined on the cylinder chart only");
}

CylinderFourier as_fourier(const Representation& rep) {
  if (const auto* f = std::get_if<CylinderFourier>(&rep)) return *f;
  if (const auto* c = std::get_if<Constant>(&rep)) return CylinderFourier{{FourierMode{0, c->c, {}}}};
  throw InputError("representation is not a cylinder differential");
}

std::vector<Complex> as_poly(const Representation& rep) {
  if (const auto* p = std::get_if<DiskPolynomial>(&rep)) return p->coeffs;
  if (const auto* c = std::get_if<Constant>(&rep)) return {c->c};
  throw InputError("representation is not a disk differential");
}

std::vector<Complex> add_coeffs(std::vector<Complex> a, const std::vector<Complex>& b) {
  if (b.size() > a.size()) a.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) a[k] += b[k];
  return a;
}

}  // namespace

QuadDiff::QuadDiff(ModelSurface chart, Representation rep) : chart_(chart), rep_(std::move(rep)) {
  const bool ok = std::visit(
      overloaded{
          [&](const Constant&) { return !std::holds_alternative<CuspChart>(chart_); },
          [&](const CylinderFourier& f) {
            return std::holds_alternative<CylinderChart>(chart_) &&
                   std::all_of(f.modes.begin(), f.modes.end(), [](const FourierMode& m) { return m.n >= 0; });
          },
          [&](const DiskPolynomial&) { return std::holds_alternative<DiskChart>(chart_); },
          [&](const CuspPrincipal&) { return std::holds_alternative<CuspChart>(chart_); },
      },
      rep_);
  if (!ok) throw InputError("quadratic differential representation does not match its chart");
}

std::string QuadDiff::kind_name() const {
  return std::visit(overloaded{[](const Constant&) { return std::string("constant"); },
                               [](const CylinderFourier&) { return std::string("fourier"); },
                               [](const DiskPolynomial&) { return std::string("poly"); },
                               [](const CuspPrincipal&) { return std::string("cusp"); }},
                    rep_);
}

Complex QuadDiff::phi(Complex z) const {
  return std::visit(overloaded{[](const Constant& c) { return c.c; },
                               [&](const CylinderFourier& f) {
                                 Complex acc(0.0, 0.0);
                                 for (const auto& m : f.modes) {
                                   const Complex e = std::exp(2.0 * pi * m.n * z);
                                   acc += m.A * e + m.B / e;
                                 }
                                 return acc;
                               },
                               [&](const DiskPolynomial& p) { return poly_eval(p.coeffs, z); },
                               [&](const CuspPrincipal& p) {
                                 // Polar inverse: std::complex division squares |z| and underflows deep in the cusp.
                                 const Complex inv = std::polar(1.0 / std::abs(z), -std::arg(z));
                                 return p.double_pole * inv * inv + p.c * inv + poly_eval(p.tail, z);
                               }},
                    rep_);
}

Complex QuadDiff::dphi(Complex z) const {
  return std::visit(overloaded{[](const Constant&) { return Complex(0.0, 0.0); },
                               [&](const CylinderFourier& f) {
                                 Complex acc(0.0, 0.0);
                                 for (const auto& m : f.modes) {
                                   const Complex e = std::exp(2.0 * pi * m.n * z);
                                   acc += 2.0 * pi * m.n * (m.A * e - m.B / e);
                                 }
                                 return acc;
                               },
                               [&](const DiskPolynomial& p) { return poly_deriv(p.coeffs, z); },
                               [&](const CuspPrincipal& p) {
                                 const Complex inv = std::polar(1.0 / std::abs(z), -std::arg(z));
                                 return -2.0 * p.double_pole * inv * inv * inv - p.c * inv * inv + poly_deriv(p.tail, z);
                               }},
                    rep_);
}

Complex QuadDiff::mu(Complex z) const { return std::conj(phi(z)) / geom::density(chart_, z); }

double QuadDiff::norm_sq(Complex z) const {
  return std::norm(phi(z) / geom::density(chart_, z));
}

std::map<int, Complex> QuadDiff::frequency_profile(double x) const {
  require_cylinder(chart_);
  std::map<int, Complex> out;
  for (const auto& m : as_fourier(rep_).modes) {
    if (m.n == 0) {
      out[0] += m.A + m.B;
    } else {
      const double e = std::exp(2.0 * pi * m.n * x);
      out[m.n] += m.A * e;
      out[-m.n] += m.B / e;
    }
  }
  return out;
}

double QuadDiff::line_norm_sq(double x) const {
  double sum = 0.0;
  for (const auto& [freq, coef] : frequency_profile(x)) sum += std::norm(coef);
  return sum;
}

Complex QuadDiff::mode_zero() const {
  const auto profile = frequency_profile(0.0);
  const auto it = profile.find(0);
  return it == profile.end() ? Complex(0.0, 0.0) : it->second;
}

Complex QuadDiff::period(double x0, int samples) const {
  require_cylinder(chart_);
  Complex sum(0.0, 0.0);
  for (int j = 0; j < samples; ++j) sum += phi(Complex(x0, static_cast<double>(j) / samples));
  return sum / static_cast<double>(samples);
}

int QuadDiff::max_frequency() const {
  if (const auto* f = std::get_if<CylinderFourier>(&rep_)) {
    int m = 0;
    for (const auto& mode : f->modes) m = std::max(m, mode.n);
    return m;
  }
  return 0;
}

QuadDiff QuadDiff::scaled(Complex factor) const {
  Representation rep = std::visit(overloaded{[&](Constant c) -> Representation {
                                               c.c *= factor;
                                               return c;
                                             },
                                             [&](CylinderFourier f) -> Representation {
                                               for (auto& m : f.modes) {
                                                 m.A *= factor;
                                                 m.B *= factor;
                                               }
                                               return f;
                                             },
                                             [&](DiskPolynomial p) -> Representation {
                                               for (auto& a : p.coeffs) a *= factor;
                                               return p;
                                             },
                                             [&](CuspPrincipal p) -> Representation {
                                               p.c *= factor;
                                               p.double_pole *= factor;
                                               for (auto& a : p.tail) a *= factor;
                                               return p;
                                             }},
                                  rep_);
  return {chart_, rep};
}

bool QuadDiff::is_zero() const {
  return std::visit(overloaded{[](const Constant& c) { return c.c == Complex(0.0, 0.0); },
                               [](const CylinderFourier& f) {
                                 return std::all_of(f.modes.begin(), f.modes.end(), [](const FourierMode& m) {
                                   return m.A == Complex(0.0, 0.0) && m.B == Complex(0.0, 0.0);
                                 });
                               },
                               [](const DiskPolynomial& p) {
                                 return std::all_of(p.coeffs.begin(), p.coeffs.end(),
                                                    [](Complex a) { return a == Complex(0.0, 0.0); });
                               },
                               [](const CuspPrincipal& p) {
                                 return p.c == Complex(0.0, 0.0) && p.double_pole == Complex(0.0, 0.0) &&
                                        std::all_of(p.tail.begin(), p.tail.end(),
                                                    [](Complex a) { return a == Complex(0.0, 0.0); });
                               }},
                    rep_);
}

QuadDiff operator+(const QuadDiff& a, const QuadDiff& b) {
  if (a.chart_.index() != b.chart_.index()) throw InputError("cannot add differentials on different charts");
  if (const auto* ca = std::get_if<CylinderChart>(&a.chart_)) {
    if (ca->ell() != std::get<CylinderChart>(b.chart_).ell()) throw InputError("cylinders differ");
    if (std::holds_alternative<Constant>(a.rep_) && std::holds_alternative<Constant>(b.rep_)) {
      return {a.chart_, Constant{std::get<Constant>(a.rep_).c + std::get<Constant>(b.rep_).c}};
    }
    auto fa = as_fourier(a.rep_);
    const auto fb = as_fourier(b.rep_);
    fa.modes.insert(fa.modes.end(), fb.modes.begin(), fb.modes.end());
    return {a.chart_, fa};
  }
  if (std::holds_alternative<DiskChart>(a.chart_)) {
    return {a.chart_, DiskPolynomial{add_coeffs(as_poly(a.rep_), as_poly(b.rep_))}};
  }
  const auto& pa = std::get<CuspPrincipal>(a.rep_);
  const auto& pb = std::get<CuspPrincipal>(b.rep_);
  return {a.chart_, CuspPrincipal{pa.c + pb.c, add_coeffs(pa.tail, pb.tail), pa.double_pole + pb.double_pole}};
}

double dbar_residual(const QuadDiff& phi, Complex z, double h) {
  const Complex i(0.0, 1.0);
  const Complex dx = (phi.phi(z + h) - phi.phi(z - h)) / (2.0 * h);
  const Complex dy = (phi.phi(z + i * h) - phi.phi(z - i * h)) / (2.0 * h);
  return std::abs(0.5 * (dx + i * dy));
}

std::string to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::ImPhiOverG: return "ImPhiOverG";
    case FieldKind::RePhiOverG: return "RePhiOverG";
    case FieldKind::NormPhiSq: return "NormPhiSq";
    case FieldKind::JacobiU: return "JacobiU";
    case FieldKind::VariationV: return "VariationV";
  }
  return "unknown";
}

std::vector<double> FieldOnGeodesic::period_values() const {
  if (!curve.periodic() || values.empty()) return values;
  return {values.begin(), values.end() - 1};
}

double FieldOnGeodesic::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

Complex adapted_value(const QuadDiff& phi, const GeodesicCurve& curve, double s) {
  if (curve.chart().index() != phi.chart().index()) throw UnsupportedGeodesic("curve and differential live on different charts");
  if (!curve.is_model_geodesic()) throw UnsupportedGeodesic("curve is not a model geodesic of the chart");
  if (curve.kind() == geom::CurveKind::Segment) throw UnsupportedGeodesic("abstract segment has no chart embedding");
  const Complex z = curve.point_at(s);
  const double g = geom::density(phi.chart(), z);
  if (std::holds_alternative<CylinderChart>(phi.chart())) {
    if (std::get<CylinderChart>(phi.chart()).ell() != std::get<CylinderChart>(curve.chart()).ell()) {
      throw UnsupportedGeodesic("core circle belongs to a different cylinder");
    }
    return phi.phi(z) / g;
  }
  const Complex rot = std::polar(1.0, 2.0 * curve.angle());
  if (std::holds_alternative<DiskChart>(phi.chart())) return rot * phi.phi(z) / g;
  return -rot * phi.phi(z) / g;
}

namespace {

FieldOnGeodesic sample(const QuadDiff& phi, const GeodesicCurve& curve, int n, double s0, double s1, FieldKind kind,
                       const std::function<double(Complex, Complex)>& pick) {
  if (n < 1) throw InputError("need at least one sampling interval");
  if (curve.periodic()) {
    s0 = 0.0;
    s1 = curve.length();
  } else if (!(s1 > s0)) {
    throw InputError("open curves need a sampling range s0 < s1");
  }
  FieldOnGeodesic field{curve, kind, {}, {}};
  field.s.resize(n + 1);
  field.values.resize(n + 1);
  const double h = (s1 - s0) / n;
  for (int j = 0; j <= n; ++j) {
    const double s = (j == n) ? s1 : s0 + j * h;
    field.s[j] = s;
    const Complex z = curve.point_at(s);
    field.values[j] = pick(adapted_value(phi, curve, s), z);
  }
  if (curve.periodic()) field.values[n] = field.values[0];
  return field;
}

}  // namespace

FieldOnGeodesic restrict_im_over_g(const QuadDiff& phi, const GeodesicCurve& curve, int n, double s0, double s1) {
  return sample(phi, curve, n, s0, s1, FieldKind::ImPhiOverG, [](Complex v, Complex) { return v.imag(); });
}

FieldOnGeodesic restrict_re_over_g(const QuadDiff& phi, const GeodesicCurve& curve, int n, double s0, double s1) {
  return sample(phi, curve, n, s0, s1, FieldKind::RePhiOverG, [](Complex v, Complex) { return v.real(); });
}

FieldOnGeodesic restrict_normsq(const QuadDiff& phi, const GeodesicCurve& curve, int n, double s0, double s1) {
  return sample(phi, curve, n, s0, s1, FieldKind::NormPhiSq, [](Complex v, Complex) { return std::norm(v); });
}

namespace {

double cylinder_pairing(const CylinderChart& chart, const QuadDiff& phi, const QuadDiff& psi,
                        const PairingOptions& opts) {
  const double half = chart.half_width();
  const double ell = chart.ell();
  const int ny = std::max(opts.angular_samples, 4 * std::max(phi.max_frequency(), psi.max_frequency()) + 8);
  const auto grid = quad::composite_gl(-half, half, opts.radial_panels, opts.order);
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.nodes[i];
    const double c = std::cos(ell * x);
    double row = 0.0;
    for (int j = 0; j < ny; ++j) {
      const Complex z(x, static_cast<double>(j) / ny);
      row += (phi.phi(z) * std::conj(psi.phi(z))).real();
    }
    total += grid.weights[i] * (row / ny) * c * c / (ell * ell);
  }
  return total;
}

double disk_pairing_to(double radius, const QuadDiff& phi, const QuadDiff& psi, const PairingOptions& opts) {
  const auto grid = quad::composite_gl(0.0, radius, opts.radial_panels, opts.order);
  const int nt = opts.angular_samples;
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.nodes[i];
    double row = 0.0;
    for (int j = 0; j < nt; ++j) {
      const Complex z = std::polar(r, 2.0 * pi * j / nt);
      row += (phi.phi(z) * std::conj(psi.phi(z))).real();
    }
    const double w = 1.0 - r * r;
    total += grid.weights[i] * (2.0 * pi * row / nt) * w * w / 4.0 * r;
  }
  return total;
}

double cusp_pairing(const QuadDiff& phi, const QuadDiff& psi, const PairingOptions& opts) {
  // r = e^{-u}: dx dy / g = r^4 u² du dθ.
  const double depth = opts.cusp_depth;
  const int nt = opts.angular_samples;
  auto band = [&](double u0, double u1) {
    const auto grid = quad::composite_gl(u0, u1, std::max(4, static_cast<int>(std::ceil(u1 - u0))), opts.order);
    double total = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double u = grid.nodes[i];
      const double r = std::exp(-u);
      double row = 0.0;
      for (int j = 0; j < nt; ++j) {
        const Complex z = std::polar(r, 2.0 * pi * (j + 0.5) / nt);
        row += (phi.phi(z) * std::conj(psi.phi(z))).real();
      }
      total += grid.weights[i] * (2.0 * pi * row / nt) * std::pow(r, 4) * u * u;
    }
    return total;
  };
  const double outer = band(0.0, 0.5 * depth);
  const double inner = band(0.5 * depth, depth);
  const double total = outer + inner;
  if (std::abs(inner) > opts.divergence_tol * std::max(1.0, std::abs(total))) {
    throw DivergenceError("cusp pairing does not converge: deep half contributes " + std::to_string(inner));
  }
  return total;
}

}  // namespace

double wp_pairing(const QuadDiff& phi, const QuadDiff& psi, const PairingOptions& opts) {
  if (phi.chart().index() != psi.chart().index()) throw InputError("pairing needs a common chart");
  if (const auto* cyl = std::get_if<CylinderChart>(&phi.chart())) return cylinder_pairing(*cyl, phi, psi, opts);
  if (std::holds_alternative<DiskChart>(phi.chart())) {
    const double r1 = opts.disk_radius;
    if (!(r1 > 0.0 && r1 < 1.0)) throw DomainError("disk truncation radius must lie in (0, 1)");
    const double i1 = disk_pairing_to(r1, phi, psi, opts);
    if (!opts.richardson) return i1;
    // Tail of ∫ (1-r²)² r dr scales like (1-R)³.
    const double r2 = 1.0 - 2.0 * (1.0 - r1);
    const double i2 = disk_pairing_to(r2, phi, psi, opts);
    return i1 + (i1 - i2) / 7.0;
  }
  return cusp_pairing(phi, psi, opts);
}

}  // namespace wph::qdiff
