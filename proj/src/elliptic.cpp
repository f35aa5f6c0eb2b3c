#include "wph/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wph/errors.hpp"
#include "wph/parallel.hpp"
#include "wph/quadrature.hpp"

namespace wph::elliptic {
namespace {

using std::numbers::pi;

const CylinderChart& cylinder_of(const QuadDiff& phi) {
  if (const auto* c = std::get_if<CylinderChart>(&phi.chart())) return *c;
  throw InputError("differential must live on the cylinder chart");
}

// Thomas algorithm; sub, diag, sup, rhs overwritten.
std::vector<double> thomas(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                           std::vector<double> rhs) {
  const auto n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - sup[i] * x[i + 1]) / diag[i];
  return x;
}

// cos²(ell x) u'' - 2 ell² u = f on a uniform grid of n intervals over
// [-a, a] with given end values.
std::vector<double> solve_grid(double ell, double a, int n, const std::function<double(double)>& f, double left,
                               double right) {
  const double h = 2.0 * a / n;
  const auto size = static_cast<std::size_t>(n + 1);
  std::vector<double> sub(size, 0.0), diag(size, 1.0), sup(size, 0.0), rhs(size, 0.0);
  rhs[0] = left;
  rhs[size - 1] = right;
  for (std::size_t i = 1; i + 1 < size; ++i) {
    const double x = -a + h * static_cast<double>(i);
    const double c = std::cos(ell * x);
    const double w = c * c / (h * h);
    sub[i] = w;
    sup[i] = w;
    diag[i] = -2.0 * w - 2.0 * ell * ell;
    rhs[i] = f(x);
  }
  return thomas(std::move(sub), std::move(diag), std::move(sup), std::move(rhs));
}

RadialProfile solve_impl(const CylinderChart& chart, const std::function<double(double)>& scaled, RadialBoundary bc,
                         const RadialOptions& opts) {
  const double ell = chart.ell();
  int n = std::max(8, opts.intervals);
  if (n % 2) ++n;
  double a = 0.0;
  double left = 0.0;
  double right = 0.0;
  if (const auto* d = std::get_if<Dirichlet>(&bc)) {
    a = d->x_max;
    if (!(a > 0.0)) throw InputError("Dirichlet half-width must be positive");
    if (a > chart.half_width() - 1e-6) {
      throw ConditioningError("Dirichlet boundary too close to the end of the annulus, where sec² blows up; "
                              "shrink x_max or use the bounded condition");
    }
    left = d->left;
    right = d->right;
  } else {
    a = chart.half_width();
    const double two_ell2 = 2.0 * ell * ell;
    left = -scaled(-a) / two_ell2;
    right = -scaled(a) / two_ell2;
  }
  if (!std::isfinite(left) || !std::isfinite(right)) throw ConditioningError("boundary data are not finite");

  RadialProfile prof;
  prof.ell = ell;
  prof.bc = bc;
  auto coarse = solve_grid(ell, a, n, scaled, left, right);
  if (opts.richardson) {
    const auto fine = solve_grid(ell, a, 2 * n, scaled, left, right);
    for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = (4.0 * fine[2 * i] - coarse[i]) / 3.0;
  }
  for (double v : coarse) {
    if (!std::isfinite(v)) throw ConditioningError("radial solve produced non-finite values");
  }
  prof.u = std::move(coarse);
  prof.x.resize(prof.u.size());
  for (std::size_t i = 0; i < prof.x.size(); ++i) prof.x[i] = -a + 2.0 * a * static_cast<double>(i) / n;
  prof.x[prof.x.size() / 2] = 0.0;
  return prof;
}

double integrate_panels(const std::function<double(double)>& f, double a, double b, double max_panel, int order = 16) {
  if (a == b) return 0.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const auto grid = quad::composite_gl(lo, hi, std::span<const double>{}, max_panel, order);
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) sum += grid.weights[k] * f(grid.nodes[k]);
  return a < b ? sum : -sum;
}

double cosh_ratio(double rate, double x, double x_max) {
  return (std::exp(rate * (std::abs(x) - x_max)) + std::exp(-rate * (std::abs(x) + x_max))) /
         (1.0 + std::exp(-2.0 * rate * x_max));
}

}  // namespace

double RadialProfile::value_at(double xq) const {
  const double a = x.back();
  if (xq < -a - 1e-12 || xq > a + 1e-12) throw DomainError("point outside the radial profile");
  const auto n = x.size() - 1;
  const double h = 2.0 * a / static_cast<double>(n);
  auto i = static_cast<std::ptrdiff_t>(std::floor((xq + a) / h)) - 1;
  i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 3);
  double result = 0.0;
  for (int j = 0; j < 4; ++j) {
    double w = 1.0;
    const double xj = -a + h * static_cast<double>(i + j);
    for (int k = 0; k < 4; ++k) {
      if (k == j) continue;
      const double xk = -a + h * static_cast<double>(i + k);
      w *= (xq - xk) / (xj - xk);
    }
    result += w * u[static_cast<std::size_t>(i + j)];
  }
  return result;
}

double RadialProfile::max_residual(const std::function<double(double)>& rhs) const {
  const auto n = x.size() - 1;
  const double h = x[1] - x[0];
  const double limit = std::holds_alternative<Bounded>(bc) ? 0.9 * x.back() : x.back();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 <= n; ++i) {
    if (std::abs(x[i]) > limit) continue;
    const double upp = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
    const double c = std::cos(ell * x[i]);
    const double g = ell * ell / (c * c);
    worst = std::max(worst, std::abs(upp - 2.0 * g * u[i] - rhs(x[i])));
  }
  return worst;
}

RadialProfile solve_rotational(const CylinderChart& chart, const std::function<double(double)>& rhs, RadialBoundary bc,
                               const RadialOptions& opts) {
  const double ell = chart.ell();
  const double end = chart.half_width();
  const double inset = 1e-7 / ell;
  auto scaled = [&](double x) {
    const double xc = std::clamp(x, -end + inset, end - inset);
    const double c = std::cos(ell * xc);
    return c * c * rhs(xc);
  };
  return solve_impl(chart, scaled, bc, opts);
}

RadialProfile solve_rotational_scaled(const CylinderChart& chart, const std::function<double(double)>& scaled_rhs,
                                      RadialBoundary bc, const RadialOptions& opts) {
  return solve_impl(chart, scaled_rhs, bc, opts);
}

double homogeneous_u1(double ell, double x) { return std::tan(ell * x); }
double homogeneous_u2(double ell, double x) { return x * std::tan(ell * x) + 1.0 / ell; }

std::vector<double> variation_of_parameters(const CylinderChart& chart, const std::function<double(double)>& rhs,
                                            RadialBoundary bc, const std::vector<double>& points) {
  const double ell = chart.ell();
  const double panel = std::min(0.05, 0.02 / ell);
  auto v1 = [&](double x) {
    return integrate_panels([&](double t) { return homogeneous_u2(ell, t) * rhs(t); }, 0.0, x, panel, 20);
  };
  auto v2 = [&](double x) {
    return -integrate_panels([&](double t) { return homogeneous_u1(ell, t) * rhs(t); }, 0.0, x, panel, 20);
  };
  double c1 = 0.0;
  double c2 = 0.0;
  if (const auto* d = std::get_if<Dirichlet>(&bc)) {
    const double X = d->x_max;
    // Rows: c₁u₁(±X) + c₂u₂(±X) = value - particular(±X).
    const double a11 = homogeneous_u1(ell, -X), a12 = homogeneous_u2(ell, -X);
    const double a21 = homogeneous_u1(ell, X), a22 = homogeneous_u2(ell, X);
    const double b1 = d->left - (a11 * v1(-X) + a12 * v2(-X));
    const double b2 = d->right - (a21 * v1(X) + a22 * v2(X));
    const double det = a11 * a22 - a12 * a21;
    c1 = (b1 * a22 - a12 * b2) / det;
    c2 = (a11 * b2 - a21 * b1) / det;
  } else {
    // The tan ℓx coefficient c₁ + x c₂ + T(x) must vanish at both ends, with
    // T(x) = ∫₀ˣ ((t - x) tan ℓt + 1/ℓ) rhs(t) dt finite up to the ends.
    const double X = chart.half_width();
    auto T = [&](double x) {
      return integrate_panels([&](double t) { return ((t - x) * std::tan(ell * t) + 1.0 / ell) * rhs(t); }, 0.0, x,
                              panel, 20);
    };
    const double tp = T(X);
    const double tm = T(-X);
    c1 = -0.5 * (tp + tm);
    c2 = -0.5 * (tp - tm) / X;
  }
  std::vector<double> out;
  out.reserve(points.size());
  for (double x : points) {
    const double u1 = homogeneous_u1(ell, x);
    const double u2 = homogeneous_u2(ell, x);
    out.push_back((c1 + v1(x)) * u1 + (c2 + v2(x)) * u2);
  }
  return out;
}

ParticularSplit particular_split(const CylinderChart& chart, const std::function<double(double)>& rhs, double x) {
  const double ell = chart.ell();
  const double panel = std::min(0.02, 0.02 / ell);
  const double u1 = homogeneous_u1(ell, x);
  const double u2 = homogeneous_u2(ell, x);
  ParticularSplit out;
  out.u1v1 = u1 * integrate_panels([&](double t) { return homogeneous_u2(ell, t) * rhs(t); }, 0.0, x, panel, 20);
  out.u2v2 = -u2 * integrate_panels([&](double t) { return homogeneous_u1(ell, t) * rhs(t); }, 0.0, x, panel, 20);
  return out;
}

namespace {

std::function<double(double)> scaled_first_term_rhs(const QuadDiff& phi, const QuadDiff* psi) {
  const double ell = cylinder_of(phi).ell();
  return [&phi, psi, ell](double x) {
    const double c = std::cos(ell * x);
    const double c4 = c * c * c * c;
    if (c4 == 0.0) return 0.0;
    double line = 0.0;
    if (psi == nullptr) {
      line = phi.line_norm_sq(x);
    } else {
      const auto a = phi.frequency_profile(x);
      const auto b = psi->frequency_profile(x);
      for (const auto& [k, ak] : a) {
        const auto it = b.find(k);
        if (it != b.end()) line += (ak * std::conj(it->second)).real();
      }
    }
    return -2.0 * line * c4 / (ell * ell);
  };
}

}  // namespace

RadialProfile first_term_profile(const QuadDiff& phi, const RadialOptions& opts) {
  return solve_rotational_scaled(cylinder_of(phi), scaled_first_term_rhs(phi, nullptr), Bounded{}, opts);
}

RadialProfile first_term_profile(const QuadDiff& phi, const QuadDiff& psi, const RadialOptions& opts) {
  const auto& chart = cylinder_of(phi);
  if (cylinder_of(psi).ell() != chart.ell()) throw InputError("differentials live on different cylinders");
  return solve_rotational_scaled(chart, scaled_first_term_rhs(phi, &psi), Bounded{}, opts);
}

double first_term(const QuadDiff& phi, const RadialOptions& opts) {
  if (phi.is_zero()) return 0.0;
  return cylinder_of(phi).ell() * first_term_profile(phi, opts).at_center();
}

double first_term(const QuadDiff& phi, const QuadDiff& psi, const RadialOptions& opts) {
  if (phi.is_zero() || psi.is_zero()) return 0.0;
  return cylinder_of(phi).ell() * first_term_profile(phi, psi, opts).at_center();
}

SubsolutionResult subsolution_gap(const QuadDiff& phi, const std::vector<Complex>& points,
                                  const SubsolutionOptions& opts) {
  SubsolutionResult res;
  const double h = opts.h;
  std::vector<double> v(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (geom::contains(phi.chart(), points[i], 2.0 * h)) v[i] = phi.norm_sq(points[i]);
  }
  res.max_v = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
  res.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Complex z = points[i];
    if (!geom::contains(phi.chart(), z, 2.0 * h) || v[i] < opts.zero_margin * res.max_v || v[i] == 0.0) {
      ++res.skipped;
      continue;
    }
    auto second = [&](Complex dir) {
      return (-phi.norm_sq(z + 2.0 * h * dir) + 16.0 * phi.norm_sq(z + h * dir) - 30.0 * v[i] +
              16.0 * phi.norm_sq(z - h * dir) - phi.norm_sq(z - 2.0 * h * dir)) /
             (12.0 * h * h);
    };
    const double lap0 = second({1.0, 0.0}) + second({0.0, 1.0});
    const double gap = lap0 / geom::density(phi.chart(), z) + 4.0 * v[i];
    res.min_gap = std::min(res.min_gap, gap);
    ++res.evaluated;
  }
  if (res.evaluated == 0) res.min_gap = 0.0;
  return res;
}

double DecayBound::operator()(double x0) const { return c0 * cosh_ratio(rate, x0, x_max); }

DecayBound collar_decay_bound(double c0, const CylinderChart& chart) {
  if (c0 < 0.0) throw InputError("boundary bound must be non-negative");
  return DecayBound{c0, kCollarRate, chart.collar_half_width()};
}

CollarCheck verify_collar_decay(const QuadDiff& phi, int grid) {
  const auto& chart = cylinder_of(phi);
  if (std::abs(phi.mode_zero()) > 0.0) {
    throw PreconditionViolation("collar decay needs a zero period; the constant mode does not decay");
  }
  const double X = chart.collar_half_width();
  const double left = phi.line_norm_sq(-X);
  const double right = phi.line_norm_sq(X);
  if (!std::isfinite(left) || !std::isfinite(right)) throw ConditioningError("boundary line integrals overflow");
  CollarCheck out;
  out.bound = collar_decay_bound(std::max(left, right), chart);
  if (out.bound.c0 == 0.0) return out;
  grid = std::max(grid, 3);
  for (int j = 0; j < grid; ++j) {
    const double x0 = -X + 2.0 * X * j / (grid - 1);
    const double b = out.bound(x0);
    const double val = phi.line_norm_sq(x0);
    out.worst_ratio = std::max(out.worst_ratio, val / b);
    if (val > b * (1.0 + 1e-9)) out.ok = false;
  }
  return out;
}

LogLogFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("fit needs matching sample counts");
  if (x.size() < 3) throw FitError("log-log fit needs at least three points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw FitError("log-log fit needs positive data");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw FitError("degenerate abscissae");
  LogLogFit fit;
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ly = std::log(y[i]);
    const double pred = fit.intercept + fit.slope * std::log(x[i]);
    ss_res += (ly - pred) * (ly - pred);
    ss_tot += (ly - mean) * (ly - mean);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

FlatParallelRow flatparallel_solve(double ell, double c0) {
  CylinderChart chart(ell);
  const double X = chart.collar_half_width();
  auto scaled = [&](double x) {
    const double c = std::cos(ell * x);
    return c0 * cosh_ratio(kCollarRate, x, X) * c * c * c * c / (ell * ell);
  };
  RadialOptions opts;
  opts.intervals = std::max(4096, 2 * static_cast<int>(std::ceil(X / 0.004)));
  const auto prof = solve_rotational_scaled(chart, scaled, Dirichlet{X, c0, c0}, opts);
  FlatParallelRow row;
  row.ell = ell;
  row.x_max = X;
  row.u0 = prof.at_center();
  row.integral = ell * row.u0;
  auto rhs = [&](double x) {
    const double c = std::cos(ell * x);
    return c0 * cosh_ratio(kCollarRate, x, X) * c * c / (ell * ell);
  };
  const auto split = particular_split(chart, rhs, X);
  row.u1v1 = split.u1v1;
  row.particular = split.u1v1 + split.u2v2;
  return row;
}

FlatParallelResult flatparallel_scaling(const std::vector<double>& ells, double c0) {
  if (ells.size() < 3) throw FitError("scaling ladder needs at least three values of ell");
  FlatParallelResult out;
  out.rows.resize(ells.size());
  parallel_for(ells.size(), [&](std::size_t i) { out.rows[i] = flatparallel_solve(ells[i], c0); });
  std::vector<double> l, u0, integral, split;
  for (const auto& r : out.rows) {
    l.push_back(r.ell);
    u0.push_back(r.u0);
    integral.push_back(r.integral);
    split.push_back(std::abs(r.u1v1 / r.particular));
  }
  out.u0_fit = loglog_fit(l, u0);
  out.integral_fit = loglog_fit(l, integral);
  out.split_fit = loglog_fit(l, split);
  return out;
}

double cusp_mu_decay(const QuadDiff& phi, const std::vector<double>& radii, int angles) {
  if (!std::holds_alternative<geom::CuspChart>(phi.chart())) throw InputError("cusp_mu_decay needs the cusp chart");
  double worst = 0.0;
  for (double r : radii) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("radius must lie in (0, 1)");
    const double lg = std::log(1.0 / r);
    for (int k = 0; k < angles; ++k) {
      const Complex z = std::polar(r, 2.0 * pi * k / angles);
      worst = std::max(worst, std::abs(phi.mu(z)) / (r * lg * lg));
    }
  }
  return worst;
}

double cusp_circle_normsq(const QuadDiff& phi, double y, int angles) {
  const double r = std::exp(-2.0 * pi * y);
  double sum = 0.0;
  for (int k = 0; k < angles; ++k) sum += phi.norm_sq(std::polar(r, 2.0 * pi * (k + 0.5) / angles));
  return sum / angles;
}

double cusp_tail_first_term(const std::function<double(double)>& v, double yj, double yend, double cap) {
  if (!(yj > 0.0) || !(yend > yj)) throw InputError("cusp tail needs 0 < y_junction < y_end");
  // Locate where v has died out.
  double vmax = 0.0;
  double ycut = yj;
  const double step = 0.05;
  for (int k = 0;; ++k) {
    const double y = yj + step * k;
    const double val = std::abs(v(y));
    if (!std::isfinite(val)) throw DivergenceError("first-term source overflows inside the cusp");
    vmax = std::max(vmax, val);
    if (k > 4 && val <= 1e-20 * vmax) {
      ycut = y;
      break;
    }
    if (y > yj + 200.0) throw DivergenceError("first-term source does not decay into the cusp");
  }
  if (vmax == 0.0) return cap * (1.0 - yj / yend);
  // With u_p = (2/3)(y² ∫_y^∞ v t⁻³ + y⁻¹ ∫_{y_j}^y v), swapping the order of
  // integration turns ∫ u_p dy/y into single integrals.
  const double top = std::min(ycut, yend);
  std::vector<double> breaks;
  if (yend < ycut) breaks.push_back(yend);
  const auto g1 = quad::composite_gl(yj, ycut, breaks, 0.05, 20);
  double a_j = 0.0;
  double i1 = 0.0;
  for (std::size_t k = 0; k < g1.size(); ++k) {
    const double t = g1.nodes[k];
    const double w = g1.weights[k] * v(t) / (t * t * t);
    a_j += w;
    const double m = std::min(t, yend);
    i1 += w * 0.5 * (m * m - yj * yj);
  }
  const auto g2 = quad::composite_gl(yj, top, std::span<const double>{}, 0.05, 20);
  double i2 = 0.0;
  for (std::size_t k = 0; k < g2.size(); ++k) {
    const double t = g2.nodes[k];
    i2 += g2.weights[k] * v(t) * (1.0 / t - 1.0 / yend);
  }
  const double up_j = (2.0 / 3.0) * yj * yj * a_j;
  return (cap - up_j) * (1.0 - yj / yend) + (2.0 / 3.0) * (i1 + i2);
}

}  // namespace wph::elliptic
