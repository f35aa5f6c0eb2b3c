#include "wph/hessian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "wph/errors.hpp"
#include "wph/parallel.hpp"
#include "wph/quadrature.hpp"

namespace wph::hessian {
namespace {

using geom::CylinderChart;
using geom::GeodesicCurve;
using std::numbers::pi;

const CylinderChart& cylinder_of(const QuadDiff& phi) {
  if (const auto* c = std::get_if<CylinderChart>(&phi.chart())) return *c;
  throw UnsupportedGeodesic("closed-geodesic Hessian needs a cylinder differential");
}

double periodic_integral(const qdiff::FieldOnGeodesic& f) {
  const auto v = f.period_values();
  return quad::trapezoid_periodic(v, f.curve.length());
}

double slack(double total) { return 1e-8 * std::max(1.0, std::abs(total)); }

}  // namespace

std::string HessianReport::invariant_failure(bool nonzero_input) const {
  std::ostringstream why;
  const double scale = std::max(1.0, std::abs(total));
  if (std::abs(total - (first_term + second_term_energy)) > 1e-12 * scale) {
    why << "total differs from first_term + second_term_energy";
  } else if (std::abs(second_term_energy - second_term_kernel) > 1e-7 * scale) {
    why << "energy and kernel second terms disagree: " << second_term_energy << " vs " << second_term_kernel;
  } else if (lower_bound_third > total + slack(total)) {
    why << "lower bound (1/3)∫‖Φ‖² = " << lower_bound_third << " exceeds total " << total;
  } else if (total > upper_bound + slack(total)) {
    why << "total " << total << " exceeds upper bound " << upper_bound;
  } else if (nonzero_input && !(total > 0.0)) {
    why << "total is not positive for a non-zero differential";
  }
  return why.str();
}

double first_variation(const QuadDiff& phi, const GeodesicCurve& curve, int samples) {
  if (!curve.periodic()) throw InputError("first_variation integrates over a closed geodesic");
  return periodic_integral(qdiff::restrict_re_over_g(phi, curve, samples));
}

double sup_norm_sq(const QuadDiff& phi, int x_grid) {
  const auto& chart = cylinder_of(phi);
  if (phi.is_zero()) return 0.0;
  const double X = chart.half_width();
  const int ny = std::max(64, 16 * phi.max_frequency() + 16);
  x_grid = std::max(x_grid, 16);
  auto f = [&](double x, double y) {
    if (std::abs(x) >= X) return 0.0;
    return phi.norm_sq({x, y});
  };
  double best = -1.0;
  double bx = 0.0;
  double by = 0.0;
  for (int i = 1; i < x_grid; ++i) {
    const double x = -X + 2.0 * X * i / x_grid;
    for (int j = 0; j < ny; ++j) {
      const double y = static_cast<double>(j) / ny;
      const double v = f(x, y);
      if (v > best) {
        best = v;
        bx = x;
        by = y;
      }
    }
  }
  // Compass search around the best grid point.
  double hx = 2.0 * X / x_grid;
  double hy = 1.0 / ny;
  for (int it = 0; it < 200 && (hx > 1e-13 * X || hy > 1e-13); ++it) {
    bool moved = false;
    const double cand[4][2] = {{bx + hx, by}, {bx - hx, by}, {bx, by + hy}, {bx, by - hy}};
    for (const auto& c : cand) {
      const double v = f(c[0], c[1]);
      if (v > best) {
        best = v;
        bx = c[0];
        by = c[1];
        moved = true;
      }
    }
    if (!moved) {
      hx *= 0.5;
      hy *= 0.5;
    }
  }
  return best;
}

HessianReport hessian_closed(const QuadDiff& phi, const HessianOptions& opts) {
  const auto& chart = cylinder_of(phi);
  const auto core = GeodesicCurve::core_circle(chart);
  const auto F = qdiff::restrict_im_over_g(phi, core, opts.samples);
  const auto sol = jacobi::solve_periodic(F, jacobi::Method::Spectral);

  HessianReport r;
  r.first_term = elliptic::first_term(phi, opts.radial);
  r.second_term_energy = sol.energy;
  r.second_term_kernel = jacobi::second_term_kernel(F, opts.kernel);
  r.total = r.first_term + r.second_term_energy;
  r.first_variation = first_variation(phi, core, opts.samples);
  r.lower_bound_third = periodic_integral(qdiff::restrict_normsq(phi, core, opts.samples)) / 3.0;
  const double fmax = F.max_abs();
  r.upper_bound = chart.ell() * (sup_norm_sq(phi, opts.sup_grid) + fmax * fmax);
  r.grid.n = opts.samples;
  r.grid.tol = opts.tol;
  r.grid.backends = {"radial-fd-richardson", "jacobi-" + jacobi::to_string(jacobi::Method::Spectral),
                     "jacobi-kernel-quadrature"};
  return r;
}

PolarHessian hessian_polar(const QuadDiff& phi, const QuadDiff& psi, const HessianOptions& opts) {
  const auto& chart = cylinder_of(phi);
  if (cylinder_of(psi).ell() != chart.ell()) throw InputError("differentials live on different cylinders");
  const auto core = GeodesicCurve::core_circle(chart);
  const auto F = qdiff::restrict_im_over_g(phi, core, opts.samples);
  const auto G = qdiff::restrict_im_over_g(psi, core, opts.samples);
  const auto a = jacobi::solve_periodic(F);
  const auto b = jacobi::solve_periodic(G);
  const auto ua = a.U.period_values(), uya = a.Uy.period_values();
  const auto ub = b.U.period_values(), uyb = b.Uy.period_values();
  std::vector<double> dens(ua.size());
  for (std::size_t i = 0; i < ua.size(); ++i) dens[i] = ua[i] * ub[i] + uya[i] * uyb[i];

  PolarHessian h;
  h.first_term = elliptic::first_term(phi, psi, opts.radial);
  h.second_term_energy = quad::trapezoid_periodic(dens, core.length());
  h.second_term_kernel = jacobi::second_term_kernel(F, G, opts.kernel);
  h.total = h.first_term + h.second_term_energy;
  return h;
}

bool check_two_thirds_inequality(const HessianReport& report, double ell) {
  return ell * report.total >= report.first_variation * report.first_variation / 3.0 - 1e-9;
}

namespace {

qdiff::PairingOptions family_pairing() {
  qdiff::PairingOptions p;
  p.radial_panels = 8;
  p.order = 16;
  p.angular_samples = 4;
  return p;
}

// ‖∂/∂ell‖²_WP. The tangent is ell dz², whose first variation is 1.
double family_norm_sq(double ell) {
  CylinderChart chart(ell);
  QuadDiff t(chart, qdiff::Constant{ell});
  return qdiff::wp_pairing(t, t, family_pairing());
}

}  // namespace

double family_arclength(double ell) {
  if (!(ell > 0.0)) throw InputError("family arclength needs ell > 0");
  // λ = μ² removes the λ^{-1/2} endpoint behaviour.
  const double top = std::sqrt(ell);
  const auto grid = quad::composite_gl(0.0, top, 4, 16);
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double mu = grid.nodes[k];
    s += grid.weights[k] * 2.0 * mu * std::sqrt(family_norm_sq(mu * mu));
  }
  return s;
}

FamilyScan cylinder_family_scan(double ell0, double ell1, int steps) {
  if (!(ell0 > 0.0) || !(ell1 > ell0)) throw InputError("family scan needs 0 < ell0 < ell1");
  if (steps < 5) throw ResolutionError("family scan needs at least 5 steps for stable second differences");
  const double s0 = family_arclength(ell0);
  const double s1 = family_arclength(ell1);
  const double h = (s1 - s0) / steps;
  std::vector<double> ell(static_cast<std::size_t>(steps + 1));
  ell.front() = ell0;
  ell.back() = ell1;
  parallel_for(static_cast<std::size_t>(steps - 1), [&](std::size_t idx) {
    const auto k = static_cast<int>(idx) + 1;
    const double target = s0 + h * k;
    const double r = std::sqrt(ell0) + (std::sqrt(ell1) - std::sqrt(ell0)) * k / steps;
    double l = r * r;
    for (int it = 0; it < 60; ++it) {
      const double step = (family_arclength(l) - target) / std::sqrt(family_norm_sq(l));
      l -= step;
      if (std::abs(step) <= 1e-15 * l) break;
    }
    ell[static_cast<std::size_t>(k)] = l;
  });

  FamilyScan scan;
  scan.rows.resize(static_cast<std::size_t>(steps - 1));
  scan.norm_times_ell.resize(scan.rows.size());
  parallel_for(scan.rows.size(), [&](std::size_t idx) {
    const std::size_t k = idx + 1;
    auto second = [&](auto f) { return (f(ell[k + 1]) - 2.0 * f(ell[k]) + f(ell[k - 1])) / (h * h); };
    FamilyRow row;
    row.s = s0 + h * static_cast<double>(k);
    row.ell = ell[k];
    row.dl_ds = (ell[k + 1] - ell[k - 1]) / (2.0 * h);
    row.d2l_ds2 = second([](double l) { return l; });
    row.d2_sqrt_l = second([](double l) { return std::sqrt(l); });
    row.d2_l23 = second([](double l) { return std::cbrt(l * l); });
    // Unit WP speed tangent c dz² with c > 0.
    CylinderChart chart(row.ell);
    QuadDiff unit(chart, qdiff::Constant{1.0});
    const double c = 1.0 / std::sqrt(qdiff::wp_pairing(unit, unit, family_pairing()));
    row.formula_hess = hessian_closed(QuadDiff(chart, qdiff::Constant{c})).total;
    scan.rows[idx] = row;
    scan.norm_times_ell[idx] = family_norm_sq(row.ell) * row.ell;
  });

  double num = 0, den = 0;
  for (const auto& r : scan.rows) {
    num += r.ell * r.s * r.s;
    den += std::pow(r.s, 4);
  }
  scan.kappa = num / den;
  double mean = 0;
  for (const auto& r : scan.rows) mean += r.ell;
  mean /= static_cast<double>(scan.rows.size());
  double ss_res = 0, ss_tot = 0;
  for (const auto& r : scan.rows) {
    ss_res += std::pow(r.ell - scan.kappa * r.s * r.s, 2);
    ss_tot += std::pow(r.ell - mean, 2);
  }
  scan.r2 = 1.0 - ss_res / ss_tot;
  return scan;
}

ArcModel::ArcModel(QuadDiff phi, double right_angle, double left_angle)
    : phi_(std::move(phi)), right_angle_(right_angle), left_angle_(left_angle) {
  if (!std::holds_alternative<geom::CuspChart>(phi_.chart())) throw InputError("arc model needs a cusp differential");
  fl_ = tail(0.0, left_angle_);
  fr_ = tail(0.0, right_angle_);
  dl_ = -tail_slope(0.0, left_angle_);
  dr_ = tail_slope(0.0, right_angle_);
}

namespace {

// ψ = z²φ and zψ' for φ = d/z² + c/z + Σ t_k z^k, evaluated without forming
// negative powers of z (which overflow deep in the cusp).
struct PsiPair {
  Complex psi;
  Complex zdpsi;
};

PsiPair cusp_psi(const qdiff::CuspPrincipal& p, Complex z) {
  Complex psi = p.double_pole + p.c * z;
  Complex zdpsi = p.c * z;
  Complex zk = z * z;
  for (std::size_t k = 0; k < p.tail.size(); ++k) {
    psi += p.tail[k] * zk;
    zdpsi += static_cast<double>(k + 2) * p.tail[k] * zk;
    zk *= z;
  }
  return {psi, zdpsi};
}

}  // namespace

double ArcModel::tail(double sigma, double angle) const {
  // F = -Im(ψ) λ² with ψ = z²φ, λ = e^σ, z = e^{-λ} e^{iθ}.
  const double lambda = std::exp(sigma);
  const auto [psi, zdpsi] =
      cusp_psi(std::get<qdiff::CuspPrincipal>(phi_.representation()), std::polar(std::exp(-lambda), angle));
  return -psi.imag() * lambda * lambda;
}

double ArcModel::tail_slope(double sigma, double angle) const {
  const double lambda = std::exp(sigma);
  const auto [psi, zdpsi] =
      cusp_psi(std::get<qdiff::CuspPrincipal>(phi_.representation()), std::polar(std::exp(-lambda), angle));
  return lambda * lambda * lambda * zdpsi.imag() - 2.0 * lambda * lambda * psi.imag();
}

double ArcModel::field(double s) const {
  if (s >= 0.5) return tail(s - 0.5, right_angle_);
  if (s <= -0.5) return tail(-s - 0.5, left_angle_);
  const double t = s + 0.5;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * fl_ + (t3 - 2 * t2 + t) * dl_ + (-2 * t3 + 3 * t2) * fr_ + (t3 - t2) * dr_;
}

double ArcModel::field_derivative(double s) const {
  if (s >= 0.5) return tail_slope(s - 0.5, right_angle_);
  if (s <= -0.5) return -tail_slope(-s - 0.5, left_angle_);
  const double t = s + 0.5;
  const double t2 = t * t;
  return (6 * t2 - 6 * t) * fl_ + (3 * t2 - 4 * t + 1) * dl_ + (-6 * t2 + 6 * t) * fr_ + (3 * t2 - 2 * t) * dr_;
}

namespace {

// Exponential rate of |y| against x by least squares on log |y|.
double decay_rate(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(y[i]) > 1e-300) {
      lx.push_back(x[i]);
      ly.push_back(std::log(std::abs(y[i])));
    }
  }
  if (lx.size() < 2) return 0.0;
  const auto n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

ArcResult hessian_arc(const QuadDiff& phi, const ArcOptions& opts) {
  const ArcModel model(phi, opts.right_angle, opts.left_angle);
  double near = 0.0;
  for (int k = 0; k <= 20; ++k) {
    near = std::max({near, std::abs(model.field(0.5 + 0.1 * k)), std::abs(model.field(-0.5 - 0.1 * k))});
  }
  const double deep = std::max(std::abs(model.field(6.5)), std::abs(model.field(-6.5)));
  if (deep > 1e-8 * near || !std::isfinite(deep)) {
    throw DivergenceError("Im μ does not decay into the cusps; the arc Hessian diverges");
  }
  auto F = [&](double s) { return model.field(s); };
  const std::vector<double> band{-0.5, 0.5};

  ArcResult res;
  res.line_energy = jacobi::line_kernel_energy(F, 12.0, opts.max_panel, opts.order, band);

  // First-term data: rotational average of ‖Φ‖² at horocycle height y.
  const double yj = 1.0 / (2.0 * pi);
  auto v = [&](double y) { return elliptic::cusp_circle_normsq(phi, y); };
  double cap = 0.0;
  for (int k = 0; k <= 1000; ++k) cap = std::max(cap, v(yj + 0.01 * k));

  res.rows.resize(opts.lengths.size());
  parallel_for(opts.lengths.size(), [&](std::size_t i) {
    const double L = opts.lengths[i];
    if (!(L > 1.0)) throw InputError("arc truncation length must exceed the band width");
    const double half = 0.5 * L;
    const double denom = 1.0 - std::exp(-2.0 * L);
    const auto grid = quad::composite_gl(-half, half, band, opts.max_panel, opts.order);
    double vl = 0.0;
    double vr = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double s = grid.nodes[k];
      const double dF = model.field_derivative(s);
      vl += grid.weights[k] * (std::exp(-half - s) - std::exp(-3.0 * half + s)) / denom * dF;
      vr -= grid.weights[k] * (std::exp(s - half) - std::exp(-3.0 * half - s)) / denom * dF;
    }
    ArcRow row;
    row.length = L;
    // U = V' - Im μ at the ends, with Im μ = -F.
    row.u_left = vl + F(-half);
    row.u_right = vr + F(half);
    jacobi::SegmentOptions so;
    so.max_panel = opts.max_panel;
    so.order = opts.order;
    so.samples = 64;
    so.breakpoints = band;
    const auto sol = jacobi::solve_segment(F, L, {row.u_left, row.u_right}, so);
    row.a = sol.a;
    row.b = sol.b;
    row.energy = sol.energy;
    if (cap > 0.0) {
      const double yend = std::exp(half - 0.5) / (2.0 * pi);
      row.first_term = cap + 2.0 * elliptic::cusp_tail_first_term(v, yj, yend, cap);
    }
    res.rows[i] = row;
  });

  std::vector<double> halves, as, bs;
  for (const auto& r : res.rows) {
    halves.push_back(0.5 * r.length);
    as.push_back(r.a);
    bs.push_back(r.b);
  }
  res.a_rate = decay_rate(halves, as);
  res.b_rate = decay_rate(halves, bs);
  for (std::size_t i = 1; i < res.rows.size(); ++i) {
    if (res.rows[i - 1].length >= 30.0) {
      res.cauchy_tail = std::max(res.cauchy_tail, std::abs(res.rows[i].energy - res.rows[i - 1].energy));
    }
  }
  return res;
}

}  // namespace wph::hessian
