#include "wph/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "wph/elliptic.hpp"
#include "wph/errors.hpp"
#include "wph/geom.hpp"
#include "wph/hessian.hpp"
#include "wph/jacobi1d.hpp"
#include "wph/thurston.hpp"

namespace wph {
namespace {

using qdiff::Complex;
using qdiff::QuadDiff;
using std::numbers::pi;

double round9(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return std::strtod(buf, nullptr);
}

struct Suite {
  io::Json checks = io::Json::array();
  bool all = true;

  // pass when metric <= threshold (or >= when `at_least`).
  void add(const std::string& name, double metric, double threshold, bool at_least = false) {
    const bool ok = std::isfinite(metric) && (at_least ? metric >= threshold : metric <= threshold);
    all = all && ok;
    checks.push_back({{"name", name}, {"pass", ok}, {"metric", round9(metric)}, {"threshold", threshold}});
  }
};

qdiff::FieldOnGeodesic random_trig(std::mt19937_64& rng, double L, int n) {
  std::normal_distribution<double> g;
  std::vector<double> a(6), b(6);
  for (int m = 0; m < 6; ++m) {
    a[m] = g(rng);
    b[m] = g(rng);
  }
  qdiff::FieldOnGeodesic f{geom::GeodesicCurve::core_circle(geom::CylinderChart(L)), qdiff::FieldKind::ImPhiOverG,
                           {}, {}};
  for (int j = 0; j <= n; ++j) {
    const double s = L * (j % n) / n;
    double v = 0.0;
    for (int m = 0; m < 6; ++m) v += a[m] * std::cos(2 * pi * m * s / L) + b[m] * std::sin(2 * pi * m * s / L);
    f.s.push_back(L * j / n);
    f.values.push_back(v);
  }
  return f;
}

QuadDiff random_fourier(std::mt19937_64& rng, bool zero_period) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  geom::CylinderChart chart(zero_period ? 0.4 + 0.5 * u(rng) : 0.5 + 1.5 * u(rng));
  qdiff::CylinderFourier f;
  if (!zero_period) f.modes.push_back({0, {g(rng), g(rng)}, {0, 0}});
  for (int n = 1; n <= 2; ++n) {
    const double amp = 0.3 / n;
    f.modes.push_back({n, {amp * g(rng), amp * g(rng)}, {amp * g(rng), amp * g(rng)}});
  }
  return {chart, f};
}

}  // namespace

io::Json run_selftest(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Suite suite;

  {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      geom::CylinderChart cyl(0.3 + u(rng));
      worst = std::max(worst, std::abs(geom::curvature_at(cyl, {(2 * u(rng) - 1) * cyl.half_width() * 0.9, u(rng)}) + 1));
      worst = std::max(worst, std::abs(geom::curvature_at(geom::DiskChart{}, std::polar(0.9 * u(rng), 2 * pi * u(rng))) + 1));
      worst = std::max(worst,
                       std::abs(geom::curvature_at(geom::CuspChart{}, std::polar(0.05 + 0.9 * u(rng), 2 * pi * u(rng))) + 1));
    }
    suite.add("curvature", worst, 1e-5);
  }

  {
    double green = 0.0;
    double three_way = 0.0;
    for (double L : {0.5, 1.0, 2.0, 8.0}) {
      for (int i = 0; i < 3; ++i) {
        const auto F = random_trig(rng, L, 128);
        const auto sol = jacobi::solve_periodic(F);
        green = std::max(green, jacobi::green_residual(sol, F) / F.max_abs());
        const double e = sol.energy;
        three_way = std::max({three_way, std::abs(e - jacobi::integral_uf(sol, F)) / e,
                              std::abs(e - jacobi::second_term_kernel(F)) / e});
      }
    }
    suite.add("green-residual", green, 1e-6);
    suite.add("second-term-three-way", three_way, 1e-7);
  }

  {
    int violations = 0;
    double min_total = 1e300;
    for (int i = 0; i < 8; ++i) {
      const auto r = hessian::hessian_closed(random_fourier(rng, false));
      if (!r.invariant_failure().empty()) ++violations;
      min_total = std::min(min_total, r.total);
    }
    suite.add("hessian-sandwich-violations", violations, 0);
    suite.add("hessian-min-total", min_total, 0.0, true);
  }

  {
    const auto scan = hessian::cylinder_family_scan(0.25, 4.0, 16);
    double sqrt_dev = 0.0, min23 = 1e300, fd_dev = 0.0;
    for (const auto& r : scan.rows) {
      sqrt_dev = std::max(sqrt_dev, std::abs(r.d2_sqrt_l));
      min23 = std::min(min23, r.d2_l23);
      fd_dev = std::max(fd_dev, std::abs(r.formula_hess - r.d2l_ds2) / r.d2l_ds2);
    }
    suite.add("family-quadratic-r2-deficit", 1.0 - scan.r2, 1e-8);
    suite.add("family-half-power-affine", sqrt_dev, 1e-6);
    suite.add("family-two-thirds-convex", min23, 0.0, true);
    suite.add("family-formula-vs-fd", fd_dev, 1e-3);
  }

  {
    std::vector<Complex> cyl_pts, disk_pts;
    geom::CylinderChart chart(0.7);
    for (int i = 0; i < 1000; ++i) {
      cyl_pts.emplace_back((2 * u(rng) - 1) * 0.95 * chart.half_width(), u(rng));
      disk_pts.push_back(std::polar(0.1 + 0.8 * u(rng), 2 * pi * u(rng)));
    }
    const QuadDiff c(chart, qdiff::Constant{0.49 * Complex(0.6, 0.8)});
    const QuadDiff z(geom::DiskChart{}, qdiff::DiskPolynomial{{0.0, 1.0}});
    const double zs = 1.0 / std::sqrt(elliptic::subsolution_gap(z, disk_pts).max_v);
    const double gap = std::min(elliptic::subsolution_gap(c, cyl_pts).min_gap,
                                elliptic::subsolution_gap(z.scaled(zs), disk_pts).min_gap);
    suite.add("subsolution-min-gap", gap, -1e-6, true);
  }

  {
    int failures = 0;
    for (int i = 0; i < 6; ++i) {
      if (!elliptic::verify_collar_decay(random_fourier(rng, true)).ok) ++failures;
    }
    suite.add("collar-decay-failures", failures, 0);
    const auto fp = elliptic::flatparallel_scaling({0.4, 0.2, 0.1, 0.05, 0.025});
    suite.add("flatparallel-u0-slope-error", std::abs(fp.u0_fit.slope - 1.0), 0.15);
    suite.add("flatparallel-integral-slope-error", std::abs(fp.integral_fit.slope - 2.0), 0.15);
  }

  {
    const QuadDiff inv(geom::CuspChart{}, qdiff::CuspPrincipal{1.0, {}, 0.0});
    const auto arc = hessian::hessian_arc(inv);
    suite.add("arc-cauchy-tail", arc.cauchy_tail, 1e-4);
    suite.add("arc-line-kernel-gap", std::abs(arc.rows.back().energy - arc.line_energy), 1e-4);
    suite.add("arc-a-rate", arc.a_rate, 0.4, true);
    suite.add("arc-b-rate", arc.b_rate, 0.4, true);
    suite.add("cusp-mu-ratio-error", std::abs(elliptic::cusp_mu_decay(inv, {0.01, 0.1, 0.5}) - 1.0), 1e-12);
  }

  {
    suite.add("thurston-half-angle",
              std::abs(thurston::half_angle_average({0.3, -1.2}, {2.0, 0.7}) - (Complex(0.3, -1.2) * Complex(2.0, -0.7)).real() / 2),
              1e-12);
    suite.add("thurston-radial-constant", std::abs(thurston::radial_constant() - 2.0 / 3.0), 1e-12);
    const QuadDiff cubic(geom::DiskChart{}, qdiff::DiskPolynomial{{1.0, 0.0, 0.0, 1.0}});
    const double i2 = thurston::flow_correlation_I2({cubic});
    suite.add("thurston-i2-third", std::abs(i2 - cubic.norm_sq(0.0) / 3) / (cubic.norm_sq(0.0) / 3), 1e-5);
    const QuadDiff one(geom::DiskChart{}, qdiff::DiskPolynomial{{1.0}});
    suite.add("thurston-ratio", std::abs(thurston::thurston_ratio(one).ratio - 4.0 / 3.0), 1e-4);
  }

  io::Json out;
  out["seed"] = seed;
  out["checks"] = suite.checks;
  out["passed"] = suite.all;
  return out;
}

}  // namespace wph
