#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "wph/elliptic.hpp"
#include "wph/errors.hpp"
#include "wph/quadrature.hpp"

using namespace wph::elliptic;
using wph::geom::CuspChart;
using wph::geom::DiskChart;
using wph::qdiff::Constant;
using wph::qdiff::CuspPrincipal;
using wph::qdiff::CylinderFourier;
using wph::qdiff::DiskPolynomial;
using std::numbers::pi;

namespace {

double second_diff7(const std::function<double(double)>& f, double x, double h) {
  return (2 * f(x - 3 * h) - 27 * f(x - 2 * h) + 270 * f(x - h) - 490 * f(x) + 270 * f(x + h) - 27 * f(x + 2 * h) +
          2 * f(x + 3 * h)) /
         (180 * h * h);
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("homogeneous solutions solve the equation") {
  for (double ell : {0.3, 1.0, 1.7}) {
    const double X = 0.8 * pi / (2 * ell);
    double worst = 0.0;
    for (int j = 0; j <= 20; ++j) {
      const double x = -X + 2 * X * j / 20;
      const double g2 = 2 * ell * ell / std::pow(std::cos(ell * x), 2);
      const double h = 1e-3 / ell;
      worst = std::max(worst, std::abs(second_diff7([&](double t) { return homogeneous_u1(ell, t); }, x, h) -
                                       g2 * homogeneous_u1(ell, x)) / (1 + g2 * std::abs(homogeneous_u1(ell, x))));
      worst = std::max(worst, std::abs(second_diff7([&](double t) { return homogeneous_u2(ell, t); }, x, h) -
                                       g2 * homogeneous_u2(ell, x)) / (1 + g2 * std::abs(homogeneous_u2(ell, x))));
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("homogeneous Dirichlet problem") {
  CylinderChart chart(1.0);
  const double X = 1.2;
  const auto prof = solve_rotational(chart, [](double) { return 0.0; }, Dirichlet{X, 0.7, -0.4});
  // c₁u₁ + c₂u₂ through (±X): u₁ is odd, u₂ even.
  const double c1 = (-0.4 - 0.7) / (2 * homogeneous_u1(1.0, X));
  const double c2 = (-0.4 + 0.7) / (2 * homogeneous_u2(1.0, X));
  for (double x : {-1.0, -0.3, 0.0, 0.5, 1.1}) {
    CHECK(prof.value_at(x) == doctest::Approx(c1 * homogeneous_u1(1.0, x) + c2 * homogeneous_u2(1.0, x)).epsilon(1e-9));
  }
  CHECK(prof.max_residual([](double) { return 0.0; }) < 1e-6);
}

TEST_CASE("constant rhs with bounded condition matches variation of parameters") {
  CylinderChart chart(1.0);
  auto rhs = [](double) { return -2.0; };
  const auto prof = solve_rotational(chart, rhs, Bounded{});
  const std::vector<double> pts{-1.2, -0.6, 0.0, 0.4, 1.0, 1.4};
  const auto oracle = variation_of_parameters(chart, rhs, Bounded{}, pts);
  for (std::size_t i = 0; i < pts.size(); ++i) CHECK(rel_err(prof.value_at(pts[i]), oracle[i]) < 1e-6);
  // u = 1 would need 2g = 2 everywhere; it is not the solution.
  CHECK(std::abs(prof.at_center() - 1.0) > 1e-2);
  CHECK(prof.max_residual(rhs) < 1e-6 * 2.0);
}

TEST_CASE("random Dirichlet problems agree with variation of parameters") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double ell = 0.3 + 1.5 * u(rng);
    CylinderChart chart(ell);
    const double X = (0.3 + 0.6 * u(rng)) * chart.half_width();
    const double a = 2 * u(rng) - 1, b = 2 * u(rng) - 1, k = 3 * u(rng);
    auto rhs = [=](double x) { return a + b * std::cos(k * x) + 0.5 * x; };
    const Dirichlet bc{X, 2 * u(rng) - 1, 2 * u(rng) - 1};
    const auto prof = solve_rotational(chart, rhs, bc);
    const std::vector<double> pts{-0.7 * X, -0.2 * X, 0.0, 0.45 * X, 0.9 * X};
    const auto oracle = variation_of_parameters(chart, rhs, bc, pts);
    double scale = 0.0;
    for (double v : prof.u) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(std::abs(prof.value_at(pts[i]) - oracle[i]) < 1e-6 * scale);
  }
}

TEST_CASE("Dirichlet too close to the end is rejected") {
  CylinderChart chart(1.0);
  CHECK_THROWS_AS((void)solve_rotational(chart, [](double) { return 0.0; }, Dirichlet{pi / 2 - 1e-8, 0, 0}),
                  wph::ConditioningError);
}

TEST_CASE("constant function identity") {
  for (double ell : {0.2, 1.0, 2.5}) {
    CylinderChart chart(ell);
    // (Δ - 2)u = -2 reads u'' - 2g u = -2g; multiplied by cos² this is -2ell².
    const auto prof = solve_rotational_scaled(chart, [&](double) { return -2 * ell * ell; }, Bounded{});
    for (double v : prof.u) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("first term of a constant differential") {
  CHECK(first_term(QuadDiff(CylinderChart(1.0), Constant{0.0})) == 0.0);
  for (double ell : {0.25, 1.0, 1.8}) {
    const Complex c(0.6, -0.8);
    QuadDiff phi(CylinderChart(ell), Constant{c});
    const auto prof = first_term_profile(phi);
    for (double x : {-0.9, 0.0, 0.3}) {
      const double xs = x * prof.x_max();
      CHECK(prof.value_at(xs) == doctest::Approx(std::norm(c) * std::pow(std::cos(ell * xs), 2) / (2 * std::pow(ell, 4)))
                                     .epsilon(1e-9));
    }
    CHECK(first_term(phi) == doctest::Approx(std::norm(c) / (2 * std::pow(ell, 3))).epsilon(1e-9));
    CHECK(first_term(phi.scaled(3.0)) == doctest::Approx(9 * first_term(phi)).epsilon(1e-12));
  }
}

TEST_CASE("first term mesh refinement and maximum principle") {
  QuadDiff phi(CylinderChart(1.0), Constant{1.0});
  RadialOptions fine;
  fine.intervals = 8192;
  CHECK(rel_err(first_term(phi), first_term(phi, fine)) < 1e-6);

  QuadDiff four(CylinderChart(0.9), CylinderFourier{{{1, {0.2, 0.1}, {0.05, -0.1}}, {0, {0.3, 0.2}, {0, 0}}}});
  const auto prof = first_term_profile(four);
  double sup = 0.0;
  for (int j = 0; j < 400; ++j) {
    const double x = -prof.x_max() * 0.999 + 2 * 0.999 * prof.x_max() * j / 399;
    for (int k = 0; k < 32; ++k) sup = std::max(sup, four.norm_sq({x, k / 32.0}));
  }
  for (double v : prof.u) {
    CHECK(v >= -1e-12);
    CHECK(v <= sup + 1e-8);
  }
}

TEST_CASE("polarised first term is bilinear") {
  CylinderChart chart(0.8);
  QuadDiff a(chart, CylinderFourier{{{1, {0.2, 0.1}, {0.0, 0.3}}}});
  QuadDiff b(chart, CylinderFourier{{{0, {0.5, -0.1}, {0, 0}}, {1, {0.1, 0.0}, {0.2, 0.1}}}});
  CHECK(first_term(a, a) == doctest::Approx(first_term(a)).epsilon(1e-12));
  CHECK(first_term(a + b) ==
        doctest::Approx(first_term(a) + 2 * first_term(a, b) + first_term(b)).epsilon(1e-9));
}

TEST_CASE("subsolution inequality") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CylinderChart chart(0.7);
  std::vector<Complex> cyl_pts;
  for (int i = 0; i < 2000; ++i) cyl_pts.emplace_back((2 * u(rng) - 1) * 0.95 * chart.half_width(), u(rng));
  // ‖Φ‖² peaks at ell⁻⁴|c|²; normalise so the absolute tolerance is meaningful.
  const Complex c = std::pow(0.7, 2) * Complex(0.6, 0.8);
  QuadDiff phi(chart, Constant{c});
  const auto r1 = subsolution_gap(phi, cyl_pts);
  CHECK(r1.min_gap >= -1e-6);
  CHECK(r1.evaluated > 1000);
  const auto r2 = subsolution_gap(phi.scaled(2.0), cyl_pts);
  CHECK(r2.min_gap == doctest::Approx(4 * r1.min_gap).epsilon(1e-6).scale(1e-9));

  std::vector<Complex> disk_pts;
  for (int i = 0; i < 2000; ++i) disk_pts.push_back(std::polar(0.1 + 0.8 * u(rng), 2 * pi * u(rng)));
  QuadDiff z(DiskChart{}, DiskPolynomial{{0.0, 1.0}});
  const auto scale = 1.0 / subsolution_gap(z, disk_pts).max_v;
  const auto r3 = subsolution_gap(z.scaled(std::sqrt(scale)), disk_pts);
  CHECK(r3.min_gap >= -1e-6);
  CHECK(r3.max_v == doctest::Approx(1.0));
}

TEST_CASE("points near zeros of the differential are skipped") {
  QuadDiff z(DiskChart{}, DiskPolynomial{{0.0, 1.0}});
  const auto r = subsolution_gap(z, {Complex(1e-4, 0.0), Complex(0.5, 0.0)});
  CHECK(r.skipped == 1);
  CHECK(r.evaluated == 1);
}

TEST_CASE("collar decay") {
  CylinderChart chart(0.6);
  QuadDiff even(chart, CylinderFourier{{{1, {0.3, 0.0}, {0.3, 0.0}}}});
  const auto check = verify_collar_decay(even);
  CHECK(check.ok);
  CHECK(check.worst_ratio == doctest::Approx(1.0));
  CHECK(check.bound(check.bound.x_max) == doctest::Approx(check.bound.c0));
  CHECK(check.bound(0.3) == doctest::Approx(check.bound(-0.3)));
  CHECK(check.bound(0.0) < check.bound(0.1));

  CHECK_THROWS_AS((void)verify_collar_decay(QuadDiff(chart, Constant{1.0})), wph::PreconditionViolation);
  const auto zero = verify_collar_decay(QuadDiff(chart, CylinderFourier{}));
  CHECK(zero.ok);
  CHECK(zero.bound.c0 == 0.0);
}

TEST_CASE("collar decay on random zero-period differentials") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    CylinderChart chart(0.4 + 0.5 * u(rng));
    CylinderFourier f;
    for (int n = 1; n <= 2; ++n) f.modes.push_back({n, {g(rng), g(rng)}, {g(rng), g(rng)}});
    CHECK(verify_collar_decay(QuadDiff(chart, f)).ok);
  }
}

TEST_CASE("flat-parallel scaling") {
  const auto res = flatparallel_scaling({0.4, 0.2, 0.1, 0.05, 0.025});
  CHECK(res.u0_fit.slope == doctest::Approx(1.0).epsilon(0.15));
  CHECK(res.integral_fit.slope == doctest::Approx(2.0).epsilon(0.075));
  // Each product is of order ell^-3 while their sum stays bounded.
  CHECK(res.split_fit.slope <= -2.0);
  CHECK_THROWS_AS((void)flatparallel_scaling({0.1}), wph::FitError);
}

TEST_CASE("log-log fit") {
  const auto f = loglog_fit({1, 2, 4, 8}, {3, 12, 48, 192});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)loglog_fit({1, 2}, {1, 2}), wph::FitError);
}

TEST_CASE("cusp mu decay") {
  QuadDiff inv(CuspChart{}, CuspPrincipal{1.0, {}, 0.0});
  const double r = std::exp(-2.0);
  CHECK(std::abs(inv.mu(r)) == doctest::Approx(4 * std::exp(-2.0)));
  CHECK(cusp_mu_decay(inv, {r}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cusp_mu_decay(inv.scaled(2.0), {0.01, 0.3, 0.7}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cusp_mu_decay(QuadDiff(CuspChart{}, CuspPrincipal{0.0, {}, 0.0}), {0.5}) == 0.0);
  QuadDiff rot(CuspChart{}, CuspPrincipal{Complex(0.0, 3.0), {}, 0.0});
  CHECK(cusp_mu_decay(rot, {0.05, 0.5}) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("cusp tail first term") {
  // u = e^{-y} solves y²u'' - 2u = -2v for v = (2 - y²) e^{-y} / 2.
  auto v = [](double y) { return 0.5 * (2 - y * y) * std::exp(-y); };
  const double yj = 0.3;
  for (double yend : {2.0, 10.0, 1e6}) {
    const double expected = wph::quad::integrate([](double y) { return std::exp(-y) / y; }, yj, std::min(yend, 80.0), 64, 32);
    CHECK(cusp_tail_first_term(v, yj, yend, std::exp(-yj)) == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK(cusp_tail_first_term([](double) { return 0.0; }, 1.0, 4.0, 2.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS((void)cusp_tail_first_term([](double) { return 1.0; }, 1.0, 4.0, 1.0), wph::DivergenceError);
}
