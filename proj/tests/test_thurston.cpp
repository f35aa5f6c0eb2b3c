#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wph/errors.hpp"
#include "wph/thurston.hpp"

using namespace wph::thurston;
using wph::geom::DiskChart;
using wph::qdiff::DiskPolynomial;
using std::numbers::pi;

namespace {
QuadDiff poly(std::vector<Complex> c) { return QuadDiff(DiskChart{}, DiskPolynomial{std::move(c)}); }
}  // namespace

TEST_CASE("fiber average of the first variation vanishes") {
  CHECK(std::abs(fiber_average_first_variation(poly({1.0}), 0.0)) < 1e-15);
  CHECK(std::abs(fiber_average_first_variation(poly({0.0, 0.0, 1.0}), 0.3)) < 1e-10);
  CHECK(std::abs(fiber_average_first_variation(poly({Complex(0.2, 1), Complex(-1, 0.5), 3.0}), Complex(-0.4, 0.2))) <
        1e-12);
}

TEST_CASE("identities") {
  CHECK(radial_constant() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  const Complex a(0.3, -1.2), b(2.0, 0.7);
  CHECK(std::abs(half_angle_average(a, b) - (a * std::conj(b)).real() / 2) < 1e-12);
  CHECK(std::abs(half_angle_average(a, a) - std::norm(a) / 2) < 1e-12);
  CHECK(std::abs(constant_function_identity() - 1.0) < 1e-8);
  CHECK(std::abs(constant_function_identity(0.3) - 1.0) < 1e-8);
}

TEST_CASE("recentering preserves the pointwise norm") {
  const auto phi = poly({Complex(0.5, 0.1), Complex(0.0, 1.0), Complex(0.3, -0.2), 0.4});
  for (Complex p : {Complex(0.2, 0.1), Complex(-0.5, 0.3)}) {
    const Complex a0 = recentered_phi(phi, p, 0.0);
    CHECK(std::norm(a0) / 16 == doctest::Approx(phi.norm_sq(p)).epsilon(1e-13));
  }
}

TEST_CASE("flow correlation equals a third of the pointwise norm") {
  const Complex c(0.7, -0.4);
  FlowCorrelation constant{poly({c})};
  CHECK(flow_correlation_I2(constant) == doctest::Approx(std::norm(c) / 48).epsilon(1e-6));

  FlowCorrelation vanishing{poly({0.0, 1.0})};
  CHECK(std::abs(flow_correlation_I2(vanishing)) < 1e-14);

  FlowCorrelation cubic{poly({1.0, 0.0, 0.0, 1.0})};
  CHECK(flow_correlation_I2(cubic) == doctest::Approx(1.0 / 48).epsilon(1e-6));

  const auto mixed = poly({Complex(0.5, 0.1), Complex(0.0, 1.0), Complex(0.3, -0.2), 0.4});
  for (Complex p : {Complex(0.0, 0.0), Complex(0.3, 0.2), Complex(-0.1, -0.5)}) {
    FlowCorrelation fc{mixed, p};
    CHECK(flow_correlation_I2(fc) == doctest::Approx(mixed.norm_sq(p) / 3).epsilon(1e-6));
  }
}

TEST_CASE("flow correlation is invariant under a phase rotation") {
  const auto phi = poly({Complex(0.5, 0.1), Complex(0.0, 1.0), 0.4});
  const double base = flow_correlation_I2({phi, Complex(0.2, -0.1)});
  CHECK(flow_correlation_I2({phi.scaled(std::polar(1.0, 0.9)), Complex(0.2, -0.1)}) ==
        doctest::Approx(base).epsilon(1e-10));
}

TEST_CASE("short flow time is rejected") {
  FlowCorrelation fc{poly({1.0}), 0.0, 5.0};
  CHECK_THROWS_AS((void)flow_correlation_I2(fc), wph::TruncationError);
  CHECK_THROWS_AS((void)flow_correlation_I2({poly({1.0}), Complex(1.5, 0.0)}), wph::DomainError);
}

TEST_CASE("Thurston ratio") {
  const auto one = thurston_ratio(poly({1.0}));
  CHECK(one.ratio == doctest::Approx(4.0 / 3.0).epsilon(1e-5));
  CHECK_FALSE(one.averaged);
  const auto z = thurston_ratio(poly({0.0, 1.0}));
  CHECK(z.averaged);
  CHECK(std::abs(z.ratio - 4.0 / 3.0) < 1e-4);
  CHECK(thurston_ratio(poly({0.0})).ratio == 0.0);
  CHECK(std::abs(thurston_ratio(poly({1.0, 0.0, 0.0, 1.0}), Complex(0.2, 0.3)).ratio - 4.0 / 3.0) < 1e-5);
}
