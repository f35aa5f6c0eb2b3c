#include "wph/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "wph/errors.hpp"

namespace wph::fourier {
namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::vector<Complex> forward(std::span<const double> samples) {
  const auto n = samples.size();
  if (n == 0) throw InputError("empty sample vector");
  std::vector<double> in(samples.begin(), samples.end());
  std::vector<Complex> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> backward(std::span<const Complex> coeffs, std::size_t n) {
  if (coeffs.size() != n / 2 + 1) throw InputError("coefficient count does not match n");
  std::vector<Complex> in(coeffs.begin(), coeffs.end());
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> apply_multiplier(std::span<const double> samples, double period,
                                     const std::function<Complex(double)>& multiplier) {
  const auto n = samples.size();
  auto coeffs = forward(samples);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    const double k = 2.0 * std::numbers::pi * static_cast<double>(j) / period;
    Complex m = multiplier(k);
    if (n % 2 == 0 && j == n / 2) m = Complex(m.real(), 0.0);
    coeffs[j] *= m;
  }
  return backward(coeffs, n);
}

std::vector<double> derivative(std::span<const double> samples, double period, int order) {
  const Complex ik_unit(0.0, 1.0);
  return apply_multiplier(samples, period, [&](double k) {
    Complex m(1.0, 0.0);
    for (int i = 0; i < order; ++i) m *= ik_unit * k;
    return m;
  });
}

std::vector<double> shifted(std::span<const double> samples, double period, double tau) {
  return apply_multiplier(samples, period, [&](double k) { return std::polar(1.0, k * tau); });
}

}  // namespace wph::fourier
