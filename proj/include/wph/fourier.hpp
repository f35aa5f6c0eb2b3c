#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

// Thin FFTW wrappers for real periodic samples. All functions take n uniform
// samples of one period (no duplicated endpoint).
namespace wph::fourier {

using Complex = std::complex<double>;

/// Unnormalised real-to-complex transform, n/2 + 1 coefficients.
std::vector<Complex> forward(std::span<const double> samples);

/// Inverse of `forward`, including the 1/n normalisation.
std::vector<double> backward(std::span<const Complex> coeffs, std::size_t n);

/// Multiply each mode by m(k), k = 2πj/period the angular wavenumber.
/// The Nyquist mode (even n) keeps only the real part of m.
std::vector<double> apply_multiplier(std::span<const double> samples, double period,
                                     const std::function<Complex(double)>& multiplier);

/// Spectral derivative of the given order.
std::vector<double> derivative(std::span<const double> samples, double period, int order = 1);

/// Samples of the trigonometric interpolant shifted by tau: f(s_i + tau).
std::vector<double> shifted(std::span<const double> samples, double period, double tau);

}  // namespace wph::fourier
