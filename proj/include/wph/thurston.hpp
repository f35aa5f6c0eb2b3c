#pragma once

#include "wph/qdiff.hpp"

// Pointwise form of the Thurston limit on the disk: geodesic-flow
// correlation along rays from a base point and the 4/3 constant.
namespace wph::thurston {

using qdiff::Complex;
using qdiff::QuadDiff;

struct FlowCorrelation {
  QuadDiff phi;
  Complex p{0.0, 0.0};
  double t_max = 40.0;
  int n_theta = 64;
  int t_panels = 80;
  int order = 16;
  /// Allowed size of the neglected tail ∫_{t_max}^∞.
  double tail_tol = 1e-10;
};

/// (1/2π) ∫ Re(e^{2iθ} φ(p)) / g(p) dθ.
[[nodiscard]] double fiber_average_first_variation(const QuadDiff& phi, Complex p, int n_theta = 64);

/// φ transported by the disk automorphism w ↦ (w + p)/(1 + conj(p) w), so
/// that the new base point is 0. Polynomial input, values only.
[[nodiscard]] Complex recentered_phi(const QuadDiff& phi, Complex p, Complex w);

/// (1/2π) ∫∫ e^{-t} [Im(e^{2iθ}φ(0))/g(0)] [Im(e^{2iθ}φ(r e^{iθ}))/g(r)] dt dθ with
/// r = tanh(t/2), after recentering at p.
[[nodiscard]] double flow_correlation_I2(const FlowCorrelation& fc);

/// -2(Δ - 2)⁻¹(1) at the centre of the radial solver on a cylinder of core ell.
[[nodiscard]] double constant_function_identity(double ell = 1.0);

/// (1/2π) ∫ Im(e^{2iθ}a) Im(e^{2iθ}b) dθ by quadrature.
[[nodiscard]] double half_angle_average(Complex a, Complex b, int n_theta = 64);

/// ∫₀¹ 2(1 - r)² dr by quadrature.
[[nodiscard]] double radial_constant();

struct ThurstonRatio {
  double i1 = 0.0;
  double i2 = 0.0;
  double wp_density = 0.0;
  double ratio = 0.0;
  /// True when φ(p) = 0 forced the annulus average.
  bool averaged = false;
};

/// (I₁ + I₂) / ‖Φ‖² at p, or over an annulus when φ vanishes at p. Zero φ
/// gives ratio 0.
[[nodiscard]] ThurstonRatio thurston_ratio(const QuadDiff& phi, Complex p = {0.0, 0.0}, double t_max = 40.0);

}  // namespace wph::thurston
