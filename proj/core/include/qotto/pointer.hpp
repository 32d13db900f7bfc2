// pointer.hpp — Gaussian pointer measurement model: conditional states,
// outcome densities, and the coherence suppression factors used by the
// monitored cycle maps.
#pragma once

#include "qotto/strokes.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace qotto {

/// Width (standard deviation) of the pointer's initial Gaussian state, in
/// energy units. Zero and infinity are honored as exact branches: zero is the
/// projective limit, infinity performs no measurement at all.
struct PointerWidth {
  double sigma = 1.0;

  bool is_zero() const { return sigma == 0.0; }
  bool is_infinite() const { return std::isinf(sigma); }
  bool is_finite_positive() const { return sigma > 0.0 && !is_infinite(); }
  bool operator==(const PointerWidth&) const = default;

  static PointerWidth zero() { return {0.0}; }
  static PointerWidth infinite() { return {std::numeric_limits<double>::infinity()}; }
};

/// Coherence damping factor exp(-gap^2 / (8 sigma^2)) picked up by an
/// off-diagonal element across one pointer measurement. Exact limits:
/// 1 for gap = 0 or sigma = inf, 0 for sigma = 0 with gap != 0.
double suppression_factor(double gap, PointerWidth sigma);

/// Weighted sum of Gaussians over one outcome variable. sigma = 0 components
/// are point masses.
struct Gaussian1D {
  double weight = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
};

struct GaussianMixture1D {
  std::vector<Gaussian1D> components;

  double weight_sum() const;
  double mean() const;
  double variance() const;
  /// Density at x; point masses contribute nothing except under cdf().
  double pdf(double x) const;
  double cdf(double x) const;
};

/// Non-normalized post-measurement state conditioned on pointer outcome x;
/// its trace is the outcome density p(x). Requires finite sigma; the sigma = 0
/// branch snaps x to the nearest eigenvalue and pins the state to it.
Matrix conditional_state(const DensityMatrix& rho, const StrokeHamiltonian& h,
                         PointerWidth sigma, double x);

/// Outcome density p(x) = sum_m <m|rho|m> G_sigma(x - e_m); for sigma = 0 the
/// components are point masses at the eigenvalues.
GaussianMixture1D outcome_density(const DensityMatrix& rho, const StrokeHamiltonian& h,
                                  PointerWidth sigma);

/// State after measuring and discarding the outcome: populations untouched,
/// each off-diagonal damped by its suppression factor. sigma = inf returns
/// rho unchanged, sigma = 0 removes all coherences.
DensityMatrix post_measurement_state(const DensityMatrix& rho, const StrokeHamiltonian& h,
                                     PointerWidth sigma);

}  // namespace qotto
