// stats.hpp — exact joint work–heat statistics as Gaussian mixtures, plus
// characteristic functions, moments, marginals, and state diagnostics.
#pragma once

#include "qotto/schemes.hpp"

#include <Eigen/Dense>

namespace qotto {

/// One component of the joint (w, q_h) mixture. The covariance may be
/// singular or zero (point masses for projective measurements) and carries
/// +inf entries in the no-measurement limit of infinite pointer width.
struct GaussianComponent2D {
  double weight = 0.0;
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();

  bool has_infinite_cov() const;
  bool is_point_mass() const { return cov.isZero(0.0); }
};

struct GaussianMixture2D {
  std::vector<GaussianComponent2D> components;

  double weight_sum() const;
  /// Joint density at (w, q); point masses and infinite-width components
  /// contribute nothing.
  double pdf(double w, double q) const;
};

/// Exact joint distribution of total work and hot heat for a monitored
/// scheme, evaluated at the given steady state. Conjugate outcome branches
/// are merged into real weights; components with exactly zero weight are
/// dropped. Throws for the unmonitored scheme, which has no outcome record.
GaussianMixture2D joint_distribution(const CycleOperators& ops, const SchemeConfig& config,
                                     const DensityMatrix& steady);
GaussianMixture2D joint_distribution(const CycleSpec& spec, const SchemeConfig& config,
                                     const DensityMatrix& steady);

/// chi(k1, k2) = sum_i w_i exp(i k·mu_i - k·C_i·k / 2).
Complex characteristic_function(const GaussianMixture2D& dist, double k1, double k2);

/// <w^n q^m> by closed-form Gaussian moment evaluation; supports n + m <= 4.
double moment(const GaussianMixture2D& dist, int n, int m);

struct Cumulants {
  double w_mean = 0.0;
  double w_var = 0.0;
  double q_mean = 0.0;
};

Cumulants cumulants(const GaussianMixture2D& dist);

/// Integrate out the heat variable.
GaussianMixture1D marginal_work(const GaussianMixture2D& dist);

/// Quantum relative entropy Tr[rho (ln rho - ln ref)] >= 0. The reference
/// must be full rank; tiny negative round-off is clamped to zero.
double kl_divergence(const DensityMatrix& rho, const DensityMatrix& ref);

/// l1 coherence monotone: sum of off-diagonal magnitudes in the eigenbasis of h.
double l1_coherence(const DensityMatrix& rho, const StrokeHamiltonian& h);

/// Average work and hot heat of the unmonitored cycle from internal-energy
/// bookkeeping along the strokes, starting from the given (steady) state.
struct StrokeAverages {
  double w_mean = 0.0;
  double q_mean = 0.0;
};

StrokeAverages unmonitored_averages(const CycleOperators& ops, const DensityMatrix& steady);

}  // namespace qotto
