// oracle.hpp — closed-form averages and second cumulants of the cycle with a
// perfectly thermalizing cold stroke, used as ground truth for the numerical
// pipeline. All expressions are exact in this regime.
#pragma once

#include "qotto/pointer.hpp"
#include "qotto/strokes.hpp"

namespace qotto {

/// Parameters of the perfect-cooling regime. `gamma_h` is the effective hot
/// relaxation rate (excited population decays as exp(-gamma_h * tau_b)); for
/// a bath with bare rate gamma and occupation n_b this is gamma * (2 n_b + 1),
/// see effective_rate().
struct PerfectCoolingParams {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double beta_c = 1.0;
  double beta_h = 0.1;
  double gamma_h = 0.0;
  double tau_b = 0.0;
  double r = 0.0;
  double phi = 0.0;
  PointerWidth sigma{1.0};  // uniform width across all pointers
  OccupationConvention convention = OccupationConvention::BoseEinstein;

  void validate() const;
  /// Excited-state population of the cold Gibbs state, 1/(1 + e^{beta_c omega1}).
  double cold_population() const;
  /// Stationary excited-state population of the hot isochore.
  double hot_population() const;
};

/// Average work measured by two-point projective energy measurements.
double w_avg_tpm_perfect(const PerfectCoolingParams& p);

/// Average work of the unmonitored cycle; equals the projective value plus a
/// coherence term oscillating in tau_b with period 2 pi / omega2 under an
/// exp(-gamma_h tau_b / 2) envelope.
double w_avg_um_perfect(const PerfectCoolingParams& p);

struct SchemeAverages {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

/// Scheme averages: S1 and S2 interpolate between the unmonitored and
/// projective values with weight exp(-omega2^2 / (4 sigma^2)); S3 stays at
/// the unmonitored value for every width.
SchemeAverages w_avg_schemes_perfect(const PerfectCoolingParams& p);

struct SchemeVariances {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double tpm = 0.0;
};

/// Second cumulants of work. The pointer noise adds 4, 2, and 1 units of
/// sigma^2 for S1, S2, S3; the TPM value comes from the exact discrete
/// trajectory distribution in this regime.
SchemeVariances w_var_schemes_perfect(const PerfectCoolingParams& p);

/// Exact discrete work distribution of the projective scheme in the
/// perfect-cooling regime (16 energy-trajectory outcomes), exposed as an
/// independent enumeration oracle.
GaussianMixture1D tpm_work_distribution_perfect(const PerfectCoolingParams& p);

}  // namespace qotto
