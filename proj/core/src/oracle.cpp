// oracle.cpp — perfect-cooling closed forms

#include "qotto/oracle.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace qotto {

void PerfectCoolingParams::validate() const {
  if (omega1 <= 0.0 || omega2 <= 0.0) {
    throw std::invalid_argument("PerfectCoolingParams: level splittings must be positive");
  }
  if (beta_c <= 0.0 || beta_h <= 0.0 || beta_c <= beta_h) {
    throw std::invalid_argument("PerfectCoolingParams: need beta_c > beta_h > 0");
  }
  if (gamma_h < 0.0 || tau_b < 0.0) {
    throw std::invalid_argument("PerfectCoolingParams: rates and durations must be >= 0");
  }
  if (r < 0.0 || r > 1.0) {
    throw std::invalid_argument("PerfectCoolingParams: r must lie in [0, 1]");
  }
}

double PerfectCoolingParams::cold_population() const {
  return 1.0 / (1.0 + std::exp(beta_c * omega1));
}

double PerfectCoolingParams::hot_population() const {
  const double n = thermal_occupation(beta_h, omega2, convention);
  return n / (2.0 * n + 1.0);
}

double w_avg_tpm_perfect(const PerfectCoolingParams& p) {
  p.validate();
  const double decay = std::exp(-p.gamma_h * p.tau_b);
  const double n_h = p.hot_population();
  const double n_c = p.cold_population();
  const double r = p.r;
  return (1.0 - decay) * ((1.0 - 2.0 * r) * p.omega1 - p.omega2) * n_h +
         (p.omega2 * (1.0 - 2.0 * r) - p.omega1) * n_c + r * (p.omega2 + p.omega1) -
         decay * (r + (1.0 - 2.0 * r) * n_c) * (p.omega2 - (1.0 - 2.0 * r) * p.omega1);
}

namespace {

double coherence_term(const PerfectCoolingParams& p) {
  return -2.0 * std::exp(-0.5 * p.gamma_h * p.tau_b) * p.r * (1.0 - p.r) * p.omega1 *
         std::cos(2.0 * p.phi + p.omega2 * p.tau_b) * std::tanh(0.5 * p.beta_c * p.omega1);
}

/// Weight exp(-omega2^2 / (4 sigma^2)) of the unmonitored value in the S1/S2
/// interpolation; the square of the per-pointer suppression factor.
double interpolation_weight(const PerfectCoolingParams& p) {
  const double s = suppression_factor(p.omega2, p.sigma);
  return s * s;
}

}  // namespace

double w_avg_um_perfect(const PerfectCoolingParams& p) {
  return w_avg_tpm_perfect(p) + coherence_term(p);
}

SchemeAverages w_avg_schemes_perfect(const PerfectCoolingParams& p) {
  const double tpm = w_avg_tpm_perfect(p);
  const double um = tpm + coherence_term(p);
  const double mix = interpolation_weight(p);
  SchemeAverages out;
  out.s1 = mix * um + (1.0 - mix) * tpm;
  out.s2 = out.s1;
  out.s3 = um;
  return out;
}

GaussianMixture1D tpm_work_distribution_perfect(const PerfectCoolingParams& p) {
  p.validate();
  const std::array<double, 2> e1{-0.5 * p.omega1, 0.5 * p.omega1};
  const std::array<double, 2> e2{-0.5 * p.omega2, 0.5 * p.omega2};
  const double n_c = p.cold_population();
  const double n_h = p.hot_population();
  const double decay = std::exp(-p.gamma_h * p.tau_b);
  // Classical Markov chain over energy trajectories: Gibbs start, transition
  // probability r in each work stroke, exponential population relaxation
  // toward n_h across the hot isochore.
  const std::array<double, 2> start{1.0 - n_c, n_c};
  auto unitary_hop = [&](int from, int to) { return from == to ? 1.0 - p.r : p.r; };
  auto thermal_hop = [&](int from, int to) {
    const double from_excited = from == 1 ? 1.0 : 0.0;
    const double excited = n_h + (from_excited - n_h) * decay;
    return to == 1 ? excited : 1.0 - excited;
  };
  GaussianMixture1D dist;
  for (int m1 = 0; m1 < 2; ++m1)
    for (int m2 = 0; m2 < 2; ++m2)
      for (int m3 = 0; m3 < 2; ++m3)
        for (int m4 = 0; m4 < 2; ++m4) {
          const double prob =
              start[m1] * unitary_hop(m1, m2) * thermal_hop(m2, m3) * unitary_hop(m3, m4);
          const double work = (e2[m2] - e1[m1]) + (e1[m4] - e2[m3]);
          dist.components.push_back({prob, work, 0.0});
        }
  return dist;
}

SchemeVariances w_var_schemes_perfect(const PerfectCoolingParams& p) {
  const GaussianMixture1D tpm = tpm_work_distribution_perfect(p);
  const double tpm_var = tpm.variance();
  const double tanh_c = std::tanh(0.5 * p.beta_c * p.omega1);
  const double cosine = std::cos(2.0 * p.phi + p.omega2 * p.tau_b);
  const double w_tpm = w_avg_tpm_perfect(p);
  const double rr = p.r * (1.0 - p.r);
  const double mix = interpolation_weight(p);  // exp(-omega2^2 / (4 sigma^2))
  const double decay_half = std::exp(-0.5 * p.gamma_h * p.tau_b);
  // Linear and quadratic coherence corrections; the suppressed schemes carry
  // one interpolation weight per power of the coherence.
  const double linear = -2.0 * rr * (p.omega1 * p.omega1 - 2.0 * p.omega1 * w_tpm * tanh_c) * cosine;
  const double quadratic =
      -4.0 * tanh_c * tanh_c * p.omega1 * p.omega1 * rr * rr * cosine * cosine;
  const double noise = p.sigma.is_infinite() ? std::numeric_limits<double>::infinity()
                                             : p.sigma.sigma * p.sigma.sigma;
  SchemeVariances out;
  out.tpm = tpm_var;
  out.s1 = tpm_var + 4.0 * noise + mix * decay_half * linear +
           mix * mix * decay_half * decay_half * quadratic;
  out.s2 = tpm_var + 2.0 * noise + mix * decay_half * linear +
           mix * mix * decay_half * decay_half * quadratic;
  out.s3 = tpm_var + 1.0 * noise + decay_half * linear + decay_half * decay_half * quadratic;
  return out;
}

}  // namespace qotto
