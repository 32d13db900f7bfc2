// schemes.hpp — full-cycle CPTP maps for the unmonitored, projective, and
// pointer-monitored Otto cycles, their steady states, and the conditional
// block superoperators carrying the per-outcome bookkeeping.
#pragma once

#include "qotto/pointer.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace qotto {

enum class Scheme { UM, TPM, S1, S2, S3 };

std::string_view to_string(Scheme scheme);
Scheme scheme_from_string(std::string_view name);

/// Number of pointers the scheme uses: 4 for S1 (energy at each cycle point),
/// 3 for S2 (per-stroke work and heat), 2 for S3 (total work and heat),
/// 0 for UM and TPM.
int pointer_count(Scheme scheme);

struct SchemeConfig {
  Scheme scheme = Scheme::UM;
  std::vector<PointerWidth> widths;  // size must equal pointer_count(scheme)

  bool uniform_widths() const;

  static SchemeConfig unmonitored() { return {Scheme::UM, {}}; }
  static SchemeConfig tpm() { return {Scheme::TPM, {}}; }
  static SchemeConfig uniform(Scheme scheme, PointerWidth width);
};

/// Perfectly thermalizing cold stroke (exact reset to the Gibbs state).
struct PerfectReset {
  double beta;
};

using ColdStroke = std::variant<BathSpec, PerfectReset>;

/// All engine parameters. The Hamiltonian returns to h1 at point 4 and stays
/// at h2 across the hot isochore (points 2 and 3).
struct CycleSpec {
  StrokeHamiltonian h1, h2;
  WorkStrokeSpec work_stroke;
  BathSpec hot;
  ColdStroke cold;

  double cold_beta() const;
  void validate() const;  // throws unless beta_c > beta_h etc.
};

/// Measurement outcome labels at the four cycle points, one unprimed and one
/// primed branch per point (0-based eigenstate indices).
struct IndexPair {
  std::array<int, 4> m{};
  std::array<int, 4> mp{};

  bool diagonal() const { return m == mp; }
};

/// Per-trajectory energy bookkeeping: compression work, expansion work, and
/// heat drawn from the hot bath.
struct TrajectoryValues {
  double w1 = 0.0;
  double w3 = 0.0;
  double qh = 0.0;

  double w() const { return w1 + w3; }
};

TrajectoryValues trajectory_values(const StrokeHamiltonian& h1, const StrokeHamiltonian& h2,
                                   const std::array<int, 4>& m);

/// The concrete stroke operators of one cycle, built once per parameter set
/// and shared by channel assembly, steady-state solving, and statistics.
struct CycleOperators {
  StrokeHamiltonian h1, h2;
  Matrix u1, u2;
  Channel hot;
  Channel cold;

  static CycleOperators build(const CycleSpec& spec);

  Eigen::Index dim() const { return h1.dim(); }
};

/// Liouville matrix of the (non-trace-preserving) conditional map
///   rho -> Phi_c[ P1_{m4} U2 P2_{m3} Phi_h( P2_{m2} U1 P1_{m1} rho
///                 P1_{m1'} U1† P2_{m2'} ) P2_{m3'} U2† P1_{m4'} ],
/// where Pk_m projects onto the m-th eigenstate of the Hamiltonian at point k.
Matrix conditional_block(const CycleOperators& ops, const IndexPair& pair);

/// Scheme weight of one conditional block: a product of suppression factors
/// determined by which quantities the scheme's pointers record. 1 for UM,
/// the diagonal indicator for TPM.
double scheme_weight(const SchemeConfig& config, const StrokeHamiltonian& h1,
                     const StrokeHamiltonian& h2, const IndexPair& pair);

Channel cycle_channel(const CycleOperators& ops, const SchemeConfig& config);
Channel cycle_channel(const CycleSpec& spec, const SchemeConfig& config);

DensityMatrix steady_state_for_scheme(const CycleOperators& ops, const SchemeConfig& config);
DensityMatrix steady_state_for_scheme(const CycleSpec& spec, const SchemeConfig& config);

/// Spectrum diagnostics for the projective limits of S2 and S3: S2 collapses
/// to TPM at zero width only when no off-diagonal pair has all per-stroke
/// gaps vanishing; S3 always retains pairs whose total work and heat gaps
/// both vanish.
struct NondegeneracyReport {
  // off-diagonal pairs with w1, w3 and qh gaps all zero (defeats S2 at sigma=0)
  std::vector<IndexPair> s2_degenerate_pairs;
  // off-diagonal pairs with total-work gap zero
  std::vector<IndexPair> s3_zero_work_gap_pairs;
  // subset of the above whose heat gap also vanishes (survive S3 at sigma=0)
  std::vector<IndexPair> s3_surviving_pairs;

  bool s2_reaches_tpm_limit() const { return s2_degenerate_pairs.empty(); }
  bool s3_reaches_tpm_limit() const { return s3_surviving_pairs.empty(); }
  std::string summary() const;
};

NondegeneracyReport nondegeneracy_check(const CycleSpec& spec);

}  // namespace qotto
