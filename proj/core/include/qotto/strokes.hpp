// strokes.hpp — Otto-cycle building blocks: Hamiltonians, work-stroke
// unitaries (parametric and time-resolved), and thermalization channels.
#pragma once

#include "qotto/linops.hpp"

#include <variant>

namespace qotto {

/// Hamiltonian at one cycle point, stored as an eigensystem. `basis` holds
/// the orthonormal eigenvectors as columns, matching the ascending `energies`.
struct StrokeHamiltonian {
  Eigen::VectorXd energies;
  Matrix basis;

  Eigen::Index dim() const { return energies.size(); }
  Matrix op() const;                    // sum_m e_m |m><m|
  Matrix projector(Eigen::Index m) const;
  Vector eigenvector(Eigen::Index m) const { return basis.col(m); }
  double gap() const;                   // e_max - e_min

  /// Two-level Hamiltonian with energies ∓omega/2 in the computational basis.
  static StrokeHamiltonian two_level(double omega);
  /// Eigendecomposition of a Hermitian matrix; eigenvector phases are fixed
  /// deterministically (largest-magnitude component made real positive).
  static StrokeHamiltonian from_matrix(const Matrix& h);
  static StrokeHamiltonian from_eigensystem(Eigen::VectorXd energies, Matrix basis);
};

enum class StrokeDirection { Compression, Expansion };

/// Two-parameter family of work-stroke unitaries for a two-level system:
/// transition probability r in [0,1] and transition-amplitude phase phi.
struct ParametricStroke {
  double r = 0.0;
  double phi = 0.0;
};

/// Time-resolved drive sweeping lambda(t) = omega1 (1 - t/tau_u) + omega2 t/tau_u
/// through a sigma_x -> sigma_z rotation; expansion runs the time reverse.
struct ProtocolStroke {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double tau_u = 1.0;
  int steps = 10000;
};

using WorkStrokeSpec = std::variant<ParametricStroke, ProtocolStroke>;

/// Bath occupation number entering the dissipator. BoseEinstein
/// (n = 1/(e^{beta*gap} - 1)) makes the Gibbs state stationary under the
/// master equation; FermiDirac (n = 1/(e^{beta*gap} + 1)) is kept as an
/// alternative convention for comparison runs.
enum class OccupationConvention { BoseEinstein, FermiDirac };

struct BathSpec {
  double beta;     // inverse temperature, > 0
  double gamma;    // bare coupling rate, >= 0
  double tau_b;    // isochore duration, >= 0
  OccupationConvention convention = OccupationConvention::BoseEinstein;
};

/// Compression unitary U1 (from = H at point 1, to = H at point 2) or its
/// time-reversed expansion partner U2 = Theta U1† Theta† (from/to swapped).
/// Two-level systems only.
Matrix parametric_unitary(const ParametricStroke& spec, const StrokeHamiltonian& from,
                          const StrokeHamiltonian& to, StrokeDirection direction);

/// Time-ordered product of midpoint-rule step exponentials over [0, tau_u].
/// Each step is the exact exponential of a 2x2 Hermitian generator, so the
/// result is unitary to machine precision for any step count.
Matrix protocol_unitary(const ProtocolStroke& spec, StrokeDirection direction);

/// Hamiltonians at the protocol endpoints: H1 = (omega1/2) sigma_x,
/// H2 = (omega2/2) sigma_z.
StrokeHamiltonian protocol_initial_hamiltonian(const ProtocolStroke& spec);
StrokeHamiltonian protocol_final_hamiltonian(const ProtocolStroke& spec);

struct TransitionParams {
  double r = 0.0;
  double phi = 0.0;
  bool phase_defined = true;    // false when r is 0 or 1 (phase drops out)
  double residual = 0.0;        // min over global phase of ||U - U(r,phi)||_F
  bool parametric_form = true;  // false when residual exceeds tolerance
};

/// Inverts the parametric family: r = |<e2(to)|U|e1(from)>|^2 and phi chosen
/// so that parametric_unitary(r, phi) reproduces U up to a global phase.
TransitionParams effective_transition_params(const Matrix& u, const StrokeHamiltonian& from,
                                             const StrokeHamiltonian& to,
                                             double form_tol = 1e-6);

/// e^{-beta H} / Z, computed in the eigenbasis with an overflow-guarding shift.
DensityMatrix gibbs_state(const StrokeHamiltonian& h, double beta);

double thermal_occupation(double beta, double gap, OccupationConvention convention);

/// Population relaxation rate gamma * (2 n_b + 1) of the dissipator.
double effective_rate(const StrokeHamiltonian& h, const BathSpec& bath);

/// Generator of the damped two-level dynamics: -i[H, .] plus emission and
/// absorption dissipators with ladder operators between the eigenstates of H.
Matrix thermal_liouvillian(const StrokeHamiltonian& h, const BathSpec& bath);

/// exp(L * tau_b) for the Liouvillian above. Two-level systems only.
Channel thermal_channel(const StrokeHamiltonian& h, const BathSpec& bath);

/// Idealized perfectly thermalizing stroke: rho -> Tr[rho] * gibbs_state(h, beta).
Channel reset_channel(const StrokeHamiltonian& h, double beta);

/// rho -> U rho U† as a Channel.
Channel unitary_channel(const Matrix& u);

}  // namespace qotto
