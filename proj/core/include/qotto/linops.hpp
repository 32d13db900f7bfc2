// linops.hpp — dense complex matrix helpers, quantum channels, fixed points
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace qotto {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Numerical tolerances used by the validating types below.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdSlack = 1e-10;
inline constexpr double kTracePreservingTol = 1e-10;
inline constexpr double kChoiPsdSlack = 1e-8;
inline constexpr double kFixedPointResidualTol = 1e-10;
inline constexpr double kFixedPointDegeneracyTol = 1e-9;

// Column-stacking convention, used everywhere a superoperator acts on a
// density matrix: stack(rho) concatenates the columns of rho, so that
// stack(A * rho * B) == (B.transpose() ⊗ A) * stack(rho).
Vector stack(const Matrix& rho);
Matrix unstack(const Vector& v, Eigen::Index dim);

/// Superoperator for rho -> a * rho * b†, i.e. conj(b) ⊗ a under column stacking.
Matrix sandwich_superop(const Matrix& a, const Matrix& b);

Matrix hermitize(const Matrix& m);

/// Throws std::runtime_error if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* context);

/// A d×d Hermitian, unit-trace, positive-semidefinite matrix.
/// Construction validates all three properties (up to the tolerances above).
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m);

  Eigen::Index dim() const { return mat_.rows(); }
  const Matrix& matrix() const { return mat_; }

  static DensityMatrix maximally_mixed(Eigen::Index dim);
  static DensityMatrix pure(const Vector& psi);

 private:
  Matrix mat_;
};

/// A completely positive trace-preserving map stored as its d²×d² matrix
/// acting on column-stacked density matrices.
class Channel {
 public:
  Channel(Eigen::Index dim, Matrix liouville);

  Eigen::Index dim() const { return dim_; }
  const Matrix& liouville() const { return liou_; }

  static Channel identity(Eigen::Index dim);

 private:
  Eigen::Index dim_;
  Matrix liou_;
};

enum class KrausMode {
  Normalized,     // requires sum_k K†K = I
  Subnormalized,  // completeness check skipped (conditional maps)
};

Channel channel_from_kraus(const std::vector<Matrix>& kraus,
                           KrausMode mode = KrausMode::Normalized);

DensityMatrix apply_channel(const Channel& c, const DensityMatrix& rho);

/// Composition outer ∘ inner (inner acts first).
Channel compose(const Channel& outer, const Channel& inner);

/// Choi matrix C = sum_{ij} |i><j| ⊗ Phi(|i><j|); PSD iff the map is CP.
Matrix choi_matrix(const Channel& c);

double choi_min_eigenvalue(const Channel& c);
bool is_trace_preserving(const Channel& c, double tol = kTracePreservingTol);
bool is_cptp(const Channel& c, double tp_tol = kTracePreservingTol,
             double cp_slack = kChoiPsdSlack);

/// Unique fixed point of a CPTP map, from a dense eigendecomposition of the
/// Liouville matrix. Throws if the eigenvalue-1 eigenspace is degenerate
/// (two eigenvalues within kFixedPointDegeneracyTol of 1) or if the residual
/// ||Phi(rho) - rho||_F exceeds kFixedPointResidualTol.
DensityMatrix fixed_point(const Channel& c);

/// Cross-check solver: plain power iteration seeded with I/d.
DensityMatrix fixed_point_power_iteration(const Channel& c,
                                          int max_iterations = 200000,
                                          double tol = 1e-13);

}  // namespace qotto
