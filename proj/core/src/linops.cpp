// linops.cpp — channel representation, Choi reshuffling, fixed-point solvers

#include "qotto/linops.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qotto {

namespace {

bool finite_entry(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

Vector stack(const Matrix& rho) {
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unstack(const Vector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw std::invalid_argument("unstack: vector length does not match dim^2");
  }
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Matrix sandwich_superop(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("sandwich_superop: operators must be square and equal-dim");
  }
  return Eigen::kroneckerProduct(b.conjugate(), a);
}

Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

void require_finite(const Matrix& m, const char* context) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!finite_entry(m(i, j))) {
        throw std::runtime_error(std::string(context) + ": non-finite matrix entry");
      }
    }
  }
}

DensityMatrix::DensityMatrix(Matrix m) : mat_(std::move(m)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() < 2) {
    throw std::invalid_argument("DensityMatrix: need a square matrix with dim >= 2");
  }
  require_finite(mat_, "DensityMatrix");
  if ((mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
  }
  if (std::abs(mat_.trace() - Complex(1.0, 0.0)) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(mat_), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdSlack) {
    throw std::invalid_argument("DensityMatrix: negative eigenvalue beyond slack");
  }
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  Vector n = psi / psi.norm();
  return DensityMatrix(n * n.adjoint());
}

Channel::Channel(Eigen::Index dim, Matrix liouville) : dim_(dim), liou_(std::move(liouville)) {
  if (dim_ < 2) throw std::invalid_argument("Channel: dim must be >= 2");
  if (liou_.rows() != dim_ * dim_ || liou_.cols() != dim_ * dim_) {
    throw std::invalid_argument("Channel: Liouville matrix must be dim^2 x dim^2");
  }
  require_finite(liou_, "Channel");
}

Channel Channel::identity(Eigen::Index dim) {
  return Channel(dim, Matrix::Identity(dim * dim, dim * dim));
}

Channel channel_from_kraus(const std::vector<Matrix>& kraus, KrausMode mode) {
  if (kraus.empty()) throw std::invalid_argument("channel_from_kraus: empty operator list");
  const Eigen::Index d = kraus.front().rows();
  for (const Matrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw std::invalid_argument("channel_from_kraus: operators must be square with equal dim");
    }
  }
  if (mode == KrausMode::Normalized) {
    Matrix sum = Matrix::Zero(d, d);
    for (const Matrix& k : kraus) sum += k.adjoint() * k;
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > kTracePreservingTol) {
      throw std::invalid_argument("channel_from_kraus: completeness sum K†K != I");
    }
  }
  Matrix liou = Matrix::Zero(d * d, d * d);
  for (const Matrix& k : kraus) liou += sandwich_superop(k, k);
  return Channel(d, std::move(liou));
}

DensityMatrix apply_channel(const Channel& c, const DensityMatrix& rho) {
  if (c.dim() != rho.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
  Matrix out = unstack(c.liouville() * stack(rho.matrix()), c.dim());
  return DensityMatrix(hermitize(out));
}

Channel compose(const Channel& outer, const Channel& inner) {
  if (outer.dim() != inner.dim()) throw std::invalid_argument("compose: dimension mismatch");
  return Channel(outer.dim(), outer.liouville() * inner.liouville());
}

Matrix choi_matrix(const Channel& c) {
  const Eigen::Index d = c.dim();
  const Matrix& l = c.liouville();
  Matrix choi(d * d, d * d);
  // C[(i,a),(j,b)] = <a| Phi(|i><j|) |b> = L[(a,b),(i,j)] under column stacking.
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index b = 0; b < d; ++b)
          choi(i * d + a, j * d + b) = l(a + d * b, i + d * j);
  return choi;
}

double choi_min_eigenvalue(const Channel& c) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(choi_matrix(c)), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool is_trace_preserving(const Channel& c, double tol) {
  const Eigen::Index d = c.dim();
  // Tr[Phi(rho)] = vec(I)† L vec(rho) for all rho, so require vec(I)† L = vec(I)†.
  Vector id = stack(Matrix::Identity(d, d));
  Vector row = c.liouville().adjoint() * id;
  return (row - id).cwiseAbs().maxCoeff() <= tol;
}

bool is_cptp(const Channel& c, double tp_tol, double cp_slack) {
  return is_trace_preserving(c, tp_tol) && choi_min_eigenvalue(c) >= -cp_slack;
}

namespace {

DensityMatrix state_from_fixed_vector(const Channel& c, const Vector& v) {
  Matrix rho = hermitize(unstack(v, c.dim()));
  const double tr = rho.trace().real();
  if (std::abs(tr) < 1e-14) {
    throw std::runtime_error("fixed_point: fixed vector has vanishing trace");
  }
  rho /= tr;
  DensityMatrix out{rho};
  const double residual = (unstack(c.liouville() * stack(rho), c.dim()) - rho).norm();
  if (residual > kFixedPointResidualTol) {
    throw std::runtime_error("fixed_point: residual " + std::to_string(residual) +
                             " exceeds tolerance");
  }
  return out;
}

}  // namespace

DensityMatrix fixed_point(const Channel& c) {
  Eigen::ComplexEigenSolver<Matrix> es(c.liouville());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("fixed_point: eigendecomposition failed");
  }
  Eigen::Index best = 0, second = -1;
  double best_dist = std::numeric_limits<double>::max();
  double second_dist = std::numeric_limits<double>::max();
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double dist = std::abs(es.eigenvalues()(i) - Complex(1.0, 0.0));
    if (dist < best_dist) {
      second = best;
      second_dist = best_dist;
      best = i;
      best_dist = dist;
    } else if (dist < second_dist) {
      second = i;
      second_dist = dist;
    }
  }
  if (best_dist > 1e-8) {
    throw std::runtime_error("fixed_point: no eigenvalue close to 1 (map not trace-preserving?)");
  }
  if (second >= 0 && second_dist < kFixedPointDegeneracyTol) {
    throw std::runtime_error("fixed_point: non-unique steady state (degenerate fixed space)");
  }
  return state_from_fixed_vector(c, es.eigenvectors().col(best));
}

DensityMatrix fixed_point_power_iteration(const Channel& c, int max_iterations, double tol) {
  const Eigen::Index d = c.dim();
  Vector x = stack(Matrix::Identity(d, d) / static_cast<double>(d));
  const Vector id = stack(Matrix::Identity(d, d));
  for (int it = 0; it < max_iterations; ++it) {
    Vector next = c.liouville() * x;
    next /= id.dot(next);  // keep unit trace
    const double delta = (next - x).norm();
    x = next;
    if (delta <= tol) return state_from_fixed_vector(c, x);
  }
  throw std::runtime_error("fixed_point_power_iteration: no convergence within iteration cap");
}

}  // namespace qotto
