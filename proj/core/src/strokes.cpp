// strokes.cpp — work strokes and thermalization maps for the Otto cycle

#include "qotto/strokes.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qotto {

namespace {

constexpr Complex kImag{0.0, 1.0};

void require_two_level(const StrokeHamiltonian& h, const char* context) {
  if (h.dim() != 2) {
    throw std::invalid_argument(std::string(context) + ": two-level systems only");
  }
}

/// Exact exponential exp(-i H dt) of a 2x2 Hermitian H via Pauli decomposition.
Matrix tls_step_exponential(const Matrix& h, double dt) {
  const double a = 0.5 * (h(0, 1) + h(1, 0)).real();   // sigma_x
  const double b = 0.5 * (h(1, 0) - h(0, 1)).imag();   // sigma_y
  const double c = 0.5 * (h(0, 0) - h(1, 1)).real();   // sigma_z
  const double s = 0.5 * (h(0, 0) + h(1, 1)).real();   // identity part
  const double n = std::sqrt(a * a + b * b + c * c);
  Matrix u(2, 2);
  if (n * dt < 1e-300) {
    u = Matrix::Identity(2, 2);
  } else {
    const double theta = n * dt;
    const Complex f = -kImag * std::sin(theta) / n;
    u(0, 0) = std::cos(theta) + f * c;
    u(1, 1) = std::cos(theta) - f * c;
    u(0, 1) = f * Complex(a, -b);
    u(1, 0) = f * Complex(a, b);
  }
  return std::exp(-kImag * s * dt) * u;
}

}  // namespace

Matrix StrokeHamiltonian::op() const {
  return basis * energies.cast<Complex>().asDiagonal() * basis.adjoint();
}

Matrix StrokeHamiltonian::projector(Eigen::Index m) const {
  if (m < 0 || m >= dim()) throw std::out_of_range("StrokeHamiltonian::projector: bad index");
  return basis.col(m) * basis.col(m).adjoint();
}

double StrokeHamiltonian::gap() const { return energies(dim() - 1) - energies(0); }

StrokeHamiltonian StrokeHamiltonian::two_level(double omega) {
  if (omega <= 0.0) throw std::invalid_argument("two_level: omega must be positive");
  Eigen::VectorXd e(2);
  e << -0.5 * omega, 0.5 * omega;
  return from_eigensystem(e, Matrix::Identity(2, 2));
}

StrokeHamiltonian StrokeHamiltonian::from_matrix(const Matrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("from_matrix: matrix must be square");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("from_matrix: matrix must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(h));
  Matrix v = es.eigenvectors();
  // Fix the per-column phase so repeated decompositions are reproducible.
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index pivot = 0;
    double best = 0.0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) > best + 1e-12) {
        best = std::abs(v(r, c));
        pivot = r;
      }
    }
    const Complex z = v(pivot, c);
    v.col(c) *= std::conj(z) / std::abs(z);
  }
  return from_eigensystem(es.eigenvalues(), std::move(v));
}

StrokeHamiltonian StrokeHamiltonian::from_eigensystem(Eigen::VectorXd energies, Matrix basis) {
  if (basis.rows() != basis.cols() || basis.rows() != energies.size()) {
    throw std::invalid_argument("from_eigensystem: inconsistent shapes");
  }
  const Matrix gram = basis.adjoint() * basis;
  if ((gram - Matrix::Identity(basis.rows(), basis.cols())).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("from_eigensystem: eigenvectors not orthonormal");
  }
  for (Eigen::Index i = 1; i < energies.size(); ++i) {
    if (energies(i) < energies(i - 1)) {
      throw std::invalid_argument("from_eigensystem: energies must be ascending");
    }
  }
  return StrokeHamiltonian{std::move(energies), std::move(basis)};
}

Matrix parametric_unitary(const ParametricStroke& spec, const StrokeHamiltonian& from,
                          const StrokeHamiltonian& to, StrokeDirection direction) {
  require_two_level(from, "parametric_unitary");
  require_two_level(to, "parametric_unitary");
  if (spec.r < 0.0 || spec.r > 1.0) {
    throw std::invalid_argument("parametric_unitary: r must lie in [0, 1]");
  }
  const double sq = std::sqrt(1.0 - spec.r);
  const double sr = std::sqrt(spec.r);
  const Complex ep = std::exp(kImag * spec.phi);
  const Complex em = std::exp(-kImag * spec.phi);
  const Vector f1 = from.eigenvector(0), f2 = from.eigenvector(1);
  const Vector t1 = to.eigenvector(0), t2 = to.eigenvector(1);
  Matrix u;
  if (direction == StrokeDirection::Compression) {
    u = sq * (t2 * f2.adjoint() + t1 * f1.adjoint()) -
        sr * (em * t2 * f1.adjoint() - ep * t1 * f2.adjoint());
  } else {
    u = sq * (t2 * f2.adjoint() + t1 * f1.adjoint()) +
        sr * (ep * t2 * f1.adjoint() - em * t1 * f2.adjoint());
  }
  return u;
}

namespace {

Matrix protocol_hamiltonian(const ProtocolStroke& spec, StrokeDirection direction, double t) {
  const double half_pi = 0.5 * std::numbers::pi;
  double lambda, angle;
  if (direction == StrokeDirection::Compression) {
    lambda = spec.omega1 * (1.0 - t / spec.tau_u) + spec.omega2 * (t / spec.tau_u);
    angle = half_pi * t / spec.tau_u;  // sin -> sigma_z, cos -> sigma_x
  } else {
    const double s = spec.tau_u - t;
    lambda = spec.omega1 * (1.0 - s / spec.tau_u) + spec.omega2 * (s / spec.tau_u);
    angle = half_pi * (1.0 - t / spec.tau_u);
  }
  Matrix h(2, 2);
  const double z = 0.5 * lambda * std::sin(angle);
  const double x = 0.5 * lambda * std::cos(angle);
  h << z, x, x, -z;
  return h;
}

}  // namespace

Matrix protocol_unitary(const ProtocolStroke& spec, StrokeDirection direction) {
  if (spec.tau_u <= 0.0) throw std::invalid_argument("protocol_unitary: tau_u must be positive");
  if (spec.steps < 1) throw std::invalid_argument("protocol_unitary: steps must be >= 1");
  const double dt = spec.tau_u / spec.steps;
  Matrix u = Matrix::Identity(2, 2);
  for (int k = 0; k < spec.steps; ++k) {
    const double mid = (k + 0.5) * dt;
    u = tls_step_exponential(protocol_hamiltonian(spec, direction, mid), dt) * u;
  }
  if ((u.adjoint() * u - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::runtime_error("protocol_unitary: integrator produced a non-unitary result");
  }
  return u;
}

StrokeHamiltonian protocol_initial_hamiltonian(const ProtocolStroke& spec) {
  Matrix h(2, 2);
  h << 0.0, 0.5 * spec.omega1, 0.5 * spec.omega1, 0.0;
  return StrokeHamiltonian::from_matrix(h);
}

StrokeHamiltonian protocol_final_hamiltonian(const ProtocolStroke& spec) {
  Matrix h(2, 2);
  h << 0.5 * spec.omega2, 0.0, 0.0, -0.5 * spec.omega2;
  return StrokeHamiltonian::from_matrix(h);
}

TransitionParams effective_transition_params(const Matrix& u, const StrokeHamiltonian& from,
                                             const StrokeHamiltonian& to, double form_tol) {
  require_two_level(from, "effective_transition_params");
  require_two_level(to, "effective_transition_params");
  if ((u.adjoint() * u - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("effective_transition_params: input is not unitary");
  }
  TransitionParams out;
  const Complex b = to.eigenvector(1).dot(u * from.eigenvector(0));  // <e2(to)|U|e1(from)>
  const Complex a = to.eigenvector(1).dot(u * from.eigenvector(1));  // <e2(to)|U|e2(from)>
  const Complex clow = to.eigenvector(0).dot(u * from.eigenvector(1));
  out.r = std::min(1.0, std::abs(b) * std::abs(b));
  constexpr double kDegenerate = 1e-12;
  if (out.r < kDegenerate) {
    out.phi = 0.0;
    out.phase_defined = false;
  } else if (out.r > 1.0 - kDegenerate) {
    // Diagonal amplitude vanishes; split the two off-diagonal phases evenly.
    out.phi = 0.5 * (std::arg(clow) - std::arg(-b));
  } else {
    // b = -e^{i alpha} sqrt(r) e^{-i phi} with alpha the global phase of U.
    out.phi = std::arg(a) - std::arg(-b);
  }
  out.phi = std::remainder(out.phi, 2.0 * std::numbers::pi);
  Matrix rebuilt =
      parametric_unitary(ParametricStroke{out.r, out.phi}, from, to, StrokeDirection::Compression);
  const Complex overlap = (rebuilt.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) < 1e-14 ? Complex(1.0, 0.0) : overlap / std::abs(overlap);
  out.residual = (u - phase * rebuilt).norm();
  out.parametric_form = out.residual <= form_tol;
  return out;
}

DensityMatrix gibbs_state(const StrokeHamiltonian& h, double beta) {
  if (beta < 0.0) throw std::invalid_argument("gibbs_state: beta must be non-negative");
  const Eigen::Index d = h.dim();
  Eigen::VectorXd weights(d);
  const double shift = h.energies.minCoeff();
  for (Eigen::Index m = 0; m < d; ++m) weights(m) = std::exp(-beta * (h.energies(m) - shift));
  weights /= weights.sum();
  Matrix rho = Matrix::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m) rho += weights(m) * h.projector(m);
  return DensityMatrix(hermitize(rho));
}

double thermal_occupation(double beta, double gap, OccupationConvention convention) {
  if (beta <= 0.0 || gap <= 0.0) {
    throw std::invalid_argument("thermal_occupation: beta and gap must be positive");
  }
  const double x = std::exp(beta * gap);
  return convention == OccupationConvention::BoseEinstein ? 1.0 / (x - 1.0) : 1.0 / (x + 1.0);
}

double effective_rate(const StrokeHamiltonian& h, const BathSpec& bath) {
  return bath.gamma * (2.0 * thermal_occupation(bath.beta, h.gap(), bath.convention) + 1.0);
}

Matrix thermal_liouvillian(const StrokeHamiltonian& h, const BathSpec& bath) {
  require_two_level(h, "thermal_liouvillian");
  if (bath.beta <= 0.0) throw std::invalid_argument("thermal_liouvillian: beta must be positive");
  if (bath.gamma < 0.0) throw std::invalid_argument("thermal_liouvillian: gamma must be >= 0");
  const Eigen::Index d = h.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix hop = h.op();
  Matrix liou = -kImag * (sandwich_superop(hop, id) - sandwich_superop(id, hop));
  const double n = thermal_occupation(bath.beta, h.gap(), bath.convention);
  const Matrix lower = h.eigenvector(0) * h.eigenvector(1).adjoint();
  const Matrix raise = lower.adjoint();
  auto dissipator = [&](const Matrix& jump) -> Matrix {
    const Matrix jj = jump.adjoint() * jump;
    return sandwich_superop(jump, jump) -
           0.5 * (sandwich_superop(jj, id) + sandwich_superop(id, jj));
  };
  liou += bath.gamma * (n + 1.0) * dissipator(lower);
  liou += bath.gamma * n * dissipator(raise);
  return liou;
}

Channel thermal_channel(const StrokeHamiltonian& h, const BathSpec& bath) {
  if (bath.tau_b < 0.0) throw std::invalid_argument("thermal_channel: tau_b must be >= 0");
  if (bath.tau_b == 0.0) return Channel::identity(h.dim());
  const Matrix liou = thermal_liouvillian(h, bath) * bath.tau_b;
  return Channel(h.dim(), liou.exp());
}

Channel reset_channel(const StrokeHamiltonian& h, double beta) {
  const DensityMatrix gibbs = gibbs_state(h, beta);
  const Eigen::Index d = h.dim();
  const Matrix liou = stack(gibbs.matrix()) * stack(Matrix::Identity(d, d)).transpose();
  return Channel(d, liou);
}

Channel unitary_channel(const Matrix& u) {
  if ((u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("unitary_channel: input is not unitary");
  }
  return Channel(u.rows(), sandwich_superop(u, u));
}

}  // namespace qotto
