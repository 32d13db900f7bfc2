// stats.cpp — mixture construction and closed-form statistics

#include "qotto/stats.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qotto {

namespace {

constexpr Complex kImag{0.0, 1.0};

double width_sq(PointerWidth w) {
  if (w.is_infinite()) return std::numeric_limits<double>::infinity();
  return w.sigma * w.sigma;
}

Eigen::Matrix2d scheme_covariance(const SchemeConfig& config) {
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  switch (config.scheme) {
    case Scheme::TPM:
      break;
    case Scheme::S1: {
      const double s1 = width_sq(config.widths[0]), s2 = width_sq(config.widths[1]);
      const double s3 = width_sq(config.widths[2]), s4 = width_sq(config.widths[3]);
      cov << s1 + s2 + s3 + s4, -(s2 + s3), -(s2 + s3), s2 + s3;
      break;
    }
    case Scheme::S2:
      cov << width_sq(config.widths[0]) + width_sq(config.widths[2]), 0.0, 0.0,
          width_sq(config.widths[1]);
      break;
    case Scheme::S3:
      cov << width_sq(config.widths[0]), 0.0, 0.0, width_sq(config.widths[1]);
      break;
    case Scheme::UM:
      throw std::invalid_argument("scheme_covariance: unmonitored cycle has no distribution");
  }
  return cov;
}

Complex block_trace(const CycleOperators& ops, const DensityMatrix& rho, const IndexPair& pair) {
  const Matrix first = ops.h2.projector(pair.m[1]) * ops.u1 * ops.h1.projector(pair.m[0]);
  const Matrix first_p = ops.h2.projector(pair.mp[1]) * ops.u1 * ops.h1.projector(pair.mp[0]);
  const Matrix second = ops.h1.projector(pair.m[3]) * ops.u2 * ops.h2.projector(pair.m[2]);
  const Matrix second_p = ops.h1.projector(pair.mp[3]) * ops.u2 * ops.h2.projector(pair.mp[2]);
  const Eigen::Index d = ops.dim();
  Matrix x = first * rho.matrix() * first_p.adjoint();
  x = unstack(ops.hot.liouville() * stack(x), d);
  x = second * x * second_p.adjoint();
  x = unstack(ops.cold.liouville() * stack(x), d);
  return x.trace();
}

}  // namespace

bool GaussianComponent2D::has_infinite_cov() const {
  return std::isinf(cov(0, 0)) || std::isinf(cov(0, 1)) || std::isinf(cov(1, 0)) ||
         std::isinf(cov(1, 1));
}

double GaussianMixture2D::weight_sum() const {
  double s = 0.0;
  for (const auto& c : components) s += c.weight;
  return s;
}

double GaussianMixture2D::pdf(double w, double q) const {
  double s = 0.0;
  for (const auto& c : components) {
    if (c.is_point_mass() || c.has_infinite_cov()) continue;
    const double det = c.cov.determinant();
    if (det <= 0.0) continue;  // singular but nonzero covariance: line mass
    const Eigen::Vector2d dx(w - c.mean(0), q - c.mean(1));
    const double quad = dx.dot(c.cov.inverse() * dx);
    s += c.weight * std::exp(-0.5 * quad) / (2.0 * std::numbers::pi * std::sqrt(det));
  }
  return s;
}

GaussianMixture2D joint_distribution(const CycleOperators& ops, const SchemeConfig& config,
                                     const DensityMatrix& steady) {
  if (config.scheme == Scheme::UM) {
    throw std::invalid_argument(
        "joint_distribution: no measurement record exists for the unmonitored cycle");
  }
  const Eigen::Index d = ops.dim();
  const Eigen::Matrix2d cov = scheme_covariance(config);
  GaussianMixture2D mix;
  const int n = static_cast<int>(d);
  double max_imag = 0.0;

  IndexPair pair;
  auto visit = [&](const IndexPair& p) {
    if (config.scheme == Scheme::TPM && !p.diagonal()) return;
    // Canonical branch ordering: handle each conjugate pair {(m,m'), (m',m)} once.
    if (p.mp < p.m) return;
    const double lambda = scheme_weight(config, ops.h1, ops.h2, p);
    if (lambda == 0.0) return;
    Complex trace = block_trace(ops, steady, p);
    if (!p.diagonal()) {
      IndexPair swapped{p.mp, p.m};
      trace += block_trace(ops, steady, swapped);
    }
    const double weight = lambda * trace.real();
    max_imag = std::max(max_imag, std::abs(lambda * trace.imag()));
    if (weight == 0.0) return;
    const TrajectoryValues a = trajectory_values(ops.h1, ops.h2, p.m);
    const TrajectoryValues b = trajectory_values(ops.h1, ops.h2, p.mp);
    GaussianComponent2D component;
    component.weight = weight;
    component.mean << 0.5 * (a.w() + b.w()), 0.5 * (a.qh + b.qh);
    component.cov = cov;
    mix.components.push_back(component);
  };
  for (pair.m[0] = 0; pair.m[0] < n; ++pair.m[0])
    for (pair.m[1] = 0; pair.m[1] < n; ++pair.m[1])
      for (pair.m[2] = 0; pair.m[2] < n; ++pair.m[2])
        for (pair.m[3] = 0; pair.m[3] < n; ++pair.m[3])
          for (pair.mp[0] = 0; pair.mp[0] < n; ++pair.mp[0])
            for (pair.mp[1] = 0; pair.mp[1] < n; ++pair.mp[1])
              for (pair.mp[2] = 0; pair.mp[2] < n; ++pair.mp[2])
                for (pair.mp[3] = 0; pair.mp[3] < n; ++pair.mp[3]) visit(pair);

  if (max_imag > 1e-12) {
    throw std::runtime_error("joint_distribution: conjugate merging left an imaginary residue");
  }
  if (std::abs(mix.weight_sum() - 1.0) > 1e-8) {
    throw std::runtime_error("joint_distribution: component weights do not sum to 1");
  }
  return mix;
}

GaussianMixture2D joint_distribution(const CycleSpec& spec, const SchemeConfig& config,
                                     const DensityMatrix& steady) {
  return joint_distribution(CycleOperators::build(spec), config, steady);
}

Complex characteristic_function(const GaussianMixture2D& dist, double k1, double k2) {
  Complex chi{0.0, 0.0};
  const bool at_origin = (k1 == 0.0 && k2 == 0.0);
  for (const auto& c : dist.components) {
    if (c.has_infinite_cov()) {
      if (at_origin) chi += c.weight;
      continue;
    }
    const double quad =
        k1 * k1 * c.cov(0, 0) + 2.0 * k1 * k2 * c.cov(0, 1) + k2 * k2 * c.cov(1, 1);
    chi += c.weight * std::exp(kImag * (k1 * c.mean(0) + k2 * c.mean(1)) - 0.5 * quad);
  }
  return chi;
}

namespace {

/// Product that treats an exactly-zero factor as annihilating, so that a
/// zero-variance direction kills infinite-variance factors (0 * inf -> 0).
double annihilating_product(double x, double y) {
  if (x == 0.0 || y == 0.0) return 0.0;
  return x * y;
}

/// Central moments E[X^a Y^b] of a bivariate normal with covariance cov,
/// for a + b <= 4 (Isserlis' theorem).
double central_moment(const Eigen::Matrix2d& cov, int a, int b) {
  const double sww = cov(0, 0), sqq = cov(1, 1), swq = cov(0, 1);
  switch (a * 10 + b) {
    case 0: return 1.0;
    case 10: case 1: return 0.0;
    case 20: return sww;
    case 2: return sqq;
    case 11: return swq;
    case 30: case 3: case 21: case 12: return 0.0;
    case 40: return 3.0 * annihilating_product(sww, sww);
    case 4: return 3.0 * annihilating_product(sqq, sqq);
    case 31: return 3.0 * annihilating_product(sww, swq);
    case 13: return 3.0 * annihilating_product(sqq, swq);
    case 22: return annihilating_product(sww, sqq) + 2.0 * annihilating_product(swq, swq);
    default: throw std::invalid_argument("moment: order n + m must be <= 4");
  }
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

}  // namespace

double moment(const GaussianMixture2D& dist, int n, int m) {
  if (n < 0 || m < 0 || n + m > 4) {
    throw std::invalid_argument("moment: order n + m must be in [0, 4]");
  }
  // Infinite-width components are tallied symbolically: the moment diverges
  // with the sign of the net weight attached to the divergent terms, so
  // components of mixed sign cannot cancel to NaN.
  double finite = 0.0;
  double divergent = 0.0;
  for (const auto& c : dist.components) {
    if (c.weight == 0.0) continue;
    for (int a = 0; a <= n; ++a) {
      for (int b = 0; b <= m; ++b) {
        const double coef = binomial(n, a) * binomial(m, b) *
                            std::pow(c.mean(0), n - a) * std::pow(c.mean(1), m - b);
        if (coef == 0.0) continue;  // avoid 0 * inf for infinite-width components
        const double central = central_moment(c.cov, a, b);
        if (std::isinf(central)) {
          divergent += c.weight * coef * (central > 0.0 ? 1.0 : -1.0);
        } else {
          finite += c.weight * coef * central;
        }
      }
    }
  }
  if (divergent > 0.0) return std::numeric_limits<double>::infinity();
  if (divergent < 0.0) return -std::numeric_limits<double>::infinity();
  return finite;
}

Cumulants cumulants(const GaussianMixture2D& dist) {
  Cumulants c;
  c.w_mean = moment(dist, 1, 0);
  c.q_mean = moment(dist, 0, 1);
  c.w_var = moment(dist, 2, 0) - c.w_mean * c.w_mean;
  return c;
}

GaussianMixture1D marginal_work(const GaussianMixture2D& dist) {
  GaussianMixture1D out;
  for (const auto& c : dist.components) {
    out.components.push_back({c.weight, c.mean(0), std::sqrt(c.cov(0, 0))});
  }
  return out;
}

double kl_divergence(const DensityMatrix& rho, const DensityMatrix& ref) {
  if (rho.dim() != ref.dim()) throw std::invalid_argument("kl_divergence: dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Matrix> es_ref(hermitize(ref.matrix()));
  if (es_ref.eigenvalues().minCoeff() <= 1e-300) {
    throw std::invalid_argument("kl_divergence: reference state is singular");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es_rho(hermitize(rho.matrix()));
  const Eigen::Index d = rho.dim();
  double value = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = es_rho.eigenvalues()(i);
    if (p > 0.0) value += p * std::log(p);  // p ln p, with 0 ln 0 = 0
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    const double p = es_rho.eigenvalues()(i);
    if (p <= 0.0) continue;
    for (Eigen::Index j = 0; j < d; ++j) {
      const double overlap = std::norm(es_ref.eigenvectors().col(j).dot(es_rho.eigenvectors().col(i)));
      value -= p * overlap * std::log(es_ref.eigenvalues()(j));
    }
  }
  if (value < 0.0 && value >= -1e-12) value = 0.0;
  return value;
}

double l1_coherence(const DensityMatrix& rho, const StrokeHamiltonian& h) {
  if (rho.dim() != h.dim()) throw std::invalid_argument("l1_coherence: dimension mismatch");
  const Matrix in_basis = h.basis.adjoint() * rho.matrix() * h.basis;
  double s = 0.0;
  for (Eigen::Index i = 0; i < in_basis.rows(); ++i) {
    for (Eigen::Index j = 0; j < in_basis.cols(); ++j) {
      if (i != j) s += std::abs(in_basis(i, j));
    }
  }
  return s;
}

StrokeAverages unmonitored_averages(const CycleOperators& ops, const DensityMatrix& steady) {
  const Eigen::Index d = ops.dim();
  const Matrix h1 = ops.h1.op(), h2 = ops.h2.op();
  const Matrix rho1 = steady.matrix();
  const Matrix rho2 = ops.u1 * rho1 * ops.u1.adjoint();
  const Matrix rho3 = unstack(ops.hot.liouville() * stack(rho2), d);
  const Matrix rho4 = ops.u2 * rho3 * ops.u2.adjoint();
  const double e1 = (rho1 * h1).trace().real();
  const double e2 = (rho2 * h2).trace().real();
  const double e3 = (rho3 * h2).trace().real();
  const double e4 = (rho4 * h1).trace().real();
  return {.w_mean = (e2 - e1) + (e4 - e3), .q_mean = e3 - e2};
}

}  // namespace qotto
