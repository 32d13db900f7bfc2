// pointer.cpp — Gaussian pointer measurement model

#include "qotto/pointer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qotto {

namespace {

double gaussian_pdf(double x, double mean, double sigma) {
  const double z = (x - mean) / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double gaussian_cdf(double x, double mean, double sigma) {
  return 0.5 * std::erfc(-(x - mean) / (sigma * std::numbers::sqrt2));
}

}  // namespace

double suppression_factor(double gap, PointerWidth sigma) {
  if (gap == 0.0 || sigma.is_infinite()) return 1.0;
  if (sigma.is_zero()) return 0.0;
  if (sigma.sigma < 0.0) throw std::invalid_argument("suppression_factor: negative width");
  const double g = gap / sigma.sigma;
  return std::exp(-g * g / 8.0);
}

double GaussianMixture1D::weight_sum() const {
  double s = 0.0;
  for (const auto& c : components) s += c.weight;
  return s;
}

double GaussianMixture1D::mean() const {
  double s = 0.0;
  for (const auto& c : components) s += c.weight * c.mean;
  return s;
}

double GaussianMixture1D::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (const auto& c : components) {
    s += c.weight * (c.sigma * c.sigma + (c.mean - mu) * (c.mean - mu));
  }
  return s;
}

double GaussianMixture1D::pdf(double x) const {
  double s = 0.0;
  for (const auto& c : components) {
    if (c.sigma > 0.0 && !std::isinf(c.sigma)) s += c.weight * gaussian_pdf(x, c.mean, c.sigma);
  }
  return s;
}

double GaussianMixture1D::cdf(double x) const {
  double s = 0.0;
  for (const auto& c : components) {
    if (c.sigma == 0.0) {
      if (c.mean <= x) s += c.weight;
    } else if (!std::isinf(c.sigma)) {
      s += c.weight * gaussian_cdf(x, c.mean, c.sigma);
    }
  }
  return s;
}

Matrix conditional_state(const DensityMatrix& rho, const StrokeHamiltonian& h,
                         PointerWidth sigma, double x) {
  if (rho.dim() != h.dim()) throw std::invalid_argument("conditional_state: dimension mismatch");
  const Eigen::Index d = h.dim();
  if (sigma.is_infinite()) {
    throw std::invalid_argument("conditional_state: undefined at infinite pointer width");
  }
  if (sigma.is_zero()) {
    // Projective limit: snap x to the nearest eigenvalue and pin the state.
    Eigen::Index nearest = 0;
    for (Eigen::Index m = 1; m < d; ++m) {
      if (std::abs(x - h.energies(m)) < std::abs(x - h.energies(nearest))) nearest = m;
    }
    const Matrix p = h.projector(nearest);
    return p * rho.matrix() * p;
  }
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index mp = 0; mp < d; ++mp) {
      const double gap = h.energies(m) - h.energies(mp);
      const double center = 0.5 * (h.energies(m) + h.energies(mp));
      const double factor = suppression_factor(gap, sigma) * gaussian_pdf(x, center, sigma.sigma);
      out += factor * (h.projector(m) * rho.matrix() * h.projector(mp));
    }
  }
  return out;
}

GaussianMixture1D outcome_density(const DensityMatrix& rho, const StrokeHamiltonian& h,
                                  PointerWidth sigma) {
  if (rho.dim() != h.dim()) throw std::invalid_argument("outcome_density: dimension mismatch");
  if (sigma.is_infinite()) {
    throw std::invalid_argument("outcome_density: undefined at infinite pointer width");
  }
  GaussianMixture1D mix;
  for (Eigen::Index m = 0; m < h.dim(); ++m) {
    const double pop = (h.eigenvector(m).adjoint() * rho.matrix() * h.eigenvector(m))(0).real();
    mix.components.push_back({pop, h.energies(m), sigma.sigma});
  }
  return mix;
}

DensityMatrix post_measurement_state(const DensityMatrix& rho, const StrokeHamiltonian& h,
                                     PointerWidth sigma) {
  if (rho.dim() != h.dim()) {
    throw std::invalid_argument("post_measurement_state: dimension mismatch");
  }
  if (sigma.is_infinite()) return rho;
  const Eigen::Index d = h.dim();
  Matrix out = Matrix::Zero(d, d);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index mp = 0; mp < d; ++mp) {
      const double gap = h.energies(m) - h.energies(mp);
      out += suppression_factor(gap, sigma) * (h.projector(m) * rho.matrix() * h.projector(mp));
    }
  }
  return DensityMatrix(hermitize(out));
}

}  // namespace qotto
