#pragma once

#include <cmath>
#include <numbers>

#include "genprior/field.hpp"
#include "genprior/measurement.hpp"
#include "genprior/rng.hpp"

namespace testing {

using genprior::cd;
using genprior::CVector;

inline CVector random_cvector(std::size_t n, genprior::Rng& rng) {
  CVector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) {
    const double re = rng.normal();
    x = cd(re, rng.normal());
  }
  return v;
}

inline CVector random_cvector(std::size_t n, std::uint64_t seed) {
  genprior::Rng rng(seed);
  return random_cvector(n, rng);
}

inline Eigen::MatrixXcd dft_matrix(std::size_t n) {
  Eigen::MatrixXcd F(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * j) / static_cast<double>(n);
      F(k, j) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), angle);
    }
  }
  return F;
}

// Row-major h x w 2D DFT as a Kronecker product.
inline Eigen::MatrixXcd dft_matrix_2d(std::size_t h, std::size_t w) {
  const Eigen::MatrixXcd Fh = dft_matrix(h);
  const Eigen::MatrixXcd Fw = dft_matrix(w);
  Eigen::MatrixXcd F(h * w, h * w);
  for (std::size_t a = 0; a < h; ++a)
    for (std::size_t b = 0; b < h; ++b) F.block(a * w, b * w, w, w) = Fh(a, b) * Fw;
  return F;
}

inline Eigen::MatrixXcd dense_masked(const genprior::ProbeSet& probes, const Eigen::MatrixXcd& F) {
  const auto n = static_cast<Eigen::Index>(F.rows());
  Eigen::MatrixXcd A(n * static_cast<Eigen::Index>(probes.count()), n);
  for (std::size_t i = 0; i < probes.count(); ++i) {
    Eigen::VectorXcd mask(n);
    for (Eigen::Index j = 0; j < n; ++j) mask[j] = probes.probe(i)[static_cast<std::size_t>(j)];
    A.block(static_cast<Eigen::Index>(i) * n, 0, n, n) = F * mask.asDiagonal();
  }
  return A;
}

// min over a uniform theta grid of ||e^{i theta} c - r||.
inline double grid_phase_distance(const CVector& c, const CVector& r, int points) {
  double best = INFINITY;
  for (int t = 0; t < points; ++t) {
    const double theta = 2.0 * std::numbers::pi * t / points;
    best = std::min(best, (std::polar(1.0, theta) * c - r).norm());
  }
  return best;
}

}  // namespace testing

#include <memory>

#include "genprior/generative.hpp"

namespace testing {

// Random affine generator with orthonormal real columns.
inline std::shared_ptr<const genprior::AffineGenerator> random_generator(std::size_t n, std::size_t k,
                                                                        std::uint64_t seed) {
  genprior::Rng rng(seed);
  Eigen::MatrixXd raw(n, k);
  for (auto& x : raw.reshaped()) x = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(raw).householderQ() * Eigen::MatrixXd::Identity(n, k);
  genprior::RVector s = genprior::RVector::LinSpaced(static_cast<Eigen::Index>(k), 1.0, 0.5);
  return std::make_shared<const genprior::AffineGenerator>(q, 0.5 * random_cvector(n, rng), s);
}

// Relative error between an analytic real gradient and central differences.
template <class F>
double finite_difference_error(F&& value, const Eigen::VectorXd& x, const Eigen::VectorXd& analytic) {
  Eigen::VectorXd fd(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(x[i]));
    Eigen::VectorXd xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    fd[i] = (value(xp) - value(xm)) / (2.0 * h);
  }
  return (fd - analytic).norm() / std::max(analytic.norm(), 1e-300);
}

}  // namespace testing
