#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>

#include "genprior/errors.hpp"

namespace genprior {

using cd = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct Layout {
  std::size_t height = 0;
  std::size_t width = 0;
  bool operator==(const Layout&) const = default;
};

/// A complex signal in C^n with an optional 2D (row-major) layout.
///
/// The layout is metadata only; every operation works on the flat vector.
/// Construction validates that all entries are finite and the layout, if
/// present, multiplies out to n.
class ComplexField {
 public:
  explicit ComplexField(CVector values, std::optional<Layout> layout = std::nullopt);

  static ComplexField zeros(std::size_t n, std::optional<Layout> layout = std::nullopt);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const CVector& values() const noexcept { return values_; }
  const std::optional<Layout>& layout() const noexcept { return layout_; }
  cd operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

  double norm() const { return values_.norm(); }
  ComplexField with_layout(std::optional<Layout> layout) const {
    return ComplexField(values_, layout);
  }

 private:
  CVector values_;
  std::optional<Layout> layout_;
};

/// Latent coordinates z in C^k.
class LatentVector {
 public:
  explicit LatentVector(CVector values);

  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
  const CVector& values() const noexcept { return values_; }
  double norm() const { return values_.norm(); }

 private:
  CVector values_;
};

/// sum_j f_j * conj(g_j)
cd inner(const CVector& f, const CVector& g);
cd inner(const ComplexField& f, const ComplexField& g);

struct PhaseAlignment {
  double theta = 0.0;
  ComplexField aligned;
};

/// Rotates `candidate` by the unit scalar that brings it closest to
/// `reference`: theta = -arg <candidate, reference>. If the inner product is
/// exactly zero every theta is optimal and theta = 0 is returned.
PhaseAlignment align_global_phase(const ComplexField& candidate, const ComplexField& reference);

/// Relative reconstruction error modulo global phase:
///   min_theta ||e^{i theta} candidate - reference|| / ||reference||.
/// Throws DomainError for a zero reference.
double rre(const CVector& candidate, const CVector& reference);
double rre(const ComplexField& candidate, const ComplexField& reference);

}  // namespace genprior
