#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "genprior/field.hpp"
#include "genprior/transform.hpp"

namespace genprior {

/// ell binary probes of length n drawn i.i.d. Bernoulli(p) from a seeded
/// stream. Regenerating from (seed, ell, n, p) is bit-identical.
class ProbeSet {
 public:
  ProbeSet(std::vector<std::vector<std::uint8_t>> probes, std::uint64_t seed, double bernoulli_p);

  std::size_t count() const noexcept { return probes_.size(); }
  std::size_t length() const noexcept { return probes_.front().size(); }
  const std::vector<std::uint8_t>& probe(std::size_t i) const { return probes_.at(i); }
  std::uint64_t seed() const noexcept { return seed_; }
  double bernoulli_p() const noexcept { return p_; }

  double fraction_ones() const;

 private:
  std::vector<std::vector<std::uint8_t>> probes_;
  std::uint64_t seed_;
  double p_;
};

ProbeSet sample_probes(std::size_t ell, std::size_t n, double p, std::uint64_t seed);

/// Real intensity data, length m. Entries may be negative after noise.
struct MeasurementVector {
  RVector values;
  double sigma = 0.0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
};

/// A = [F diag(a_1); ...; F diag(a_ell)] with F the unitary DFT of `plan`.
class MaskedFourierOperator {
 public:
  MaskedFourierOperator(ProbeSet probes, DftPlan plan);

  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return n_ * probes_.count(); }
  const ProbeSet& probes() const noexcept { return probes_; }
  const DftPlan& plan() const noexcept { return plan_; }

  // Raw kernels; `out` must be sized m (apply) or n (adjoint).
  void apply(std::span<const cd> f, std::span<cd> out) const;
  void adjoint(std::span<const cd> v, std::span<cd> out) const;

  CVector apply(const CVector& f) const;
  CVector adjoint(const CVector& v) const;

  /// Dense m x n matrix, for tests and small diagnostics.
  Eigen::MatrixXcd dense() const;

 private:
  ProbeSet probes_;
  DftPlan plan_;
  std::size_t n_;
  // Probe entries as doubles, probe-major, for the hot loops.
  std::vector<double> mask_;
};

ComplexField apply_linear(const MaskedFourierOperator& op, const ComplexField& f);
ComplexField adjoint_apply(const MaskedFourierOperator& op, const ComplexField& v);

/// |A f|^2 elementwise; sigma = 0.
MeasurementVector forward_intensity(const MaskedFourierOperator& op, const ComplexField& f);
RVector intensity(const MaskedFourierOperator& op, const CVector& f);

/// y + eps, eps i.i.d. N(0, sigma^2). Throws ConfigError for sigma < 0.
MeasurementVector add_noise(const MeasurementVector& y, double sigma, std::uint64_t seed);

/// 10 log10((||clean||^2 / m) / sigma^2); +infinity when sigma == 0.
double snr_db(const MeasurementVector& clean, double sigma);

}  // namespace genprior
