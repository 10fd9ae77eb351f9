#include "genprior/measurement.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "genprior/rng.hpp"

namespace genprior {

ProbeSet::ProbeSet(std::vector<std::vector<std::uint8_t>> probes, std::uint64_t seed,
                   double bernoulli_p)
    : probes_(std::move(probes)), seed_(seed), p_(bernoulli_p) {
  if (probes_.empty()) throw ConfigError("ProbeSet: at least one probe is required");
  const std::size_t n = probes_.front().size();
  if (n == 0) throw ConfigError("ProbeSet: probe length must be at least 1");
  for (const auto& probe : probes_) {
    require_same_size(probe.size(), n, "ProbeSet");
    for (auto v : probe) {
      if (v > 1) throw ConfigError("ProbeSet: probe entries must be 0 or 1");
    }
  }
}

double ProbeSet::fraction_ones() const {
  std::size_t ones = 0;
  for (const auto& probe : probes_) {
    for (auto v : probe) ones += v;
  }
  return static_cast<double>(ones) / static_cast<double>(count() * length());
}

ProbeSet sample_probes(std::size_t ell, std::size_t n, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ConfigError("sample_probes: Bernoulli probability must lie in (0, 1], got " +
                      std::to_string(p));
  }
  if (ell < 1 || n < 1) throw ConfigError("sample_probes: ell and n must be at least 1");
  Rng rng(derive_seed(seed, "probes"));
  std::vector<std::vector<std::uint8_t>> probes(ell, std::vector<std::uint8_t>(n));
  for (auto& probe : probes) {
    for (auto& v : probe) v = rng.bernoulli(p) ? 1 : 0;
  }
  return ProbeSet(std::move(probes), seed, p);
}

MaskedFourierOperator::MaskedFourierOperator(ProbeSet probes, DftPlan plan)
    : probes_(std::move(probes)), plan_(std::move(plan)), n_(plan_.size()) {
  require_same_size(probes_.length(), n_, "MaskedFourierOperator: probe length vs transform size");
  mask_.reserve(m());
  for (std::size_t i = 0; i < probes_.count(); ++i) {
    for (auto v : probes_.probe(i)) mask_.push_back(static_cast<double>(v));
  }
}

void MaskedFourierOperator::apply(std::span<const cd> f, std::span<cd> out) const {
  require_same_size(f.size(), n_, "apply_linear");
  require_same_size(out.size(), m(), "apply_linear output");
  for (std::size_t i = 0; i < probes_.count(); ++i) {
    auto block = out.subspan(i * n_, n_);
    const double* mask = mask_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) block[j] = f[j] * mask[j];
    plan_.forward_inplace(block);
  }
}

void MaskedFourierOperator::adjoint(std::span<const cd> v, std::span<cd> out) const {
  require_same_size(v.size(), m(), "adjoint_apply");
  require_same_size(out.size(), n_, "adjoint_apply output");
  thread_local std::vector<cd> block;
  block.resize(n_);
  std::fill(out.begin(), out.end(), cd(0.0, 0.0));
  for (std::size_t i = 0; i < probes_.count(); ++i) {
    std::copy_n(v.begin() + static_cast<std::ptrdiff_t>(i * n_), n_, block.begin());
    plan_.inverse_inplace(block);
    const double* mask = mask_.data() + i * n_;
    for (std::size_t j = 0; j < n_; ++j) out[j] += block[j] * mask[j];
  }
}

CVector MaskedFourierOperator::apply(const CVector& f) const {
  CVector out(static_cast<Eigen::Index>(m()));
  apply({f.data(), static_cast<std::size_t>(f.size())}, {out.data(), m()});
  return out;
}

CVector MaskedFourierOperator::adjoint(const CVector& v) const {
  CVector out(static_cast<Eigen::Index>(n_));
  adjoint({v.data(), static_cast<std::size_t>(v.size())}, {out.data(), n_});
  return out;
}

Eigen::MatrixXcd MaskedFourierOperator::dense() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXcd a(static_cast<Eigen::Index>(m()), n);
  for (Eigen::Index j = 0; j < n; ++j) a.col(j) = apply(CVector(CVector::Unit(n, j)));
  return a;
}

ComplexField apply_linear(const MaskedFourierOperator& op, const ComplexField& f) {
  return ComplexField(op.apply(f.values()));
}

ComplexField adjoint_apply(const MaskedFourierOperator& op, const ComplexField& v) {
  std::optional<Layout> layout;
  if (op.plan().is_two_dimensional()) layout = Layout{op.plan().height(), op.plan().width()};
  return ComplexField(op.adjoint(v.values()), layout);
}

RVector intensity(const MaskedFourierOperator& op, const CVector& f) {
  return op.apply(f).cwiseAbs2();
}

MeasurementVector forward_intensity(const MaskedFourierOperator& op, const ComplexField& f) {
  return {intensity(op, f.values()), 0.0};
}

MeasurementVector add_noise(const MeasurementVector& y, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw ConfigError("add_noise: sigma must be a finite nonnegative number");
  }
  MeasurementVector out{y.values, sigma};
  if (sigma == 0.0) return out;
  Rng rng(derive_seed(seed, "noise"));
  for (Eigen::Index j = 0; j < out.values.size(); ++j) out.values[j] += sigma * rng.normal();
  return out;
}

double snr_db(const MeasurementVector& clean, double sigma) {
  if (sigma == 0.0) return std::numeric_limits<double>::infinity();
  if (!(sigma > 0.0)) throw ConfigError("snr_db: sigma must be positive");
  const double power = clean.values.squaredNorm() / static_cast<double>(clean.size());
  return 10.0 * std::log10(power / (sigma * sigma));
}

}  // namespace genprior
