#include "genprior/field.hpp"

#include <cmath>
#include <string>

namespace genprior {

namespace {

void require_finite(const CVector& v, const char* what) {
  if (v.size() < 1) throw DimensionError(std::string(what) + ": length must be at least 1");
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw DomainError(std::string(what) + ": non-finite entry at index " + std::to_string(i));
    }
  }
}

}  // namespace

ComplexField::ComplexField(CVector values, std::optional<Layout> layout)
    : values_(std::move(values)), layout_(layout) {
  require_finite(values_, "ComplexField");
  if (layout_ && layout_->height * layout_->width != size()) {
    throw DimensionError("ComplexField: layout " + std::to_string(layout_->height) + "x" +
                         std::to_string(layout_->width) + " does not match length " +
                         std::to_string(size()));
  }
}

ComplexField ComplexField::zeros(std::size_t n, std::optional<Layout> layout) {
  return ComplexField(CVector::Zero(static_cast<Eigen::Index>(n)), layout);
}

LatentVector::LatentVector(CVector values) : values_(std::move(values)) {
  require_finite(values_, "LatentVector");
}

cd inner(const CVector& f, const CVector& g) {
  require_same_size(static_cast<std::size_t>(f.size()), static_cast<std::size_t>(g.size()), "inner");
  // Eigen's dot conjugates the first argument.
  return g.dot(f);
}

cd inner(const ComplexField& f, const ComplexField& g) { return inner(f.values(), g.values()); }

PhaseAlignment align_global_phase(const ComplexField& candidate, const ComplexField& reference) {
  if (reference.norm() == 0.0) throw DomainError("align_global_phase: zero reference");
  const cd ip = inner(candidate, reference);
  const double theta = ip == cd(0.0, 0.0) ? 0.0 : -std::arg(ip);
  CVector aligned = candidate.values() * std::polar(1.0, theta);
  return {theta, ComplexField(std::move(aligned), candidate.layout())};
}

double rre(const CVector& candidate, const CVector& reference) {
  require_same_size(static_cast<std::size_t>(candidate.size()),
                    static_cast<std::size_t>(reference.size()), "rre");
  const double ref_norm = reference.norm();
  if (!(ref_norm > 0.0)) throw DomainError("rre: zero reference");
  // ||c e^{it} - r||^2 = ||c||^2 + ||r||^2 - 2 Re(e^{it} <c, r>), minimized
  // when the phase cancels: value ||c||^2 + ||r||^2 - 2|<c, r>|.
  const cd ip = inner(candidate, reference);
  const cd rot = ip == cd(0.0, 0.0) ? cd(1.0, 0.0) : std::conj(ip) / std::abs(ip);
  return (candidate * rot - reference).norm() / ref_norm;
}

double rre(const ComplexField& candidate, const ComplexField& reference) {
  return rre(candidate.values(), reference.values());
}

}  // namespace genprior
