#include "genprior/vanderlugt.hpp"

#include <cmath>
#include <string>

namespace genprior {

std::size_t DefectEstimate::argmax() const {
  Eigen::Index idx = 0;
  eta_hat.values().cwiseAbs().maxCoeff(&idx);
  return static_cast<std::size_t>(idx);
}

DefectEstimate detect_defect(const MeasurementVector& y, const ComplexField& f_fit, const DftPlan& plan,
                             double tau_rel) {
  if (!(tau_rel > 0.0)) throw ConfigError("detect_defect: tau_rel must be positive");
  require_same_size(f_fit.size(), plan.size(), "detect_defect fitted object");
  if (y.size() != plan.size()) {
    std::string msg = "detect_defect: expected one plain Fourier pattern of length " +
                      std::to_string(plan.size()) + ", got " + std::to_string(y.size()) + " values";
    if (y.size() > plan.size() && y.size() % plan.size() == 0) {
      msg += " (looks like masked measurements with " + std::to_string(y.size() / plan.size()) +
             " probes, which this detector does not accept)";
    }
    throw DimensionError(msg);
  }

  const CVector u = plan.forward(f_fit.values());
  const RVector power = u.cwiseAbs2();
  const double tau = tau_rel * power.maxCoeff();
  const RVector misfit = y.values - power;

  CVector hologram(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double denom = power[j] + tau;
    hologram[j] = denom > 0.0 ? misfit[j] * u[j] / denom : cd(0.0, 0.0);
  }
  // A zero fit spectrum makes tau zero; the guard above keeps eta_hat at 0.
  return {ComplexField(plan.inverse(hologram), f_fit.layout()), tau > 0.0 ? tau : tau_rel,
          misfit.squaredNorm()};
}

DottedGlyphScene dotted_a_scene(std::size_t side) {
  if (side < 16) throw ConfigError("dotted_a_scene: side must be at least 16");
  const double s = static_cast<double>(side);
  const std::size_t n = side * side;
  CVector glyph = CVector::Zero(static_cast<Eigen::Index>(n));
  CVector accent = CVector::Zero(static_cast<Eigen::Index>(n));
  std::vector<bool> dot(n, false);

  // Bowl centred low, stem on the right, hook over the top.
  const double cy = 0.66 * s, cx = 0.45 * s, r = 0.18 * s, stroke = 0.05 * s;
  for (std::size_t row = 0; row < side; ++row) {
    for (std::size_t col = 0; col < side; ++col) {
      const double y = static_cast<double>(row) + 0.5;
      const double x = static_cast<double>(col) + 0.5;
      const double d = std::hypot(y - cy, x - cx);
      const bool bowl = std::abs(d - r) < stroke;
      const bool stem = std::abs(x - (cx + r)) < stroke && y > 0.38 * s && y < cy + r + stroke;
      const double hook_d = std::hypot(y - (0.42 * s), x - cx);
      const bool hook = std::abs(hook_d - r) < stroke && y < 0.42 * s;
      const auto idx = static_cast<Eigen::Index>(row * side + col);
      if (bowl || stem || hook) glyph[idx] = 1.0;
      if (std::hypot(y - 0.12 * s, x - (cx + 0.5 * r)) < 0.045 * s + 0.5) {
        accent[idx] = 1.0;
        dot[static_cast<std::size_t>(idx)] = true;
      }
    }
  }
  const Layout layout{side, side};
  return {ComplexField(glyph, layout), ComplexField(glyph + accent, layout), std::move(dot)};
}

}  // namespace genprior
