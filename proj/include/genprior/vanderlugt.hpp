#pragma once

#include <vector>

#include "genprior/field.hpp"
#include "genprior/measurement.hpp"
#include "genprior/transform.hpp"

namespace genprior {

struct DefectEstimate {
  ComplexField eta_hat;
  double regularizer_tau = 0.0;
  double residual_energy = 0.0;  // || y - |F f_fit|^2 ||^2

  std::size_t argmax() const;
};

/// Hologram-based defect estimate from a single plain (unmasked) Fourier
/// intensity pattern y and a fitted object f_fit:
///   u = F f_fit,  H_j = (y_j - |u_j|^2) u_j / (|u_j|^2 + tau),
///   eta_hat = F^{-1} H,  tau = tau_rel * max_j |u_j|^2.
/// The conjugate-hologram contribution stays in the output as speckle.
DefectEstimate detect_defect(const MeasurementVector& y, const ComplexField& f_fit, const DftPlan& plan,
                             double tau_rel = 1e-3);

/// A lowercase 'a' drawn on a side x side grid, with and without a small
/// dot above it. `dot` marks the pixels belonging to the dot.
struct DottedGlyphScene {
  ComplexField fit;
  ComplexField truth;
  std::vector<bool> dot;
};

DottedGlyphScene dotted_a_scene(std::size_t side = 32);

}  // namespace genprior
