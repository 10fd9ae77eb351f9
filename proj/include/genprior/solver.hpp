#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string_view>

#include "genprior/generative.hpp"
#include "genprior/lbfgs.hpp"
#include "genprior/measurement.hpp"

namespace genprior {

/// Which map B the unknown x goes through before A:
///   conventional  x = f,        B = identity        (d = n)
///   generative    x = z,        B = G               (d = k)
///   combined      x = (z, h),   B(z, h) = G(z) + h  (d = k + n)
enum class ProblemMode { conventional, generative, combined };

std::string_view to_string(ProblemMode mode);
ProblemMode parse_problem_mode(std::string_view name);

/// How to build the Tikhonov weight vector w.
struct WeightSpec {
  enum class Kind { paper, uniform };
  Kind kind = Kind::paper;
  // Only read for Kind::uniform; latent_weight applies to the latent
  // block in combined mode, object_weight to everything else.
  cd latent_weight = 1.0;
  cd object_weight = 1.0;

  /// All ones, except zeros on the latent block in combined mode.
  static WeightSpec paper() { return {}; }
  static WeightSpec uniform(cd latent = 1.0, cd object = 1.0) { return {Kind::uniform, latent, object}; }
};

/// min_x || |A B(x)|^2 - y ||^2 + lambda^2 || w . x ||^2
class UnifiedProblem {
 public:
  UnifiedProblem(ProblemMode mode, std::shared_ptr<const MaskedFourierOperator> op,
                 std::shared_ptr<const AffineGenerator> generator, MeasurementVector data, double lambda,
                 CVector weights);

  ProblemMode mode() const noexcept { return mode_; }
  const MaskedFourierOperator& op() const noexcept { return *op_; }
  const AffineGenerator* generator() const noexcept { return generator_.get(); }
  const MeasurementVector& data() const noexcept { return data_; }
  double lambda() const noexcept { return lambda_; }
  const CVector& weights() const noexcept { return weights_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(weights_.size()); }

  /// B(x).
  CVector object(const CVector& x) const;

  /// Objective value; if `grad` is non-null it receives the
  /// conjugate-Wirtinger gradient dF/d(conj x).
  double evaluate(const CVector& x, CVector* grad) const;

 private:
  ProblemMode mode_;
  std::shared_ptr<const MaskedFourierOperator> op_;
  std::shared_ptr<const AffineGenerator> generator_;
  MeasurementVector data_;
  double lambda_;
  CVector weights_;
  RVector weight_sq_;
};

UnifiedProblem build_problem(ProblemMode mode, std::shared_ptr<const MaskedFourierOperator> op,
                             std::shared_ptr<const AffineGenerator> generator, MeasurementVector y,
                             double lambda, const WeightSpec& weights = WeightSpec::paper());

double objective(const UnifiedProblem& problem, const CVector& x);

/// 2 J^H A^H (r . u) + lambda^2 |w|^2 . x with u = A B(x), r = |u|^2 - y.
CVector gradient(const UnifiedProblem& problem, const CVector& x);

/// Real stacking used by the optimizer: [Re x; Im x] and, for gradients,
/// [2 Re g; 2 Im g].
Eigen::VectorXd to_real(const CVector& x);
CVector from_real(const Eigen::VectorXd& v);

/// conventional: b if a generator is attached, else 0. generative: 0.
/// combined: (0, 0), so B(x0) = b.
CVector default_init(const UnifiedProblem& problem);

struct ReconReport {
  explicit ReconReport(ComplexField object) : solution_object(std::move(object)) {}

  ComplexField solution_object;
  std::optional<LatentVector> solution_latent;
  CVector solution;  // raw x
  std::vector<double> objective_trace;
  double grad_norm_final = 0.0;
  std::size_t iterations = 0;
  Termination termination = Termination::max_iters;
  std::optional<double> rre;
  double wall_ms = 0.0;

  double final_objective() const { return objective_trace.back(); }
};

ReconReport lbfgs_minimize(const UnifiedProblem& problem, const CVector& x0, const SolverConfig& cfg,
                           const std::optional<ComplexField>& truth = std::nullopt);

/// One "key = value" line per scalar field plus the objective trace.
void write_report(const ReconReport& report, std::ostream& out);

}  // namespace genprior
