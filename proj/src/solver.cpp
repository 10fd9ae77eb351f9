#include "genprior/solver.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

namespace genprior {

std::string_view to_string(ProblemMode mode) {
  switch (mode) {
    case ProblemMode::conventional:
      return "conventional";
    case ProblemMode::generative:
      return "generative";
    case ProblemMode::combined:
      return "combined";
  }
  return "unknown";
}

ProblemMode parse_problem_mode(std::string_view name) {
  if (name == "conventional") return ProblemMode::conventional;
  if (name == "generative") return ProblemMode::generative;
  if (name == "combined") return ProblemMode::combined;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

UnifiedProblem::UnifiedProblem(ProblemMode mode, std::shared_ptr<const MaskedFourierOperator> op,
                               std::shared_ptr<const AffineGenerator> generator, MeasurementVector data,
                               double lambda, CVector weights)
    : mode_(mode),
      op_(std::move(op)),
      generator_(std::move(generator)),
      data_(std::move(data)),
      lambda_(lambda),
      weights_(std::move(weights)),
      weight_sq_(weights_.cwiseAbs2()) {
  if (!op_) throw ConfigError("UnifiedProblem: measurement operator is required");
  if (mode_ != ProblemMode::conventional && !generator_) {
    throw ConfigError("UnifiedProblem: " + std::string(to_string(mode_)) + " mode requires a generator");
  }
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) throw ConfigError("UnifiedProblem: lambda must be >= 0");
  if (generator_) require_same_size(generator_->n(), op_->n(), "UnifiedProblem generator vs operator");
  require_same_size(data_.size(), op_->m(), "UnifiedProblem data");
  const std::size_t n = op_->n();
  const std::size_t k = generator_ ? generator_->k() : 0;
  const std::size_t d = mode_ == ProblemMode::conventional ? n : mode_ == ProblemMode::generative ? k : k + n;
  require_same_size(dimension(), d, "UnifiedProblem weights");
}

CVector UnifiedProblem::object(const CVector& x) const {
  require_same_size(static_cast<std::size_t>(x.size()), dimension(), "UnifiedProblem::object");
  switch (mode_) {
    case ProblemMode::conventional:
      return x;
    case ProblemMode::generative:
      return generator_->generate(x);
    case ProblemMode::combined: {
      const auto k = static_cast<Eigen::Index>(generator_->k());
      return generator_->generate(x.head(k)) + x.tail(x.size() - k);
    }
  }
  return x;
}

double UnifiedProblem::evaluate(const CVector& x, CVector* grad) const {
  const CVector f = object(x);
  const std::size_t m = op_->m();
  const std::size_t n = op_->n();
  CVector u(static_cast<Eigen::Index>(m));
  op_->apply({f.data(), n}, {u.data(), m});

  double misfit = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double r = std::norm(u[j]) - data_.values[j];
    misfit += r * r;
    u[j] *= 2.0 * r;  // u becomes 2 r . u for the backward pass
  }
  const double lambda_sq = lambda_ * lambda_;
  const double penalty = lambda_sq * weight_sq_.dot(x.cwiseAbs2());

  if (grad) {
    CVector back(static_cast<Eigen::Index>(n));
    op_->adjoint({u.data(), m}, {back.data(), n});
    switch (mode_) {
      case ProblemMode::conventional:
        *grad = back;
        break;
      case ProblemMode::generative:
        *grad = generator_->linear_adjoint(back);
        break;
      case ProblemMode::combined: {
        const auto k = static_cast<Eigen::Index>(generator_->k());
        grad->resize(x.size());
        grad->head(k) = generator_->linear_adjoint(back);
        grad->tail(x.size() - k) = back;
        break;
      }
    }
    *grad += lambda_sq * weight_sq_.cwiseProduct(x);
  }
  return misfit + penalty;
}

UnifiedProblem build_problem(ProblemMode mode, std::shared_ptr<const MaskedFourierOperator> op,
                             std::shared_ptr<const AffineGenerator> generator, MeasurementVector y,
                             double lambda, const WeightSpec& spec) {
  if (!op) throw ConfigError("build_problem: measurement operator is required");
  if (mode != ProblemMode::conventional && !generator) {
    throw ConfigError("build_problem: " + std::string(to_string(mode)) + " mode requires a generator");
  }
  const auto n = static_cast<Eigen::Index>(op->n());
  const auto k = generator ? static_cast<Eigen::Index>(generator->k()) : 0;
  CVector w;
  switch (mode) {
    case ProblemMode::conventional:
      w = CVector::Constant(n, spec.kind == WeightSpec::Kind::paper ? cd(1.0) : spec.object_weight);
      break;
    case ProblemMode::generative:
      w = CVector::Constant(k, spec.kind == WeightSpec::Kind::paper ? cd(1.0) : spec.latent_weight);
      break;
    case ProblemMode::combined:
      w.resize(k + n);
      w.head(k).setConstant(spec.kind == WeightSpec::Kind::paper ? cd(0.0) : spec.latent_weight);
      w.tail(n).setConstant(spec.kind == WeightSpec::Kind::paper ? cd(1.0) : spec.object_weight);
      break;
  }
  return UnifiedProblem(mode, std::move(op), std::move(generator), std::move(y), lambda, std::move(w));
}

double objective(const UnifiedProblem& problem, const CVector& x) { return problem.evaluate(x, nullptr); }

CVector gradient(const UnifiedProblem& problem, const CVector& x) {
  CVector g;
  problem.evaluate(x, &g);
  return g;
}

Eigen::VectorXd to_real(const CVector& x) {
  Eigen::VectorXd v(2 * x.size());
  v.head(x.size()) = x.real();
  v.tail(x.size()) = x.imag();
  return v;
}

CVector from_real(const Eigen::VectorXd& v) {
  const Eigen::Index d = v.size() / 2;
  CVector x(d);
  x.real() = v.head(d);
  x.imag() = v.tail(d);
  return x;
}

CVector default_init(const UnifiedProblem& problem) {
  const auto d = static_cast<Eigen::Index>(problem.dimension());
  if (problem.mode() == ProblemMode::conventional && problem.generator()) {
    return problem.generator()->offset();
  }
  return CVector::Zero(d);
}

ReconReport lbfgs_minimize(const UnifiedProblem& problem, const CVector& x0, const SolverConfig& cfg,
                           const std::optional<ComplexField>& truth) {
  require_same_size(static_cast<std::size_t>(x0.size()), problem.dimension(), "lbfgs_minimize x0");
  const auto start = std::chrono::steady_clock::now();

  const RealObjective fn = [&problem](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
    CVector cg;
    const double value = problem.evaluate(from_real(v), &cg);
    g = 2.0 * to_real(cg);
    return value;
  };
  LbfgsResult run = lbfgs(fn, to_real(x0), cfg);

  const CVector x = from_real(run.x);
  std::optional<Layout> layout;
  if (problem.generator()) {
    layout = problem.generator()->layout();
  } else if (problem.op().plan().is_two_dimensional()) {
    layout = Layout{problem.op().plan().height(), problem.op().plan().width()};
  }
  ReconReport report(ComplexField(problem.object(x), layout));
  if (problem.mode() != ProblemMode::conventional) {
    report.solution_latent = LatentVector(x.head(static_cast<Eigen::Index>(problem.generator()->k())));
  }
  report.solution = x;
  report.objective_trace = std::move(run.trace);
  report.grad_norm_final = run.grad_norm;
  report.iterations = run.iterations;
  report.termination = run.termination;
  if (truth) report.rre = rre(report.solution_object, *truth);
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_report(const ReconReport& report, std::ostream& out) {
  out << std::setprecision(17);
  out << "iterations = " << report.iterations << '\n';
  out << "termination = " << to_string(report.termination) << '\n';
  out << "final_objective = " << report.final_objective() << '\n';
  out << "grad_norm_final = " << report.grad_norm_final << '\n';
  if (report.rre) out << "rre = " << *report.rre << '\n';
  out << "wall_ms = " << report.wall_ms << '\n';
  out << "objective_trace =";
  for (double v : report.objective_trace) out << ' ' << v;
  out << '\n';
}

}  // namespace genprior
