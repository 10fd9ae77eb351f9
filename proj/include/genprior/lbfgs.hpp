#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace genprior {

struct SolverConfig {
  std::size_t memory = 10;
  double grad_tol = 1e-8;
  std::size_t max_iters = 2000;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  std::size_t max_line_search_steps = 40;

  /// Throws ConfigError unless 0 < c1 < c2 < 1, memory >= 1 and grad_tol >= 0.
  void validate() const;
};

enum class Termination { converged, max_iters, line_search_failure };

std::string_view to_string(Termination t);

/// Value and gradient of a smooth real objective; writes the gradient into
/// the second argument (pre-sized) and returns the value.
using RealObjective = std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  // Value at x0 followed by the value after each accepted step.
  std::vector<double> trace;
  double grad_norm = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  Termination termination = Termination::max_iters;
};

/// Two-loop-recursion L-BFGS with a strong-Wolfe line search (bracketing
/// and zoom with safeguarded cubic interpolation). Stops once
/// ||grad|| <= grad_tol * max(1, ||grad(x0)||). A failed line search ends the
/// run with the best iterate so far instead of throwing.
LbfgsResult lbfgs(const RealObjective& objective, Eigen::VectorXd x0, const SolverConfig& cfg);

}  // namespace genprior
