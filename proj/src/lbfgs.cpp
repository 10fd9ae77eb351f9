#include "genprior/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <optional>

#include "genprior/errors.hpp"

namespace genprior {

void SolverConfig::validate() const {
  if (!(wolfe_c1 > 0.0 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    throw ConfigError("SolverConfig: need 0 < wolfe_c1 < wolfe_c2 < 1");
  }
  if (memory < 1) throw ConfigError("SolverConfig: memory must be at least 1");
  if (!(grad_tol >= 0.0)) throw ConfigError("SolverConfig: grad_tol must be nonnegative");
  if (max_line_search_steps < 1) throw ConfigError("SolverConfig: max_line_search_steps must be at least 1");
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::converged:
      return "converged";
    case Termination::max_iters:
      return "max_iters";
    case Termination::line_search_failure:
      return "line_search_failure";
  }
  return "unknown";
}

namespace {

using Eigen::VectorXd;

struct Trial {
  double step = 0.0;
  double value = 0.0;
  double slope = 0.0;
  VectorXd x;
  VectorXd grad;
};

class LineSearch {
 public:
  LineSearch(const RealObjective& objective, const SolverConfig& cfg, const VectorXd& x, double value,
             const VectorXd& grad, const VectorXd& dir)
      : objective_(objective), cfg_(cfg), x_(x), dir_(dir) {
    origin_.step = 0.0;
    origin_.value = value;
    origin_.slope = grad.dot(dir);
    origin_.x = x;
    origin_.grad = grad;
  }

  // Returns a point satisfying sufficient decrease (and, unless the step
  // budget ran out, the strong curvature condition); nullopt if no step
  // with sufficient decrease was found.
  std::optional<Trial> search(double initial_step) {
    Trial prev = origin_;
    double step = initial_step;
    for (std::size_t i = 0; evaluations_ < cfg_.max_line_search_steps; ++i) {
      Trial cur = evaluate(step);
      if (!std::isfinite(cur.value) || violates_armijo(cur) || (i > 0 && cur.value >= prev.value)) {
        return zoom(prev, cur);
      }
      if (std::abs(cur.slope) <= -cfg_.wolfe_c2 * origin_.slope) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = std::move(cur);
      step *= 2.0;
    }
    return prev.step > 0.0 ? std::optional<Trial>(std::move(prev)) : std::nullopt;
  }

  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  Trial evaluate(double step) {
    ++evaluations_;
    Trial t;
    t.step = step;
    t.x = x_ + step * dir_;
    t.grad.resize(t.x.size());
    t.value = objective_(t.x, t.grad);
    t.slope = t.grad.dot(dir_);
    return t;
  }

  bool violates_armijo(const Trial& t) const {
    return t.value > origin_.value + cfg_.wolfe_c1 * t.step * origin_.slope;
  }

  static double interpolate(const Trial& lo, const Trial& hi) {
    const double width = hi.step - lo.step;
    const double lower = std::min(lo.step, hi.step) + 0.1 * std::abs(width);
    const double upper = std::max(lo.step, hi.step) - 0.1 * std::abs(width);
    double step = 0.5 * (lo.step + hi.step);
    if (std::isfinite(hi.value)) {
      const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (lo.step - hi.step);
      const double disc = d1 * d1 - lo.slope * hi.slope;
      if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), width);
        const double cubic = hi.step - width * (hi.slope + d2 - d1) / (hi.slope - lo.slope + 2.0 * d2);
        if (std::isfinite(cubic)) step = cubic;
      }
    }
    return std::clamp(step, lower, upper);
  }

  std::optional<Trial> zoom(Trial lo, Trial hi) {
    while (evaluations_ < cfg_.max_line_search_steps) {
      Trial cur = evaluate(interpolate(lo, hi));
      if (!std::isfinite(cur.value) || violates_armijo(cur) || cur.value >= lo.value) {
        hi = std::move(cur);
        continue;
      }
      if (std::abs(cur.slope) <= -cfg_.wolfe_c2 * origin_.slope) return cur;
      if (cur.slope * (hi.step - lo.step) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    // Budget exhausted: lo, if it moved, still gives sufficient decrease.
    if (lo.step > 0.0 && lo.value < origin_.value) return lo;
    return std::nullopt;
  }

  const RealObjective& objective_;
  const SolverConfig& cfg_;
  const VectorXd& x_;
  const VectorXd& dir_;
  Trial origin_;
  std::size_t evaluations_ = 0;
};

}  // namespace

LbfgsResult lbfgs(const RealObjective& objective, Eigen::VectorXd x0, const SolverConfig& cfg) {
  cfg.validate();
  LbfgsResult result;
  result.x = std::move(x0);
  VectorXd grad(result.x.size());
  result.value = objective(result.x, grad);
  result.evaluations = 1;
  result.trace.push_back(result.value);
  result.grad_norm = grad.norm();
  const double stop = cfg.grad_tol * std::max(1.0, result.grad_norm);

  std::deque<std::pair<VectorXd, VectorXd>> pairs;  // (s, y)
  std::vector<double> alpha(cfg.memory);

  while (true) {
    if (result.grad_norm <= stop) {
      result.termination = Termination::converged;
      break;
    }
    if (result.iterations >= cfg.max_iters) {
      result.termination = Termination::max_iters;
      break;
    }

    // Two-loop recursion.
    VectorXd dir = -grad;
    for (std::size_t i = pairs.size(); i-- > 0;) {
      const auto& [s, y] = pairs[i];
      alpha[i] = s.dot(dir) / y.dot(s);
      dir -= alpha[i] * y;
    }
    if (!pairs.empty()) {
      const auto& [s, y] = pairs.back();
      dir *= s.dot(y) / y.squaredNorm();
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto& [s, y] = pairs[i];
      const double beta = y.dot(dir) / y.dot(s);
      dir += (alpha[i] - beta) * s;
    }
    if (!(grad.dot(dir) < 0.0)) {
      pairs.clear();
      dir = -grad;
    }

    const double initial = pairs.empty() ? std::min(1.0, 1.0 / result.grad_norm) : 1.0;
    LineSearch ls(objective, cfg, result.x, result.value, grad, dir);
    auto accepted = ls.search(initial);
    result.evaluations += ls.evaluations();
    if (!accepted || !(accepted->value < result.value)) {
      result.termination = Termination::line_search_failure;
      break;
    }

    VectorXd s = accepted->x - result.x;
    VectorXd y = accepted->grad - grad;
    const double sy = s.dot(y);
    if (sy > std::numeric_limits<double>::epsilon() * y.squaredNorm()) {
      if (pairs.size() == cfg.memory) pairs.pop_front();
      pairs.emplace_back(std::move(s), std::move(y));
    }
    result.x = std::move(accepted->x);
    grad = std::move(accepted->grad);
    result.value = accepted->value;
    result.grad_norm = grad.norm();
    result.trace.push_back(result.value);
    ++result.iterations;
  }
  return result;
}

}  // namespace genprior
