#include <doctest.h>

#include "genprior/errors.hpp"
#include "genprior/lbfgs.hpp"

using namespace genprior;
using Eigen::VectorXd;

namespace {

double rosenbrock(const VectorXd& x, VectorXd& g) {
  const double a = 1.0 - x[0];
  const double b = x[1] - x[0] * x[0];
  g.resize(2);
  g[0] = -2.0 * a - 400.0 * x[0] * b;
  g[1] = 200.0 * b;
  return a * a + 100.0 * b * b;
}

}  // namespace

TEST_CASE("Rosenbrock") {
  const LbfgsResult r = lbfgs(rosenbrock, (VectorXd(2) << -1.2, 1.0).finished(), SolverConfig{});
  CHECK(r.termination == Termination::converged);
  CHECK(r.iterations < 200);
  CHECK(std::abs(r.x[0] - 1.0) < 1e-6);
  CHECK(std::abs(r.x[1] - 1.0) < 1e-6);
  CHECK(r.trace.size() == r.iterations + 1);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] < r.trace[i - 1]);
}

TEST_CASE("ill-conditioned quadratic") {
  const VectorXd diag = VectorXd::LinSpaced(50, 1.0, 1e4);
  auto quad = [&](const VectorXd& x, VectorXd& g) {
    g = diag.cwiseProduct(x);
    return 0.5 * x.dot(g);
  };
  const LbfgsResult r = lbfgs(quad, VectorXd::Ones(50), SolverConfig{});
  CHECK(r.termination == Termination::converged);
  const double g0 = diag.norm();
  CHECK(diag.cwiseProduct(r.x).norm() <= 1e-8 * g0);
  CHECK(r.grad_norm <= 1e-8 * g0);
  CHECK(r.x.norm() < 1e-3);
}

TEST_CASE("deterministic runs") {
  const VectorXd x0 = (VectorXd(2) << 0.3, -0.4).finished();
  const LbfgsResult a = lbfgs(rosenbrock, x0, SolverConfig{});
  const LbfgsResult b = lbfgs(rosenbrock, x0, SolverConfig{});
  CHECK(a.trace == b.trace);
  CHECK(a.x == b.x);
}

TEST_CASE("stopping rules") {
  SolverConfig few;
  few.max_iters = 3;
  const LbfgsResult r = lbfgs(rosenbrock, (VectorXd(2) << -1.2, 1.0).finished(), few);
  CHECK(r.termination == Termination::max_iters);
  CHECK(r.iterations == 3);

  // A gradient pointing the wrong way cannot satisfy the Wolfe conditions.
  auto wrong = [](const VectorXd& x, VectorXd& g) {
    g = -x;
    return 0.5 * x.squaredNorm();
  };
  const LbfgsResult bad = lbfgs(wrong, VectorXd::Ones(3), SolverConfig{});
  CHECK(bad.termination == Termination::line_search_failure);
  CHECK(bad.value <= bad.trace.front());

  auto flat = [](const VectorXd& x, VectorXd& g) {
    g = VectorXd::Zero(x.size());
    return 1.0;
  };
  const LbfgsResult zero = lbfgs(flat, VectorXd::Ones(2), SolverConfig{});
  CHECK(zero.termination == Termination::converged);
  CHECK(zero.iterations == 0);
}

TEST_CASE("configuration checks") {
  SolverConfig c;
  c.wolfe_c1 = 0.95;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.memory = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = SolverConfig{};
  c.grad_tol = -1.0;
  CHECK_THROWS_AS(lbfgs(rosenbrock, VectorXd::Zero(2), c), ConfigError);
  CHECK(to_string(Termination::line_search_failure) == "line_search_failure");
}
