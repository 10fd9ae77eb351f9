#include <doctest.h>

#include <sstream>

#include "genprior/solver.hpp"
#include "support.hpp"

using namespace genprior;

namespace {

struct Instance {
  std::shared_ptr<const MaskedFourierOperator> op;
  std::shared_ptr<const AffineGenerator> gen;
  MeasurementVector y;
};

Instance make_instance(std::uint64_t seed, std::size_t n = 16, std::size_t ell = 4, std::size_t k = 6) {
  Instance in;
  in.op = std::make_shared<const MaskedFourierOperator>(sample_probes(ell, n, 0.5, seed),
                                                        DftPlan::one_dimensional(n));
  in.gen = testing::random_generator(n, k, seed + 100);
  const CVector f = testing::random_cvector(n, seed + 200);
  in.y = add_noise(forward_intensity(*in.op, ComplexField(f)), 0.1, seed);
  return in;
}

std::size_t dimension(ProblemMode mode, std::size_t n, std::size_t k) {
  return mode == ProblemMode::conventional ? n : mode == ProblemMode::generative ? k : n + k;
}

constexpr ProblemMode kModes[] = {ProblemMode::conventional, ProblemMode::generative, ProblemMode::combined};

}  // namespace

TEST_CASE("problem dimensions and weights") {
  const Instance in = make_instance(1);
  CHECK(build_problem(ProblemMode::conventional, in.op, nullptr, in.y, 0.0).dimension() == 16);
  CHECK(build_problem(ProblemMode::generative, in.op, in.gen, in.y, 0.0).dimension() == 6);
  const UnifiedProblem combined = build_problem(ProblemMode::combined, in.op, in.gen, in.y, 0.3);
  CHECK(combined.dimension() == 22);
  CHECK(combined.weights().head(6).norm() == 0.0);
  CHECK(combined.weights().tail(16) == CVector::Ones(16));
  const UnifiedProblem uniform =
      build_problem(ProblemMode::combined, in.op, in.gen, in.y, 0.3, WeightSpec::uniform(2.0, 3.0));
  CHECK(uniform.weights()[0] == cd(2.0));
  CHECK(uniform.weights()[21] == cd(3.0));

  CHECK_THROWS_AS(build_problem(ProblemMode::generative, in.op, nullptr, in.y, 0.0), ConfigError);
  CHECK_THROWS_AS(build_problem(ProblemMode::conventional, in.op, nullptr, in.y, -1.0), ConfigError);
  CHECK_THROWS_AS(build_problem(ProblemMode::conventional, in.op, nullptr, MeasurementVector{RVector::Zero(3)}, 0.0),
                  DimensionError);
  CHECK_THROWS_AS(objective(combined, CVector::Zero(21)), DimensionError);
  CHECK(parse_problem_mode("combined") == ProblemMode::combined);
  CHECK_THROWS_AS(parse_problem_mode("fancy"), ConfigError);
}

TEST_CASE("objective at an exact fit") {
  const Instance in = make_instance(2);
  for (ProblemMode mode : kModes) {
    CAPTURE(to_string(mode));
    const CVector x = testing::random_cvector(dimension(mode, 16, 6), 7);
    const UnifiedProblem probe = build_problem(mode, in.op, in.gen, in.y, 0.0);
    const MeasurementVector exact{intensity(*in.op, probe.object(x)), 0.0};
    CHECK(objective(build_problem(mode, in.op, in.gen, exact, 0.0), x) < 1e-20);
    const UnifiedProblem reg = build_problem(mode, in.op, in.gen, exact, 0.7);
    const double penalty = 0.49 * reg.weights().cwiseProduct(x).squaredNorm();
    CHECK(objective(reg, x) == doctest::Approx(penalty).epsilon(1e-12));
    // zero residual leaves only the regularizer in the gradient
    const CVector expected = 0.49 * reg.weights().cwiseAbs2().cwiseProduct(x);
    CHECK((gradient(reg, x) - expected).norm() <= 1e-12 * std::max(1.0, expected.norm()));
    CHECK(gradient(build_problem(mode, in.op, in.gen, exact, 0.0), x).norm() < 1e-10);
  }
}

TEST_CASE("gradient matches finite differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance in = make_instance(seed);
    for (ProblemMode mode : kModes) {
      CAPTURE(seed);
      CAPTURE(to_string(mode));
      const UnifiedProblem p =
          build_problem(mode, in.op, in.gen, in.y, 0.4, WeightSpec::uniform(cd(0.5, 0.2), cd(1.5, -0.3)));
      const CVector x = testing::random_cvector(p.dimension(), seed + 300);
      const double err = testing::finite_difference_error(
          [&](const Eigen::VectorXd& v) { return objective(p, from_real(v)); }, to_real(x),
          2.0 * to_real(gradient(p, x)));
      CHECK(err <= 1e-6);
    }
  }
}

TEST_CASE("reduction to the individual formulations") {
  const Instance in = make_instance(3);
  const Eigen::MatrixXcd A = in.op->dense();
  const Eigen::MatrixXcd G = in.gen->components().cast<cd>();
  const double lambda = 0.8;
  auto misfit = [&](const CVector& f) { return ((A * f).cwiseAbs2() - in.y.values).squaredNorm(); };

  const CVector f = testing::random_cvector(16, 11);
  const CVector z = testing::random_cvector(6, 12);
  const double conv = objective(build_problem(ProblemMode::conventional, in.op, nullptr, in.y, 0.0), f);
  CHECK(conv == doctest::Approx(misfit(f)).epsilon(1e-12));
  const double gen = objective(build_problem(ProblemMode::generative, in.op, in.gen, in.y, 0.0), z);
  CHECK(gen == doctest::Approx(misfit(G * z + in.gen->offset())).epsilon(1e-12));

  CVector x(22);
  x << z, f - (G * z + in.gen->offset());
  const double joint = misfit(f) + lambda * lambda * (G * z + in.gen->offset() - f).squaredNorm();
  CHECK(objective(build_problem(ProblemMode::combined, in.op, in.gen, in.y, lambda), x) ==
        doctest::Approx(joint).epsilon(1e-12));
}

TEST_CASE("phase gauge without offset") {
  const Instance in = make_instance(4);
  const auto centered = std::make_shared<const AffineGenerator>(in.gen->components(), CVector::Zero(16),
                                                                in.gen->singular_values());
  const UnifiedProblem p = build_problem(ProblemMode::generative, in.op, centered, in.y, 0.0);
  const CVector z = testing::random_cvector(6, 13);
  CHECK(objective(p, std::polar(1.0, 0.9) * z) == doctest::Approx(objective(p, z)).epsilon(1e-12));
}

TEST_CASE("default initialisation") {
  const Instance in = make_instance(5);
  CHECK(default_init(build_problem(ProblemMode::conventional, in.op, nullptr, in.y, 0.0)) == CVector::Zero(16));
  CHECK(default_init(build_problem(ProblemMode::conventional, in.op, in.gen, in.y, 0.0)) == in.gen->offset());
  for (ProblemMode mode : {ProblemMode::generative, ProblemMode::combined}) {
    const UnifiedProblem p = build_problem(mode, in.op, in.gen, in.y, 0.0);
    CHECK(p.object(default_init(p)) == in.gen->offset());
  }
}

TEST_CASE("real stacking") {
  const CVector x = testing::random_cvector(5, 14);
  CHECK(from_real(to_real(x)) == x);
  CHECK(to_real(x).size() == 10);
}

TEST_CASE("noiseless generative recovery on a small instance") {
  auto op = std::make_shared<const MaskedFourierOperator>(sample_probes(8, 16, 0.5, 21), DftPlan::one_dimensional(16));
  auto gen = testing::random_generator(16, 4, 22);
  const ComplexField truth = generate(*gen, LatentVector(testing::random_cvector(4, 23)));
  const UnifiedProblem p = build_problem(ProblemMode::generative, op, gen, forward_intensity(*op, truth), 0.0);
  const ReconReport r = lbfgs_minimize(p, default_init(p), SolverConfig{}, truth);
  REQUIRE(r.rre.has_value());
  CHECK(*r.rre < 1e-4);
  CHECK(r.solution_latent.has_value());
  for (std::size_t i = 1; i < r.objective_trace.size(); ++i) CHECK(r.objective_trace[i] < r.objective_trace[i - 1]);
  const ReconReport again = lbfgs_minimize(p, default_init(p), SolverConfig{}, truth);
  CHECK(again.objective_trace == r.objective_trace);

  std::ostringstream out;
  write_report(r, out);
  CHECK(out.str().find("termination = ") != std::string::npos);
  CHECK(out.str().find("rre = ") != std::string::npos);
}
