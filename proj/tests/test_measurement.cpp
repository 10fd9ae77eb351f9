#include <doctest.h>

#include "genprior/measurement.hpp"
#include "support.hpp"

using namespace genprior;

namespace {

MaskedFourierOperator small_operator(std::size_t n, std::size_t ell, std::uint64_t seed) {
  return MaskedFourierOperator(sample_probes(ell, n, 0.5, seed), DftPlan::one_dimensional(n));
}

}  // namespace

TEST_CASE("probe sampling") {
  const ProbeSet probes = sample_probes(100, 64, 0.5, 7);
  CHECK(probes.count() == 100);
  CHECK(probes.length() == 64);
  const MaskedFourierOperator op(probes, DftPlan::two_dimensional(8, 8));
  CHECK(op.m() == 6400);
  // frozen from the seeded stream
  CHECK(probes.fraction_ones() == doctest::Approx(0.50140625).epsilon(1e-15));
  CHECK(probes.fraction_ones() >= 0.45);
  CHECK(probes.fraction_ones() <= 0.55);

  const ProbeSet again = sample_probes(100, 64, 0.5, 7);
  for (std::size_t i = 0; i < 100; ++i) CHECK(again.probe(i) == probes.probe(i));
  CHECK(sample_probes(100, 64, 0.5, 8).probe(0) != probes.probe(0));

  const ProbeSet ones = sample_probes(5, 16, 1.0, 3);
  for (std::size_t i = 0; i < 5; ++i) CHECK(ones.probe(i) == std::vector<std::uint8_t>(16, 1));

  CHECK_THROWS_AS(sample_probes(3, 8, 0.0, 1), ConfigError);
  CHECK_THROWS_AS(sample_probes(3, 8, 1.5, 1), ConfigError);
  CHECK_THROWS_AS(sample_probes(0, 8, 0.5, 1), ConfigError);
  CHECK_THROWS_AS(ProbeSet({{0, 2}}, 1, 0.5), ConfigError);
  CHECK_THROWS_AS(ProbeSet({{0, 1}, {1}}, 1, 0.5), DimensionError);
}

TEST_CASE("operator matches the dense oracle") {
  const MaskedFourierOperator op = small_operator(8, 3, 2);
  const Eigen::MatrixXcd A = testing::dense_masked(op.probes(), testing::dft_matrix(8));
  CHECK((op.dense() - A).norm() < 1e-12);

  const CVector f = testing::random_cvector(8, 31);
  const CVector v = testing::random_cvector(24, 32);
  CHECK((op.apply(f) - A * f).norm() < 1e-12);
  CHECK((op.adjoint(v) - A.adjoint() * v).norm() < 1e-12);
  CHECK((intensity(op, f) - (A * f).cwiseAbs2()).norm() < 1e-12);

  CHECK(apply_linear(op, ComplexField::zeros(8)).norm() == 0.0);
  CHECK(adjoint_apply(op, ComplexField::zeros(24)).norm() == 0.0);
  CHECK(forward_intensity(op, ComplexField::zeros(8)).values.norm() == 0.0);

  const MaskedFourierOperator op2d(sample_probes(3, 16, 0.5, 4), DftPlan::two_dimensional(4, 4));
  const Eigen::MatrixXcd A2 = testing::dense_masked(op2d.probes(), testing::dft_matrix_2d(4, 4));
  const CVector g = testing::random_cvector(16, 33);
  CHECK((op2d.apply(g) - A2 * g).norm() < 1e-12);
}

TEST_CASE("single all-ones probe reduces to the transform") {
  const MaskedFourierOperator op(ProbeSet({{1, 1, 1, 1}}, 0, 1.0), DftPlan::one_dimensional(4));
  const CVector block = op.apply((CVector(4) << 1.0, 0.0, 0.0, 0.0).finished());
  for (Eigen::Index j = 0; j < 4; ++j) CHECK(std::abs(block[j] - cd(0.5, 0.0)) < 1e-15);
}

TEST_CASE("adjoint identity and block energy") {
  const MaskedFourierOperator op = small_operator(8, 3, 5);
  genprior::Rng rng(40);
  double worst = 0.0;
  double worst_energy = 0.0;
  for (int t = 0; t < 100; ++t) {
    const CVector f = testing::random_cvector(8, rng);
    const CVector v = testing::random_cvector(24, rng);
    worst = std::max(worst, std::abs(inner(op.apply(f), v) - inner(f, op.adjoint(v))));
    double energy = 0.0;
    for (std::size_t i = 0; i < op.probes().count(); ++i)
      for (std::size_t j = 0; j < 8; ++j) energy += op.probes().probe(i)[j] * std::norm(f[j]);
    worst_energy = std::max(worst_energy, std::abs(op.apply(f).squaredNorm() - energy));
  }
  CHECK(worst < 1e-12);
  CHECK(worst_energy < 1e-12);
}

TEST_CASE("intensity is blind to global phase") {
  const MaskedFourierOperator op = small_operator(16, 4, 6);
  const CVector f = testing::random_cvector(16, 41);
  for (double theta : {0.3, 1.7, -2.9}) {
    CHECK((intensity(op, std::polar(1.0, theta) * f) - intensity(op, f)).norm() < 1e-12);
  }
}

TEST_CASE("operator input checks") {
  const MaskedFourierOperator op = small_operator(8, 2, 1);
  CHECK_THROWS_AS(op.apply(CVector::Zero(7)), DimensionError);
  CHECK_THROWS_AS(op.adjoint(CVector::Zero(8)), DimensionError);
  CHECK_THROWS_AS(MaskedFourierOperator(sample_probes(2, 8, 0.5, 1), DftPlan::one_dimensional(9)), DimensionError);
}

TEST_CASE("noise") {
  const MeasurementVector y{RVector::LinSpaced(6400, 0.0, 1.0), 0.0};
  CHECK(add_noise(y, 0.0, 3).values == y.values);

  const MeasurementVector a = add_noise(y, 1.0, 11);
  const RVector e = a.values - y.values;
  const double mean = e.mean();
  const double sd = std::sqrt((e.array() - mean).square().sum() / 6399.0);
  CHECK(sd == doctest::Approx(1.0).epsilon(0.05));
  CHECK(sd == doctest::Approx(0.98133890760511966).epsilon(1e-12));
  CHECK(a.sigma == 1.0);

  CHECK(add_noise(y, 1.0, 11).values == a.values);
  CHECK(add_noise(y, 1.0, 12).values != a.values);
  CHECK_THROWS_AS(add_noise(y, -0.1, 1), ConfigError);
}

TEST_CASE("signal to noise ratio") {
  const MeasurementVector unit{RVector::Ones(10), 0.0};
  CHECK(snr_db(unit, 1.0) == doctest::Approx(0.0));
  CHECK(snr_db(unit, 0.1) - snr_db(unit, 1.0) == doctest::Approx(20.0));
  CHECK(std::isinf(snr_db(unit, 0.0)));
  CHECK_THROWS_AS(snr_db(unit, -1.0), ConfigError);

  const MaskedFourierOperator op(sample_probes(100, 64, 0.5, 1), DftPlan::two_dimensional(8, 8));
  genprior::Rng rng(derive_seed(3, "desk"));
  CVector f = testing::random_cvector(64, rng);
  f /= f.norm();
  const MeasurementVector clean = forward_intensity(op, ComplexField(f));
  const double expected = 10.0 * std::log10(clean.values.squaredNorm() / 6400.0 / 1e-4);
  CHECK(snr_db(clean, 0.01) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(snr_db(clean, 0.01) == doctest::Approx(0.92142122785223579).epsilon(1e-10));
}
