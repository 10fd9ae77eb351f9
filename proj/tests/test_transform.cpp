#include <doctest.h>

#include "genprior/transform.hpp"
#include "support.hpp"

using namespace genprior;

TEST_CASE("impulse and constant") {
  const DftPlan plan = DftPlan::one_dimensional(4);
  const ComplexField e0((CVector(4) << 1.0, 0.0, 0.0, 0.0).finished());
  const ComplexField out = dft_forward(plan, e0);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(out[j] - cd(0.5, 0.0)) < 1e-15);
  const ComplexField back = dft_inverse(plan, out);
  CHECK((back.values() - e0.values()).norm() < 1e-15);
}

TEST_CASE("dense oracle in 1D, all sizes up to 40") {
  for (std::size_t n = 1; n <= 40; ++n) {
    CAPTURE(n);
    const DftPlan plan = DftPlan::one_dimensional(n);
    const CVector f = testing::random_cvector(n, n);
    const CVector expected = testing::dft_matrix(n) * f;
    CHECK((plan.forward(f) - expected).norm() <= 1e-12 * std::max(1.0, f.norm()));
    CHECK((plan.inverse(expected) - f).norm() <= 1e-12 * std::max(1.0, f.norm()));
  }
}

TEST_CASE("dense oracle in 2D") {
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{8, 8}, {3, 5}, {4, 6}, {1, 7}}) {
    CAPTURE(h);
    CAPTURE(w);
    const DftPlan plan = DftPlan::two_dimensional(h, w);
    const CVector f = testing::random_cvector(h * w, 11);
    CHECK((plan.forward(f) - testing::dft_matrix_2d(h, w) * f).norm() < 1e-12);
    CHECK((plan.inverse(plan.forward(f)) - f).norm() < 1e-12);
  }
}

TEST_CASE("unitarity, linearity and separability") {
  const DftPlan plan = DftPlan::one_dimensional(64);
  const CVector f = testing::random_cvector(64, 21);
  const CVector g = testing::random_cvector(64, 22);
  CHECK(std::abs(plan.forward(f).norm() - f.norm()) < 1e-12);
  CHECK(std::abs(inner(plan.forward(f), plan.forward(g)) - inner(f, g)) < 1e-12);
  const cd a(0.3, -1.2), b(2.0, 0.5);
  CHECK((plan.forward(a * f + b * g) - (a * plan.forward(f) + b * plan.forward(g))).norm() < 1e-12);

  // rows first, then columns, by hand with two 1D plans
  const std::size_t h = 4, w = 8;
  const DftPlan two = DftPlan::two_dimensional(h, w);
  const DftPlan row = DftPlan::one_dimensional(w);
  const DftPlan col = DftPlan::one_dimensional(h);
  const CVector x = testing::random_cvector(h * w, 23);
  Eigen::MatrixXcd grid(h, w);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) grid(r, c) = x[r * w + c];
  for (std::size_t r = 0; r < h; ++r) grid.row(r) = row.forward(grid.row(r).transpose()).transpose();
  for (std::size_t c = 0; c < w; ++c) grid.col(c) = col.forward(grid.col(c));
  const CVector y = two.forward(x);
  double err = 0.0;
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) err = std::max(err, std::abs(grid(r, c) - y[r * w + c]));
  CHECK(err < 1e-12);
}

TEST_CASE("size mismatch and empty plans") {
  const DftPlan plan = DftPlan::one_dimensional(8);
  CHECK_THROWS_AS(plan.forward(CVector::Zero(7)), DimensionError);
  CHECK_THROWS_AS(dft_forward(plan, ComplexField::zeros(9)), DimensionError);
  CHECK_THROWS(DftPlan::one_dimensional(0));
  CHECK(DftPlan::two_dimensional(8, 8).is_two_dimensional());
}
