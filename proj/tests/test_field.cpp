#include <doctest.h>

#include "genprior/field.hpp"
#include "support.hpp"

using namespace genprior;

TEST_CASE("inner product basics") {
  const CVector f = (CVector(2) << 1.0, cd(0, 1)).finished();
  CHECK(inner(f, f) == cd(2.0, 0.0));
  const CVector e0 = (CVector(2) << 1.0, 0.0).finished();
  const CVector e1 = (CVector(2) << 0.0, 1.0).finished();
  CHECK(inner(e0, e1) == cd(0.0, 0.0));

  const CVector a = testing::random_cvector(16, 1);
  const CVector b = testing::random_cvector(16, 2);
  CHECK(std::abs(inner(a, b) - std::conj(inner(b, a))) < 1e-12);
  // linear in the first slot
  CHECK(std::abs(inner(cd(0, 2) * a, b) - cd(0, 2) * inner(a, b)) < 1e-12);
}

TEST_CASE("field construction validates") {
  CHECK_THROWS_AS(ComplexField(CVector(0)), DimensionError);
  CVector bad = CVector::Ones(4);
  bad[2] = cd(std::nan(""), 0.0);
  CHECK_THROWS_AS(ComplexField{bad}, DomainError);
  CHECK_THROWS_AS(ComplexField(CVector::Ones(6), Layout{2, 2}), DimensionError);
  const ComplexField f(CVector::Ones(6), Layout{2, 3});
  CHECK(f.layout()->width == 3);
  CHECK(ComplexField::zeros(5).norm() == 0.0);
}

TEST_CASE("phase alignment") {
  const ComplexField ref(testing::random_cvector(64, 3));
  auto same = align_global_phase(ref, ref);
  CHECK(same.theta == doctest::Approx(0.0));
  CHECK((same.aligned.values() - ref.values()).norm() < 1e-12);

  auto rotated = align_global_phase(ComplexField(cd(0, 1) * ref.values()), ref);
  CHECK(std::remainder(rotated.theta + std::numbers::pi / 2, 2 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK((rotated.aligned.values() - ref.values()).norm() < 1e-12);

  const ComplexField cand(testing::random_cvector(64, 4));
  auto a = align_global_phase(cand, ref);
  CHECK(a.aligned.norm() == doctest::Approx(cand.norm()));
  CHECK((a.aligned.values() - ref.values()).norm() <=
        testing::grid_phase_distance(cand.values(), ref.values(), 10000) + 1e-6);
  CHECK(std::abs(inner(a.aligned, ref).imag()) < 1e-10);

  // orthogonal inputs keep theta = 0
  const CVector e0 = (CVector(2) << 1.0, 0.0).finished();
  const CVector e1 = (CVector(2) << 0.0, 1.0).finished();
  CHECK(align_global_phase(ComplexField(e0), ComplexField(e1)).theta == 0.0);
  CHECK_THROWS_AS(align_global_phase(ComplexField(e0), ComplexField::zeros(2)), DomainError);
  CHECK_THROWS_AS(align_global_phase(ComplexField(e0), ComplexField(CVector::Ones(3))), DimensionError);
}

TEST_CASE("relative reconstruction error") {
  const CVector ref = testing::random_cvector(64, 5);
  CHECK(rre(std::polar(1.0, 1.234) * ref, ref) < 1e-12);
  CHECK(rre(CVector::Zero(64), ref) == doctest::Approx(1.0));

  const CVector cand = testing::random_cvector(64, 6);
  CHECK(rre(cand, ref) == doctest::Approx(testing::grid_phase_distance(cand, ref, 10000) / ref.norm()).epsilon(1e-6));
  CHECK(std::abs(rre(std::polar(1.0, 0.7) * cand, std::polar(1.0, -2.1) * ref) - rre(cand, ref)) < 1e-12);
  CHECK(rre(cand, ref) <= (cand - ref).norm() / ref.norm());
  CHECK_THROWS_AS(rre(cand, CVector::Zero(64)), DomainError);
}
