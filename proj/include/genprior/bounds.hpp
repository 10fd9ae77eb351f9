#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "genprior/field.hpp"
#include "genprior/measurement.hpp"

namespace genprior {

/// An injective complex linear map standing in for A, so that its
/// bi-Lipschitz constant is exactly computable from the spectrum.
class LinearSurrogate {
 public:
  explicit LinearSurrogate(Eigen::MatrixXcd matrix);

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  double singular_min() const noexcept { return singular_min_; }
  double singular_max() const noexcept { return singular_max_; }

 private:
  Eigen::MatrixXcd matrix_;
  double singular_min_;
  double singular_max_;
};

/// Smallest alpha >= 1/sigma_min, sigma_max: max(sigma_max, 1 / sigma_min).
/// Throws DomainError when sigma_min < 1e-12 (not injective).
double bilipschitz_constant(const LinearSurrogate& s);
double bilipschitz_constant(const Eigen::MatrixXcd& m);

struct LemmaDims {
  std::size_t n = 8;
  std::size_t k = 3;
  std::size_t m = 24;
  // Per-entry standard deviation of the complex noise eps.
  double noise = 0.1;
  // Size of the component of f0 drawn independently of the generator
  // range (Lemmas 2 and 3); 0 puts f0 in the range.
  double off_range = 0.5;
};

struct BoundTrial {
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double bias = 0.0;   // ||G(z0) - f0||
  double noise = 0.0;  // ||eps||
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  bool violated = false;
  bool skipped = false;
  std::string dump;  // full instance, filled for violations only
};

struct BoundReport {
  std::string lemma;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;
  double max_slack_ratio = 0.0;  // max lhs / rhs over trials with rhs > 0
  std::vector<BoundTrial> records;
};

inline constexpr double kBoundRelTol = 1e-9;

/// ||f~ - f0|| <= 2 alpha ||eps||, f~ the least-squares solution.
BoundReport check_lemma1(std::size_t trials, std::uint64_t seed, const LemmaDims& dims = {});

/// ||G(z~) - f0|| <= (1 + 2 alpha beta gamma) ||G(z0) - f0|| + 2 beta gamma ||eps||.
BoundReport check_lemma2(std::size_t trials, std::uint64_t seed, const LemmaDims& dims = {});

/// Joint minimizer of ||A f - y||^2 + lambda^2 ||G z + b - f||^2 satisfies
/// ||f~ - f0|| <= lambda alpha ||G(z0) - f0|| + 2 alpha ||eps||.
BoundReport check_lemma3(std::size_t trials, std::uint64_t seed, const LemmaDims& dims, double lambda);

struct RatioEstimate {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

/// ||A(f) - A(f')|| / min_theta ||f - e^{i theta} f'||; nullopt when the
/// phase-quotient distance is below 1e-12.
std::optional<double> intensity_ratio(const MaskedFourierOperator& op, const CVector& f, const CVector& f_prime);

/// Min/max over seeded random pairs of ||A(f) - A(f')|| / min_theta ||f - e^{i theta} f'||.
/// An inner estimate of the bi-Lipschitz envelope, not a certificate.
RatioEstimate ratio_sample_nonlinear(const MaskedFourierOperator& op, std::size_t pairs, std::uint64_t seed);

void write_bound_csv(const BoundReport& report, std::ostream& out);

}  // namespace genprior
