#pragma once

#include <cstdint>
#include <iosfwd>

#include "genprior/field.hpp"

namespace genprior {

/// G(z) = G z + b with real orthonormal-column G (n x k, k < n) and complex
/// offset b. Immutable once constructed.
class AffineGenerator {
 public:
  AffineGenerator(Eigen::MatrixXd components, CVector offset, RVector singular_values,
                  std::optional<Layout> layout = std::nullopt);

  std::size_t n() const noexcept { return static_cast<std::size_t>(components_.rows()); }
  std::size_t k() const noexcept { return static_cast<std::size_t>(components_.cols()); }
  const Eigen::MatrixXd& components() const noexcept { return components_; }
  const CVector& offset() const noexcept { return offset_; }
  const RVector& singular_values() const noexcept { return singular_values_; }
  const std::optional<Layout>& layout() const noexcept { return layout_; }

  // Raw forms used by the solver.
  CVector generate(const CVector& z) const { return components_.cast<cd>() * z + offset_; }
  CVector linear(const CVector& z) const { return components_.cast<cd>() * z; }
  CVector linear_adjoint(const CVector& v) const { return components_.transpose().cast<cd>() * v; }

 private:
  Eigen::MatrixXd components_;
  CVector offset_;
  RVector singular_values_;
  std::optional<Layout> layout_;
};

/// PCA of the real image rows of `images` (N x n). G holds the top-k right
/// singular vectors of the centered matrix with the largest-magnitude entry
/// of each column made positive; b = `mean_offset`; singular values are
/// scaled by 1/sqrt(N - 1). Throws ConfigError when k >= n, k >= N or the
/// numerical rank of the centered data is below k.
AffineGenerator fit_pca(const Eigen::MatrixXd& images, const ComplexField& mean_offset, std::size_t k);

ComplexField generate(const AffineGenerator& gen, const LatentVector& z);

/// Least-squares latent for f: G^T (f - b).
LatentVector encode(const AffineGenerator& gen, const ComplexField& f);

/// Complex Gaussian latent with E|z_j|^2 = s_j^2 for singular value s_j.
LatentVector sample_latent(const AffineGenerator& gen, std::uint64_t seed);

/// Versioned text container: header line, "n k", optional layout, G row
/// major, b as (re, im) pairs, singular values. Values are written with 17
/// significant digits so reading back is exact.
void write_generator(const AffineGenerator& gen, std::ostream& out);
AffineGenerator read_generator(std::istream& in);

}  // namespace genprior
