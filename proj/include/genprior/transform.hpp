#pragma once

#include <span>
#include <vector>

#include "genprior/field.hpp"

namespace genprior {

/// Unnormalized 1D DFT of a fixed length. Power-of-two lengths use an
/// iterative radix-2 kernel, other composite lengths a recursive mixed-radix
/// split, and prime lengths a direct O(n^2) sum over a twiddle table.
class Fft1d {
 public:
  explicit Fft1d(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  // In place, sign -1 (forward) or +1 (inverse); no scaling.
  void run(std::span<cd> data, int sign) const;

 private:
  void radix2(std::span<cd> data, int sign) const;
  void mixed(const cd* in, std::size_t stride, cd* out, std::size_t n, int sign) const;

  std::size_t n_;
  bool pow2_;
  std::vector<cd> twiddle_;  // e^{-2 pi i j / n}, j < n
  std::vector<std::size_t> bitrev_;
};

/// Unitary DFT in one dimension (length n) or two dimensions (h x w,
/// row-major). Immutable after construction; calls are reentrant.
class DftPlan {
 public:
  static DftPlan one_dimensional(std::size_t n);
  static DftPlan two_dimensional(std::size_t height, std::size_t width);

  std::size_t size() const noexcept { return size_; }
  bool is_two_dimensional() const noexcept { return rows_.has_value(); }
  std::size_t height() const noexcept { return rows_ ? rows_->size() : 1; }
  std::size_t width() const noexcept { return cols_.size(); }

  void forward_inplace(std::span<cd> data) const;
  void inverse_inplace(std::span<cd> data) const;

  CVector forward(const CVector& f) const;
  CVector inverse(const CVector& g) const;

 private:
  DftPlan(std::optional<Fft1d> rows, Fft1d cols);
  void transform(std::span<cd> data, int sign) const;

  // `cols_` transforms along a row (length w); `rows_` along a column
  // (length h). A 1D plan has no `rows_`.
  std::optional<Fft1d> rows_;
  Fft1d cols_;
  std::size_t size_;
  double scale_;
};

ComplexField dft_forward(const DftPlan& plan, const ComplexField& f);
ComplexField dft_inverse(const DftPlan& plan, const ComplexField& g);

}  // namespace genprior
