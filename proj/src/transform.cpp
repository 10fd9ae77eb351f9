#include "genprior/transform.hpp"

#include <cmath>
#include <numbers>

namespace genprior {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t smallest_factor(std::size_t n) {
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return p;
  }
  return n;
}

}  // namespace

Fft1d::Fft1d(std::size_t n) : n_(n), pow2_(is_pow2(n)), twiddle_(n) {
  if (n == 0) throw DimensionError("Fft1d: length must be at least 1");
  for (std::size_t j = 0; j < n; ++j) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = cd(std::cos(angle), std::sin(angle));
  }
  if (pow2_) {
    bitrev_.resize(n);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) {
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
      }
      bitrev_[i] = r;
    }
  }
}

void Fft1d::run(std::span<cd> data, int sign) const {
  require_same_size(data.size(), n_, "Fft1d");
  if (n_ == 1) return;
  if (pow2_) {
    radix2(data, sign);
    return;
  }
  std::vector<cd> out(n_);
  mixed(data.data(), 1, out.data(), n_, sign);
  std::copy(out.begin(), out.end(), data.begin());
}

void Fft1d::radix2(std::span<cd> a, int sign) const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        cd w = twiddle_[j * step];
        if (sign > 0) w = std::conj(w);
        const cd u = a[start + j];
        const cd v = a[start + j + half] * w;
        a[start + j] = u + v;
        a[start + j + half] = u - v;
      }
    }
  }
}

// Out-of-place decimation in time over the smallest prime factor p of n:
// the p interleaved subsequences are transformed recursively into
// contiguous blocks of `out`, then recombined in place one frequency at a time.
void Fft1d::mixed(const cd* in, std::size_t stride, cd* out, std::size_t n, int sign) const {
  const std::size_t tw_step = n_ / n;
  auto tw = [&](std::size_t e) {
    const cd w = twiddle_[(e % n) * tw_step];
    return sign > 0 ? std::conj(w) : w;
  };
  if (n == 1) {
    out[0] = in[0];
    return;
  }
  const std::size_t p = smallest_factor(n);
  if (p == n) {
    for (std::size_t k = 0; k < n; ++k) {
      cd acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += in[j * stride] * tw(j * k);
      out[k] = acc;
    }
    return;
  }
  const std::size_t m = n / p;
  for (std::size_t r = 0; r < p; ++r) mixed(in + r * stride, stride * p, out + r * m, m, sign);
  std::vector<cd> tmp(p);
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t r = 0; r < p; ++r) tmp[r] = out[r * m + k];
    for (std::size_t q = 0; q < p; ++q) {
      const std::size_t freq = k + q * m;
      cd acc = 0.0;
      for (std::size_t r = 0; r < p; ++r) acc += tmp[r] * tw(r * freq);
      out[q * m + k] = acc;
    }
  }
}

DftPlan::DftPlan(std::optional<Fft1d> rows, Fft1d cols)
    : rows_(std::move(rows)), cols_(std::move(cols)) {
  size_ = cols_.size() * (rows_ ? rows_->size() : 1);
  scale_ = 1.0 / std::sqrt(static_cast<double>(size_));
}

DftPlan DftPlan::one_dimensional(std::size_t n) { return DftPlan(std::nullopt, Fft1d(n)); }

DftPlan DftPlan::two_dimensional(std::size_t height, std::size_t width) {
  return DftPlan(Fft1d(height), Fft1d(width));
}

void DftPlan::transform(std::span<cd> data, int sign) const {
  require_same_size(data.size(), size_, "DftPlan");
  const std::size_t w = cols_.size();
  const std::size_t h = height();
  for (std::size_t r = 0; r < h; ++r) cols_.run(data.subspan(r * w, w), sign);
  if (rows_) {
    thread_local std::vector<cd> column;
    column.resize(h);
    for (std::size_t c = 0; c < w; ++c) {
      for (std::size_t r = 0; r < h; ++r) column[r] = data[r * w + c];
      rows_->run(column, sign);
      for (std::size_t r = 0; r < h; ++r) data[r * w + c] = column[r];
    }
  }
  for (cd& v : data) v *= scale_;
}

void DftPlan::forward_inplace(std::span<cd> data) const { transform(data, -1); }
void DftPlan::inverse_inplace(std::span<cd> data) const { transform(data, +1); }

CVector DftPlan::forward(const CVector& f) const {
  CVector out = f;
  forward_inplace({out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

CVector DftPlan::inverse(const CVector& g) const {
  CVector out = g;
  inverse_inplace({out.data(), static_cast<std::size_t>(out.size())});
  return out;
}

ComplexField dft_forward(const DftPlan& plan, const ComplexField& f) {
  return ComplexField(plan.forward(f.values()), f.layout());
}

ComplexField dft_inverse(const DftPlan& plan, const ComplexField& g) {
  return ComplexField(plan.inverse(g.values()), g.layout());
}

}  // namespace genprior
