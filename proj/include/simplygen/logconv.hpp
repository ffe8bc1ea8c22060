#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace simplygen {

// Fixed-length bitset with shift-or, used for exact positivity of convolutions.
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return size_; }
  bool test(std::size_t i) const { return i < size_ && ((words_[i >> 6] >> (i & 63)) & 1u); }
  void set(std::size_t i) {
    if (i < size_) words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }

  // this |= src << shift, truncated to size().
  void or_shifted(const BitRow& src, std::size_t shift) {
    const std::size_t ws = shift >> 6, bs = shift & 63;
    const std::size_t nw = words_.size();
    for (std::size_t i = 0; i < src.words_.size() && i + ws < nw; ++i) {
      const std::uint64_t v = src.words_[i];
      if (v == 0) continue;
      words_[i + ws] |= v << bs;
      if (bs != 0 && i + ws + 1 < nw) words_[i + ws + 1] |= v >> (64 - bs);
    }
    trim();
  }

  // Positivity pattern of the convolution of two nonnegative rows.
  static BitRow convolve(const BitRow& a, const BitRow& b, std::size_t out_len) {
    BitRow out(out_len);
    const BitRow& sparse = a.count() <= b.count() ? a : b;
    const BitRow& dense = &sparse == &a ? b : a;
    for (std::size_t i = 0; i < sparse.size_ && i < out_len; ++i) {
      if (sparse.test(i)) out.or_shifted(dense, i);
    }
    return out;
  }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

namespace detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log sum_j exp(a[j] + b[i-j]) by direct log-sum-exp.
inline double log_convolve_entry(const std::vector<double>& a, const std::vector<double>& b, std::size_t i) {
  double mx = kNegInf;
  const std::size_t lo = i >= b.size() ? i - b.size() + 1 : 0;
  const std::size_t hi = std::min(i, a.size() - 1);
  for (std::size_t j = lo; j <= hi; ++j) mx = std::max(mx, a[j] + b[i - j]);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) s += std::exp(a[j] + b[i - j] - mx);
  return mx + std::log(s);
}

}  // namespace detail

// c[i] = log sum_j exp(a[j] + b[i-j]) for i < out_len.
// Inputs are split into blocks that each carry their own scale, so rows
// spanning thousands of orders of magnitude convolve without underflow.
// When `positive` is given, entries it marks positive that still came out
// as -inf are recomputed exactly.
inline std::vector<double> log_convolve(const std::vector<double>& a, const std::vector<double>& b,
                                        std::size_t out_len, const BitRow* positive = nullptr) {
  constexpr std::size_t B = 64;
  using detail::kNegInf;
  std::vector<double> out(out_len, kNegInf);
  const std::size_t na = std::min(a.size(), out_len), nb = std::min(b.size(), out_len);
  if (na == 0 || nb == 0) return out;

  auto blocks = [](const std::vector<double>& x, std::size_t n, std::vector<double>& mant,
                   std::vector<double>& scale) {
    const std::size_t nblk = (n + B - 1) / B;
    mant.assign(nblk * B, 0.0);
    scale.assign(nblk, kNegInf);
    for (std::size_t p = 0; p < nblk; ++p) {
      const std::size_t end = std::min(n, (p + 1) * B);
      double mx = kNegInf;
      for (std::size_t j = p * B; j < end; ++j) mx = std::max(mx, x[j]);
      scale[p] = mx;
      if (mx == kNegInf) continue;
      for (std::size_t j = p * B; j < end; ++j) mant[j] = x[j] == kNegInf ? 0.0 : std::exp(x[j] - mx);
    }
  };
  std::vector<double> am, as, bm, bs;
  blocks(a, na, am, as);
  blocks(b, nb, bm, bs);

  std::vector<double> acc_scale(out_len, kNegInf), acc_sum(out_len, 0.0);
  double temp[2 * B];
  for (std::size_t p = 0; p < as.size(); ++p) {
    if (as[p] == kNegInf) continue;
    for (std::size_t q = 0; q < bs.size(); ++q) {
      const std::size_t base = (p + q) * B;
      if (base >= out_len) break;
      if (bs[q] == kNegInf) continue;
      std::fill(std::begin(temp), std::end(temp), 0.0);
      const double* ap = &am[p * B];
      const double* bp = &bm[q * B];
      for (std::size_t j = 0; j < B; ++j) {
        const double aj = ap[j];
        if (aj == 0.0) continue;
        double* t = temp + j;
        for (std::size_t k = 0; k < B; ++k) t[k] += aj * bp[k];
      }
      const double s = as[p] + bs[q];
      const std::size_t lim = std::min<std::size_t>(2 * B - 1, out_len - base);
      for (std::size_t r = 0; r < lim; ++r) {
        const double v = temp[r];
        if (v <= 0.0) continue;
        const std::size_t idx = base + r;
        if (s > acc_scale[idx]) {
          acc_sum[idx] = acc_sum[idx] * std::exp(acc_scale[idx] - s) + v;
          acc_scale[idx] = s;
        } else {
          acc_sum[idx] += v * std::exp(s - acc_scale[idx]);
        }
      }
    }
  }
  for (std::size_t i = 0; i < out_len; ++i) {
    if (acc_sum[i] > 0.0) out[i] = acc_scale[i] + std::log(acc_sum[i]);
  }
  if (positive) {
    for (std::size_t i = 0; i < out_len; ++i) {
      if (out[i] == kNegInf && positive->test(i)) out[i] = detail::log_convolve_entry(a, b, i);
    }
  }
  return out;
}

}  // namespace simplygen
