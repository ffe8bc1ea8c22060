#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "simplygen/error.hpp"

namespace simplygen {

inline constexpr double kNormTol = 1e-9;

// pmf on {0, 1, ...} with an optional atom at infinity.
struct Pmf {
  std::vector<double> p;
  double infinity = 0.0;

  double at(std::size_t k) const { return k < p.size() ? p[k] : 0.0; }
  double total() const {
    double s = infinity;
    for (double x : p) s += x;
    return s;
  }
};

inline void check_normalized(const Pmf& p, const char* which) {
  for (double x : p.p) {
    if (!(x >= 0.0)) throw Error(ErrorCode::invalid_argument, std::string(which) + " has a negative mass");
  }
  if (!(p.infinity >= 0.0) || std::abs(p.total() - 1.0) > kNormTol) {
    throw Error(ErrorCode::invalid_argument,
                std::string(which) + " is not normalized (total " + std::to_string(p.total()) + ")");
  }
}

inline Pmf empirical_pmf(const std::vector<std::uint64_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  Pmf out;
  out.p.resize(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) out.p[k] = static_cast<double>(counts[k]) / total;
  return out;
}

// sup_x |P(X <= x) - P(Y <= x)|
inline double dist_kolmogorov(const Pmf& a, const Pmf& b) {
  check_normalized(a, "first pmf");
  check_normalized(b, "second pmf");
  const std::size_t K = std::max(a.p.size(), b.p.size());
  double fa = 0.0, fb = 0.0, best = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    fa += a.at(k);
    fb += b.at(k);
    best = std::max(best, std::abs(fa - fb));
  }
  // the finite parts may not reach 1 when there is mass at infinity
  return std::min(1.0, best);
}

// Half the l1 distance, atoms at infinity included.
inline double dist_tv(const Pmf& a, const Pmf& b) {
  check_normalized(a, "first pmf");
  check_normalized(b, "second pmf");
  const std::size_t K = std::max(a.p.size(), b.p.size());
  double s = std::abs(a.infinity - b.infinity);
  for (std::size_t k = 0; k < K; ++k) s += std::abs(a.at(k) - b.at(k));
  return std::min(1.0, 0.5 * s);
}

// sup_x |P(X <= x) - P(Y <= x)| / (1 + x); admits mass at infinity.
inline double dist_kolmogorov_mod(const Pmf& a, const Pmf& b) {
  check_normalized(a, "first pmf");
  check_normalized(b, "second pmf");
  const std::size_t K = std::max(a.p.size(), b.p.size());
  double fa = 0.0, fb = 0.0, best = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    fa += a.at(k);
    fb += b.at(k);
    best = std::max(best, std::abs(fa - fb) / (1.0 + static_cast<double>(k)));
  }
  return std::min(1.0, best);
}

// TV distance between two histograms over arbitrary keys.
template <class Key>
double dist_tv_counts(const std::map<Key, std::uint64_t>& a, const std::map<Key, std::uint64_t>& b) {
  double na = 0.0, nb = 0.0;
  for (const auto& [k, c] : a) na += static_cast<double>(c);
  for (const auto& [k, c] : b) nb += static_cast<double>(c);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::invalid_argument, "empty histogram");
  double s = 0.0;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    s += std::abs(static_cast<double>(c) / na - (it == b.end() ? 0.0 : static_cast<double>(it->second) / nb));
  }
  for (const auto& [k, c] : b) {
    if (!a.count(k)) s += static_cast<double>(c) / nb;
  }
  return 0.5 * s;
}

// Kolmogorov distance between the empirical law of integer samples and a
// CDF F on the integers, over every integer where either side moves.
inline double dist_kolmogorov_cdf(std::vector<long long> samples, const std::function<double(long long)>& F) {
  if (samples.empty()) throw Error(ErrorCode::invalid_argument, "no samples");
  std::sort(samples.begin(), samples.end());
  const double R = static_cast<double>(samples.size());
  long long lo = samples.front() - 1, hi = samples.back();
  while (F(lo) > 1e-12 && lo > samples.front() - 100000) --lo;
  while (1.0 - F(hi) > 1e-12 && hi < samples.back() + 100000) ++hi;
  double best = std::max(F(lo - 1), 1.0 - F(hi));
  std::size_t idx = 0;
  for (long long k = lo; k <= hi; ++k) {
    while (idx < samples.size() && samples[idx] <= k) ++idx;
    best = std::max(best, std::abs(static_cast<double>(idx) / R - F(k)));
  }
  return best;
}

struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Pearson goodness of fit; cells with expected count below min_expected are pooled.
inline ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& probs,
                            double min_expected = 5.0) {
  if (observed.size() != probs.size()) throw Error(ErrorCode::invalid_argument, "cell count mismatch");
  double total = 0.0;
  for (double o : observed) total += o;
  std::vector<std::pair<double, double>> cells;  // (observed, expected)
  double pool_o = 0.0, pool_e = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = probs[i] * total;
    if (e < min_expected) {
      pool_o += observed[i];
      pool_e += e;
    } else {
      cells.emplace_back(observed[i], e);
    }
  }
  if (pool_e > 0.0) cells.emplace_back(pool_o, pool_e);
  ChiSquare out;
  for (const auto& [o, e] : cells) {
    if (e > 0.0) out.statistic += (o - e) * (o - e) / e;
    else if (o > 0.0) out.statistic = INFINITY;
  }
  out.dof = static_cast<double>(cells.size()) - 1.0;
  if (out.dof < 1.0) return out;
  if (!std::isfinite(out.statistic)) {
    out.p_value = 0.0;
    return out;
  }
  out.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(out.dof), out.statistic));
  return out;
}

}  // namespace simplygen
