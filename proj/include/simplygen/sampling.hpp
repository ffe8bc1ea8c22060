#pragma once

#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "simplygen/analysis.hpp"
#include "simplygen/discrete.hpp"
#include "simplygen/error.hpp"
#include "simplygen/exact.hpp"
#include "simplygen/rng.hpp"
#include "simplygen/trees.hpp"

namespace simplygen {

struct Allocation {
  DegreeSeq y;
  long long m = 0;

  // N_k: number of boxes holding exactly k balls.
  std::vector<std::size_t> counts() const {
    std::vector<std::size_t> c;
    for (Degree v : y) {
      if (v >= c.size()) c.resize(v + 1, 0);
      ++c[v];
    }
    return c;
  }
};

namespace detail {

// Draws j in [0, balls] with probability proportional to exp(a[j] + b[balls-j]).
inline long long draw_split(const std::vector<double>& a, const std::vector<double>& b, long long balls, Rng& rng,
                            std::vector<double>& buf) {
  const auto m = static_cast<std::size_t>(balls);
  buf.resize(m + 1);
  double mx = -kInf;
  for (std::size_t j = 0; j <= m; ++j) {
    buf[j] = a[j] + b[m - j];
    mx = std::max(mx, buf[j]);
  }
  double total = 0.0;
  for (std::size_t j = 0; j <= m; ++j) {
    total += buf[j] == -kInf ? 0.0 : std::exp(buf[j] - mx);
    buf[j] = total;
  }
  const double u = rng.uniform() * total;
  const auto it = std::upper_bound(buf.begin(), buf.end(), u);
  auto j = static_cast<long long>(it - buf.begin());
  if (j > balls) j = balls;
  // skip zero-probability slots that can only be hit through rounding
  while (j > 0 && buf[static_cast<std::size_t>(j)] == buf[static_cast<std::size_t>(j - 1)]) --j;
  return j;
}

}  // namespace detail

// Exact draw from B_{m,n} by recursive halving of the boxes.
inline Allocation sample_alloc_exact(const SplitTable& table, Rng& rng) {
  if (!table.feasible()) {
    throw Error(ErrorCode::infeasible_allocation,
                "Z(" + std::to_string(table.m()) + "," + std::to_string(table.n()) + ") = 0");
  }
  const long long n = table.n();
  const long long shift = table.working().shift;
  Allocation out;
  out.m = table.m();
  out.y.assign(static_cast<std::size_t>(n), 0);
  struct Block {
    long long offset, size, balls;
  };
  std::vector<Block> stack{{0, n, table.working_m()}};
  std::vector<double> buf;
  while (!stack.empty()) {
    const Block b = stack.back();
    stack.pop_back();
    if (b.size == 1) {
      out.y[static_cast<std::size_t>(b.offset)] = static_cast<Degree>(b.balls + shift);
      continue;
    }
    const long long lo = b.size / 2, hi = b.size - lo;
    const long long j = detail::draw_split(table.row(lo), table.row(hi), b.balls, rng, buf);
    stack.push_back({b.offset + lo, hi, b.balls - j});
    stack.push_back({b.offset, lo, j});
  }
  return out;
}

// Exact draw from B_{m,n}, box by box from the full table.
inline Allocation sample_alloc_exact(const PartitionTable& table, long long m, long long n, Rng& rng) {
  if (n < 1 || !table.positive(m, n)) {
    throw Error(ErrorCode::infeasible_allocation, "Z(" + std::to_string(m) + "," + std::to_string(n) + ") = 0");
  }
  const auto& ww = table.working();
  const long long shift = ww.shift;
  long long r = m - shift * n;
  Allocation out;
  out.m = m;
  out.y.resize(static_cast<std::size_t>(n));
  const long long kmax_w = ww.spec.finite_support() ? ww.spec.omega() : kUnbounded;
  std::vector<double> lw;
  std::vector<double> buf;
  for (long long i = 0; i < n; ++i) {
    const long long left = n - i - 1;
    if (left == 0) {
      out.y[static_cast<std::size_t>(i)] = static_cast<Degree>(r + shift);
      break;
    }
    const auto& row = table.working_row(left);
    const long long kmax = std::min(r, kmax_w);
    buf.assign(static_cast<std::size_t>(kmax + 1), -kInf);
    double mx = -kInf;
    for (long long k = 0; k <= kmax; ++k) {
      const double v = ww.spec.log_weight(k) + row[static_cast<std::size_t>(r - k)];
      buf[static_cast<std::size_t>(k)] = v;
      mx = std::max(mx, v);
    }
    double total = 0.0;
    for (auto& v : buf) {
      total += v == -kInf ? 0.0 : std::exp(v - mx);
      v = total;
    }
    const double u = rng.uniform() * total;
    auto k = static_cast<long long>(std::upper_bound(buf.begin(), buf.end(), u) - buf.begin());
    if (k > kmax) k = kmax;
    while (k > 0 && buf[static_cast<std::size_t>(k)] == buf[static_cast<std::size_t>(k - 1)]) --k;
    out.y[static_cast<std::size_t>(i)] = static_cast<Degree>(k + shift);
    r -= k;
  }
  return out;
}

// i.i.d. draws from pi conditioned on the sum, with early abort once the
// running sum passes m and a final accept step on the last box.
class RejectionSampler {
 public:
  explicit RejectionSampler(const CanonicalLaw& law) : law_(law), xi_(DiscreteSampler::offspring(law)) {
    max_log_pi_ = std::log(xi_.max_mass());
  }

  const CanonicalLaw& law() const { return law_; }

  // Rough acceptance probability per trial from the local limit theorem.
  double predicted_acceptance(long long m, long long n) const {
    if (!law_.finite_variance() || law_.sigma2 <= 0.0) return 0.0;
    const double d = static_cast<double>(law_.spec.span());
    const double nn = static_cast<double>(n);
    const double mean_gap = static_cast<double>(m) - law_.mu * nn;
    const double p = d / std::sqrt(2.0 * M_PI * law_.sigma2 * nn) *
                     std::exp(-mean_gap * mean_gap / (2.0 * law_.sigma2 * nn));
    return std::min(1.0, p / std::exp(max_log_pi_));
  }

  Allocation sample(long long m, long long n, Rng& rng, long long max_trials) const {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "need n >= 1");
    Allocation out;
    out.m = m;
    out.y.resize(static_cast<std::size_t>(n));
    for (long long trial = 0; trial < max_trials; ++trial) {
      long long s = 0;
      bool over = false;
      for (long long i = 0; i + 1 < n; ++i) {
        const long long x = xi_.sample(rng);
        s += x;
        if (s > m) {
          over = true;
          break;
        }
        out.y[static_cast<std::size_t>(i)] = static_cast<Degree>(x);
      }
      if (over) continue;
      const long long last = m - s;
      const double lp = law_.log_pi(last);
      if (lp == -kInf) continue;
      if (rng.uniform() < std::exp(lp - max_log_pi_)) {
        out.y[static_cast<std::size_t>(n - 1)] = static_cast<Degree>(last);
        return out;
      }
    }
    throw Error(ErrorCode::acceptance_too_low,
                "no acceptance in " + std::to_string(max_trials) + " trials; use the exact sampler");
  }

 private:
  CanonicalLaw law_;
  DiscreteSampler xi_;
  double max_log_pi_ = 0.0;
};

inline Allocation sample_alloc_rejection(const CanonicalLaw& law, long long m, long long n, Rng& rng,
                                         long long max_trials) {
  return RejectionSampler(law).sample(m, n, rng, max_trials);
}

// The unique cyclic shift of an allocation of n-1 balls in n boxes that is a
// depth-first degree sequence: start just after the first position where the
// partial sums of (y_i - 1) reach their overall minimum.
inline OrderedTree alloc_to_tree(const DegreeSeq& y) {
  const std::size_t n = y.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "empty allocation");
  long long total = 0;
  for (Degree v : y) total += v;
  if (total != static_cast<long long>(n) - 1) {
    throw Error(ErrorCode::invalid_argument,
                "allocation holds " + std::to_string(total) + " balls, need n-1 = " + std::to_string(n - 1));
  }
  long long sum = 0, best = 0;
  std::size_t start = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    sum += static_cast<long long>(y[j - 1]) - 1;
    if (sum < best) {
      best = sum;
      start = j;
    }
  }
  start %= n;
  DegreeSeq d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = y[(start + i) % n];
  return OrderedTree::trusted(std::move(d));
}

inline OrderedTree alloc_to_tree(const Allocation& a) { return alloc_to_tree(a.y); }

enum class Strategy { exact, rejection, automatic };

inline std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::exact: return "exact";
    case Strategy::rejection: return "rejection";
    case Strategy::automatic: return "auto";
  }
  return "?";
}

inline Strategy parse_strategy(std::string_view s) {
  if (s == "exact") return Strategy::exact;
  if (s == "rejection") return Strategy::rejection;
  if (s == "auto") return Strategy::automatic;
  throw Error(ErrorCode::parse_error, "unknown strategy '" + std::string(s) + "'");
}

inline constexpr double kAutoAcceptance = 1e-5;
inline constexpr long long kCaseThreeExactCap = 2000;

// Draws B_{m,n} repeatedly; precomputes the split table or the alias table once.
class AllocSampler {
 public:
  AllocSampler(const WeightSpec& spec, long long m, long long n, Strategy strategy = Strategy::automatic)
      : m_(m), n_(n) {
    if (n < 1 || m < 0) throw Error(ErrorCode::invalid_argument, "need n >= 1 and m >= 0");
    if (!feasible(spec, m, n)) {
      throw Error(ErrorCode::infeasible_allocation, "Z(" + std::to_string(m) + "," + std::to_string(n) + ") = 0");
    }
    const bool rho_zero = spec.rho_known() && spec.rho() == 0.0;
    std::optional<CanonicalLaw> law;
    if (strategy != Strategy::exact && !rho_zero) {
      try {
        law = canonical_law(spec, static_cast<double>(m) / static_cast<double>(n));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::capacity_exceeded) throw;
      }
    }
    if (law) {
      auto rej = std::make_shared<RejectionSampler>(*law);
      const double acc = rej->predicted_acceptance(m, n);
      if (strategy == Strategy::rejection || acc >= kAutoAcceptance) {
        rejection_ = rej;
        max_trials_ = acc > 0.0 ? static_cast<long long>(std::min(1e12, 1000.0 / acc)) + 1000000 : 100000000;
        strategy_ = Strategy::rejection;
        return;
      }
    }
    if (strategy == Strategy::rejection) {
      throw Error(ErrorCode::acceptance_too_low, "rejection sampling is unavailable when rho = 0");
    }
    split_ = std::make_shared<SplitTable>(spec, m, n);
    strategy_ = Strategy::exact;
  }

  Strategy strategy() const { return strategy_; }
  long long m() const { return m_; }
  long long n() const { return n_; }

  Allocation sample(Rng& rng) const {
    if (rejection_) return rejection_->sample(m_, n_, rng, max_trials_);
    return sample_alloc_exact(*split_, rng);
  }

 private:
  long long m_, n_;
  Strategy strategy_ = Strategy::exact;
  std::shared_ptr<RejectionSampler> rejection_;
  std::shared_ptr<SplitTable> split_;
  long long max_trials_ = 0;
};

// Simply generated tree T_n: an allocation of n-1 balls in n boxes mapped
// through the cycle lemma.
class TreeSampler {
 public:
  TreeSampler(const WeightSpec& spec, long long n, Strategy strategy = Strategy::automatic) : n_(n) {
    if (n < 1) throw Error(ErrorCode::invalid_argument, "tree size must be >= 1");
    require_tree_mode(spec);
    if (n == 1) return;
    const bool rho_zero = spec.rho_known() && spec.rho() == 0.0;
    if (rho_zero && n > kCaseThreeExactCap) {
      throw Error(ErrorCode::capacity_exceeded,
                  "exact sampling with rho = 0 is capped at n <= " + std::to_string(kCaseThreeExactCap));
    }
    if (strategy == Strategy::automatic) {
      // rejection only when the variance is finite and (n-1)/n <= nu
      const double lambda = static_cast<double>(n - 1) / static_cast<double>(n);
      if (!rho_zero) {
        const auto law = canonical_law(spec, lambda);
        if (!law.finite_variance() || lambda > law.nu) strategy = Strategy::exact;
      } else {
        strategy = Strategy::exact;
      }
    }
    alloc_ = std::make_shared<AllocSampler>(spec, n - 1, n, strategy);
  }

  Strategy strategy() const { return alloc_ ? alloc_->strategy() : Strategy::exact; }

  OrderedTree sample(Rng& rng) const {
    if (!alloc_) return OrderedTree::trusted({0});
    return alloc_to_tree(alloc_->sample(rng).y);
  }

 private:
  long long n_;
  std::shared_ptr<AllocSampler> alloc_;
};

inline OrderedTree sample_tree(const WeightSpec& spec, long long n, Rng& rng,
                               Strategy strategy = Strategy::automatic) {
  return TreeSampler(spec, n, strategy).sample(rng);
}

inline constexpr std::size_t kDefaultNodeBudget = 10000000;

struct GwResult {
  std::optional<OrderedTree> tree;  // empty when the budget ran out
  std::size_t nodes = 0;
  bool budget_exceeded() const { return !tree.has_value(); }
};

// Galton-Watson family tree generated depth first.
inline GwResult sample_gw(const DiscreteSampler& xi, Rng& rng, std::size_t node_budget = kDefaultNodeBudget) {
  DegreeSeq d;
  long long pending = 1;
  while (pending > 0) {
    if (d.size() >= node_budget) return GwResult{std::nullopt, d.size()};
    const long long x = xi.sample(rng);
    if (x == kInfiniteDraw) return GwResult{std::nullopt, d.size()};
    d.push_back(static_cast<Degree>(x));
    pending += x - 1;
  }
  const std::size_t n = d.size();
  return GwResult{OrderedTree::trusted(std::move(d)), n};
}

// Offspring, spine and size-biased laws for the limit trees.
struct KestenSpec {
  double mu = 1.0;
  DiscreteSampler offspring;
  std::optional<DiscreteSampler> hat;   // k pi_k, atom 1 - mu at infinity; needs mu <= 1
  std::optional<DiscreteSampler> star;  // k pi_k / mu; needs mu > 0

  static KestenSpec from_law(const CanonicalLaw& law) {
    KestenSpec k{law.mu, DiscreteSampler::offspring(law), std::nullopt, std::nullopt};
    if (law.mu == 0.0) {
      k.hat = DiscreteSampler::from_pmf_with_infinity({}, 1.0);
      return k;
    }
    if (law.mu <= 1.0 + 1e-12) k.hat = DiscreteSampler::size_biased(law, true);
    k.star = DiscreteSampler::size_biased(law, false);
    return k;
  }

  // Finitely supported offspring law p_0..p_K.
  static KestenSpec from_pmf(const std::vector<double>& p) {
    double mu = 0.0;
    std::vector<double> sb(p.size(), 0.0);
    for (std::size_t k = 0; k < p.size(); ++k) {
      mu += static_cast<double>(k) * p[k];
      sb[k] = static_cast<double>(k) * p[k];
    }
    KestenSpec ks{mu, DiscreteSampler::from_pmf(p), std::nullopt, std::nullopt};
    if (mu <= 1.0 + 1e-12) ks.hat = DiscreteSampler::from_pmf_with_infinity(sb, std::max(0.0, 1.0 - mu));
    if (mu > 0.0) ks.star = DiscreteSampler::from_pmf(sb);
    return ks;
  }
};

struct BallSample {
  OrderedTree tree;
  bool exploded = false;          // spine ended in a node of infinite degree
  std::size_t explosion_depth = 0;
  bool budget_exceeded = false;
};

namespace detail {

inline BallSample sample_spine_ball(const KestenSpec& ks, const DiscreteSampler& spine, std::size_t m, Rng& rng,
                                    std::size_t node_budget) {
  BallSample out;
  DegreeSeq d;
  struct Frame {
    std::size_t depth;
    std::size_t degree;
    std::size_t next;
    std::size_t special;  // 1-based index of the spine child, 0 if none
  };
  std::vector<Frame> stack;
  auto emit = [&](bool special, std::size_t depth) {
    if (depth == m) {
      d.push_back(0);
      return;
    }
    std::size_t deg = 0, sp = 0;
    if (special) {
      const long long x = spine.sample(rng);
      if (x == kInfiniteDraw) {
        out.exploded = true;
        out.explosion_depth = depth;
        deg = m;
      } else {
        const auto k = static_cast<std::size_t>(x);
        deg = std::min(k, m);
        if (k > 0) {
          const std::size_t j = 1 + static_cast<std::size_t>(rng.below(k));
          sp = j <= m ? j : 0;
        }
      }
    } else {
      deg = std::min(static_cast<std::size_t>(ks.offspring.sample(rng)), m);
    }
    d.push_back(static_cast<Degree>(deg));
    if (deg > 0) stack.push_back({depth, deg, 0, sp});
  };
  emit(true, 0);
  while (!stack.empty()) {
    if (d.size() > node_budget) {
      out.budget_exceeded = true;
      return out;
    }
    Frame& f = stack.back();
    if (f.next == f.degree) {
      stack.pop_back();
      continue;
    }
    ++f.next;
    const bool special = f.next == f.special;
    const std::size_t depth = f.depth + 1;
    emit(special, depth);
  }
  out.tree = OrderedTree::trusted(std::move(d));
  return out;
}

}  // namespace detail

// Left ball of radius m of the limit tree with spine law xi-hat.
inline BallSample sample_kesten_ball(const KestenSpec& ks, std::size_t m, Rng& rng,
                                     std::size_t node_budget = kDefaultNodeBudget) {
  if (!ks.hat) throw Error(ErrorCode::invalid_argument, "limit tree needs mu <= 1");
  return detail::sample_spine_ball(ks, *ks.hat, m, rng, node_budget);
}

// Left ball of the size-biased tree, whose spine never ends.
inline BallSample sample_size_biased_ball(const KestenSpec& ks, std::size_t m, Rng& rng,
                                          std::size_t node_budget = kDefaultNodeBudget) {
  if (!ks.star) throw Error(ErrorCode::invalid_argument, "size-biased tree needs mu > 0");
  return detail::sample_spine_ball(ks, *ks.star, m, rng, node_budget);
}

// Tree-size weights Z_1..Z_K of a spec (Z_0 = 0), as logarithms.
inline std::vector<double> log_tree_counts(const WeightSpec& spec, long long K) {
  std::vector<double> out(static_cast<std::size_t>(K + 1), -kInf);
  if (K < 1) return out;
  const auto table = build_table(spec, K - 1, K);
  for (long long k = 1; k <= K; ++k) out[static_cast<std::size_t>(k)] = z_tree(table, k).log_value;
  return out;
}

// Cuts a forest degree sequence (sum m - n over m entries, one rotation that
// is a concatenation of n trees) into its trees.
inline std::vector<OrderedTree> split_forest(const DegreeSeq& d) {
  std::vector<OrderedTree> trees;
  std::size_t begin = 0;
  long long pending = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    pending += (i == begin ? 1 : 0) + static_cast<long long>(d[i]) - 1;
    if (pending == 0) {
      trees.push_back(OrderedTree::trusted(DegreeSeq(d.begin() + static_cast<std::ptrdiff_t>(begin),
                                                      d.begin() + static_cast<std::ptrdiff_t>(i + 1))));
      begin = i + 1;
    }
  }
  if (begin != d.size()) throw Error(ErrorCode::invalid_argument, "sequence does not close into trees");
  return trees;
}

// Start offsets of the rotations of y (sum m - n over m boxes) that read as n
// trees in depth-first order; there are exactly n of them.
inline std::vector<std::size_t> forest_rotations(const DegreeSeq& y) {
  const std::size_t m = y.size();
  if (m <= 1) return std::vector<std::size_t>(m, 0);
  // partial sums of (y_i - 1) over two periods
  std::vector<long long> s(2 * m + 1, 0);
  for (std::size_t i = 0; i < 2 * m; ++i) s[i + 1] = s[i] + static_cast<long long>(y[i % m]) - 1;
  // start r is valid iff s[r+m] < s[t] for all r < t < r+m; sliding minimum
  std::vector<std::size_t> out;
  std::deque<std::size_t> window;
  for (std::size_t t = 1; t < 2 * m; ++t) {
    while (!window.empty() && s[window.back()] >= s[t]) window.pop_back();
    window.push_back(t);
    if (t + 1 < m) continue;
    const std::size_t r = t + 1 - m;  // window is (r, r+m)
    while (window.front() <= r) window.pop_front();
    if (r < m && s[r + m] < s[window.front()]) out.push_back(r);
  }
  return out;
}

// n trees with m nodes in total, drawn with probability proportional to the
// product of node weights: an allocation of m - n balls in m boxes, rotated
// to a uniformly chosen one of its n forest readings and cut into trees.
// The tree sizes then follow the allocation with weights Z_k.
class ForestSampler {
 public:
  ForestSampler(const WeightSpec& spec, long long m, long long n, Strategy strategy = Strategy::automatic)
      : n_(n) {
    if (n < 1 || m < n) {
      throw Error(ErrorCode::infeasible_allocation, "forest needs m >= n >= 1");
    }
    require_tree_mode(spec);
    if (m > n) alloc_ = std::make_shared<AllocSampler>(spec, m - n, m, strategy);
  }

  Strategy strategy() const { return alloc_ ? alloc_->strategy() : Strategy::exact; }

  std::vector<OrderedTree> sample(Rng& rng) const {
    if (!alloc_) return std::vector<OrderedTree>(static_cast<std::size_t>(n_), OrderedTree::trusted({0}));
    const auto y = alloc_->sample(rng).y;
    const auto starts = forest_rotations(y);
    if (starts.size() != static_cast<std::size_t>(n_)) {
      throw Error(ErrorCode::invalid_argument, "cycle lemma violated: " + std::to_string(starts.size()) + " rotations");
    }
    const std::size_t r = starts[rng.below(starts.size())];
    DegreeSeq d(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) d[i] = y[(r + i) % y.size()];
    return split_forest(d);
  }

 private:
  long long n_;
  std::shared_ptr<AllocSampler> alloc_;
};

inline std::vector<OrderedTree> sample_forest(const WeightSpec& spec, long long m, long long n, Rng& rng) {
  ForestSampler f(spec, m, n);
  return f.sample(rng);
}

}  // namespace simplygen
