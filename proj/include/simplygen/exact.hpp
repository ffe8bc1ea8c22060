#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "simplygen/analysis.hpp"
#include "simplygen/error.hpp"
#include "simplygen/logconv.hpp"
#include "simplygen/rational.hpp"
#include "simplygen/trees.hpp"
#include "simplygen/weights.hpp"

namespace simplygen {

enum class TableMode { log, rational };

// A value from the exact module: always a log value, plus the exact rational
// when the computation ran in rational mode.
struct TableValue {
  double log_value = -kInf;
  std::optional<Rational> exact;

  double value() const { return exact ? to_double(*exact) : std::exp(log_value); }
};

// Working weights for a table: support shifted to start at 0 and, in log
// mode, tilted to the canonical probability weights at the table's mean.
struct WorkingWeights {
  WeightSpec spec;          // shifted, tilted
  long long shift = 0;      // removed balls per box
  double log_a = 0.0;       // tilt record
  double log_b = 0.0;

  // original log Z(m, n) from the working value at m - shift*n
  double detilt(double log_zw, long long mw, long long n) const {
    if (log_zw == -kInf) return -kInf;
    return log_zw - static_cast<double>(n) * log_a - static_cast<double>(mw) * log_b;
  }
};

inline WorkingWeights working_weights(const WeightSpec& spec, double lambda, bool allow_tilt) {
  auto [shifted, alpha] = shift_support(spec);
  WorkingWeights ww{shifted, alpha};
  if (!allow_tilt || !shifted.rho_known() || shifted.rho() == 0.0) return ww;
  double x = std::max(0.0, lambda);
  if (x <= 0.0) return ww;
  if (shifted.finite_support() && x >= static_cast<double>(shifted.omega())) {
    x = static_cast<double>(shifted.omega()) - 0.5;
  }
  const double tau = tau_of(shifted, x);
  if (!(tau > 0.0) || std::isinf(tau)) return ww;
  double log_phi;
  try {
    log_phi = log_series(shifted, tau, 0);
  } catch (const BoundaryImprecise& e) {
    log_phi = std::log(e.estimate());
  }
  if (!std::isfinite(log_phi)) return ww;
  ww.log_a = -log_phi;
  ww.log_b = std::log(tau);
  ww.spec = tilt(shifted, Param(std::exp(ww.log_a)), Param(tau));
  return ww;
}

inline std::vector<double> log_weight_row(const WeightSpec& spec, long long len) {
  std::vector<double> w(static_cast<std::size_t>(len));
  for (long long k = 0; k < len; ++k) w[static_cast<std::size_t>(k)] = spec.log_weight(k);
  return w;
}

inline BitRow positivity_row(const std::vector<double>& logs) {
  BitRow b(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i)
    if (logs[i] != -kInf) b.set(i);
  return b;
}

inline constexpr long long kRationalCells = 250000;

class PartitionTable {
 public:
  const WeightSpec& spec() const { return spec_; }
  TableMode mode() const { return mode_; }
  long long n_max() const { return n_max_; }
  long long m_max() const { return m_max_; }
  const WorkingWeights& working() const { return ww_; }

  bool positive(long long m, long long n) const {
    const long long mw = m - ww_.shift * n;
    if (n < 0 || n > n_max_ || mw < 0 || mw > m_max_) return false;
    return pos_[static_cast<std::size_t>(n)].test(static_cast<std::size_t>(mw));
  }

  // log Z(m, n) for the original weights; -inf when zero.
  double log_z(long long m, long long n) const {
    check(m, n);
    const long long mw = m - ww_.shift * n;
    if (mw < 0 || mw > m_max_) return -kInf;
    return ww_.detilt(rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(mw)], mw, n);
  }

  Rational exact_z(long long m, long long n) const {
    if (mode_ != TableMode::rational) throw Error(ErrorCode::rational_unavailable, "table is in log mode");
    check(m, n);
    const long long mw = m - ww_.shift * n;
    if (mw < 0 || mw > m_max_) return 0;
    return exact_[static_cast<std::size_t>(n)][static_cast<std::size_t>(mw)];
  }

  TableValue z(long long m, long long n) const {
    if (m < 0) return {-kInf, mode_ == TableMode::rational ? std::optional<Rational>(0) : std::nullopt};
    TableValue v{log_z(m, n), std::nullopt};
    if (mode_ == TableMode::rational) v.exact = exact_z(m, n);
    return v;
  }

  // Working-coordinate row n (shifted and tilted); used by the samplers.
  const std::vector<double>& working_row(long long n) const { return rows_.at(static_cast<std::size_t>(n)); }

  // w_k of the original spec, exact when the table is rational.
  TableValue weight(long long k) const {
    TableValue v{spec_.log_weight(k), std::nullopt};
    if (mode_ == TableMode::rational) v.exact = *spec_.exact_weight(k);
    return v;
  }

  friend PartitionTable build_table(const WeightSpec& spec, long long m_max, long long n_max, TableMode mode);

 private:
  void check(long long m, long long n) const {
    if (n < 0 || n > n_max_ || m < 0 || m > m_max_) {
      throw Error(ErrorCode::invalid_argument, "table lookup (" + std::to_string(m) + "," + std::to_string(n) +
                                                   ") outside (m_max,n_max)=(" + std::to_string(m_max_) + "," +
                                                   std::to_string(n_max_) + ")");
    }
  }

  WeightSpec spec_ = WeightSpec::uniform();
  TableMode mode_ = TableMode::log;
  long long n_max_ = 0, m_max_ = 0;
  WorkingWeights ww_{WeightSpec::uniform()};
  std::vector<std::vector<double>> rows_;
  std::vector<BitRow> pos_;
  std::vector<std::vector<Rational>> exact_;
};

// Z(j, i) for 0 <= i <= n_max, 0 <= j <= m_max by the box-by-box recursion.
inline PartitionTable build_table(const WeightSpec& spec, long long m_max, long long n_max,
                                  TableMode mode = TableMode::log) {
  if (m_max < 0 || n_max < 0) throw Error(ErrorCode::invalid_argument, "table bounds must be nonnegative");
  PartitionTable t;
  t.spec_ = spec;
  t.mode_ = mode;
  t.m_max_ = m_max;
  t.n_max_ = n_max;
  const std::size_t len = static_cast<std::size_t>(m_max + 1);
  if (mode == TableMode::rational) {
    if (!spec.has_exact_weights()) {
      throw Error(ErrorCode::rational_unavailable, spec.name() + " has irrational weights");
    }
    if ((m_max + 1) * (n_max + 1) > kRationalCells) {
      throw Error(ErrorCode::invalid_argument, "rational tables are limited to " + std::to_string(kRationalCells) +
                                                   " cells");
    }
    t.ww_ = working_weights(spec, 0.0, false);
    const WeightSpec& w = t.ww_.spec;
    const long long kmax = w.finite_support() ? std::min(w.omega(), m_max) : m_max;
    std::vector<Rational> wr;
    for (long long k = 0; k <= kmax; ++k) wr.push_back(*w.exact_weight(k));
    t.exact_.assign(static_cast<std::size_t>(n_max + 1), std::vector<Rational>(len, Rational(0)));
    t.exact_[0][0] = 1;
    for (long long i = 1; i <= n_max; ++i) {
      auto& cur = t.exact_[static_cast<std::size_t>(i)];
      const auto& prev = t.exact_[static_cast<std::size_t>(i - 1)];
      for (std::size_t j = 0; j < len; ++j) {
        if (prev[j] == 0) continue;
        for (std::size_t k = 0; k < wr.size() && j + k < len; ++k) {
          if (wr[k] != 0) cur[j + k] += wr[k] * prev[j];
        }
      }
    }
    for (const auto& row : t.exact_) {
      std::vector<double> logs(len);
      for (std::size_t j = 0; j < len; ++j) logs[j] = log_rational(row[j]);
      t.pos_.push_back(positivity_row(logs));
      t.rows_.push_back(std::move(logs));
    }
    return t;
  }

  const double lambda = n_max > 0 ? static_cast<double>(m_max) / static_cast<double>(n_max) : 0.0;
  auto [shifted, alpha] = shift_support(spec);
  t.ww_ = working_weights(spec, lambda - static_cast<double>(alpha), true);
  const WeightSpec& w = t.ww_.spec;
  const long long kmax = w.finite_support() ? std::min(w.omega(), m_max) : m_max;
  const auto wrow = log_weight_row(w, kmax + 1);
  const BitRow wpos = positivity_row(wrow);
  std::vector<double> row0(len, -kInf);
  row0[0] = 0.0;
  t.pos_.push_back(positivity_row(row0));
  t.rows_.push_back(std::move(row0));
  for (long long i = 1; i <= n_max; ++i) {
    BitRow pos = BitRow::convolve(t.pos_.back(), wpos, len);
    t.rows_.push_back(log_convolve(t.rows_.back(), wrow, len, &pos));
    t.pos_.push_back(std::move(pos));
  }
  return t;
}

// Rows for the block sizes met when n boxes are halved recursively; each row
// is the convolution of its two halves. Enough to evaluate Z(m, n) and to
// sample B_{m,n} in O(m log n) per draw.
class SplitTable {
 public:
  SplitTable(const WeightSpec& spec, long long m, long long n) : spec_(spec), m_(m), n_(n) {
    if (n < 1 || m < 0) throw Error(ErrorCode::invalid_argument, "split table needs n >= 1, m >= 0");
    auto [shifted, alpha] = shift_support(spec);
    mw_ = m - alpha * n;
    ww_ = working_weights(spec, n > 0 ? static_cast<double>(mw_) / static_cast<double>(n) : 0.0, true);
    if (mw_ < 0) {
      feasible_ = false;
      return;
    }
    const std::size_t len = static_cast<std::size_t>(mw_ + 1);
    const WeightSpec& w = ww_.spec;
    const long long kmax = w.finite_support() ? std::min(w.omega(), mw_) : mw_;
    auto wrow = log_weight_row(w, kmax + 1);
    std::map<long long, bool> sizes;
    collect(n, sizes);
    for (const auto& [s, unused] : sizes) {
      (void)unused;
      if (s == 1) {
        Row r;
        r.logs.assign(len, -kInf);
        for (std::size_t k = 0; k < wrow.size() && k < len; ++k) r.logs[k] = wrow[k];
        r.pos = positivity_row(r.logs);
        rows_.emplace(1, std::move(r));
        continue;
      }
      const Row& lo = rows_.at(s / 2);
      const Row& hi = rows_.at(s - s / 2);
      Row r;
      r.pos = BitRow::convolve(lo.pos, hi.pos, len);
      r.logs = log_convolve(lo.logs, hi.logs, len, &r.pos);
      rows_.emplace(s, std::move(r));
    }
    feasible_ = rows_.at(n).pos.test(static_cast<std::size_t>(mw_));
  }

  const WeightSpec& spec() const { return spec_; }
  long long m() const { return m_; }
  long long n() const { return n_; }
  bool feasible() const { return feasible_; }
  const WorkingWeights& working() const { return ww_; }
  long long working_m() const { return mw_; }

  // log Z(m', s) for a block size s present in the table, in working units.
  const std::vector<double>& row(long long s) const { return rows_.at(s).logs; }

  double log_z() const {
    if (!feasible_) return -kInf;
    return ww_.detilt(rows_.at(n_).logs[static_cast<std::size_t>(mw_)], mw_, n_);
  }

 private:
  struct Row {
    std::vector<double> logs;
    BitRow pos;
  };

  static void collect(long long s, std::map<long long, bool>& sizes) {
    if (sizes.count(s)) return;
    sizes[s] = true;
    if (s > 1) {
      collect(s / 2, sizes);
      collect(s - s / 2, sizes);
    }
  }

  WeightSpec spec_;
  long long m_, n_, mw_ = 0;
  WorkingWeights ww_{WeightSpec::uniform()};
  std::map<long long, Row> rows_;
  bool feasible_ = false;
};

inline double log_z_single(const WeightSpec& spec, long long m, long long n) {
  return SplitTable(spec, m, n).log_z();
}

// Z_n = Z(n-1, n) / n
inline TableValue z_tree(const PartitionTable& table, long long n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "tree size must be >= 1");
  TableValue zn = table.z(n - 1, n);
  TableValue out{zn.log_value == -kInf ? -kInf : zn.log_value - std::log(static_cast<double>(n)), std::nullopt};
  if (zn.exact) out.exact = *zn.exact / n;
  return out;
}

namespace detail {

inline TableValue ratio(const TableValue& num, const TableValue& den, const Rational& factor, double log_factor) {
  TableValue out;
  out.log_value = num.log_value == -kInf ? -kInf : num.log_value - den.log_value + log_factor;
  if (num.exact && den.exact) out.exact = *num.exact * factor / *den.exact;
  return out;
}

inline TableValue product(const TableValue& a, const TableValue& b) {
  TableValue out{a.log_value + b.log_value, std::nullopt};
  if (a.log_value == -kInf || b.log_value == -kInf) out.log_value = -kInf;
  if (a.exact && b.exact) out.exact = *a.exact * *b.exact;
  return out;
}

inline TableValue zero_value(const PartitionTable& table) {
  TableValue v;
  if (table.mode() == TableMode::rational) v.exact = Rational(0);
  return v;
}

}  // namespace detail

// P(Y_1 = k) = w_k Z(m-k, n-1) / Z(m, n)
inline TableValue alloc_marginal(const PartitionTable& table, long long m, long long n, long long k) {
  if (n < 1 || !table.positive(m, n)) {
    throw Error(ErrorCode::infeasible_allocation,
                "Z(" + std::to_string(m) + "," + std::to_string(n) + ") = 0");
  }
  if (k < 0 || k > m) return detail::zero_value(table);
  const TableValue num = detail::product(table.weight(k), table.z(m - k, n - 1));
  return detail::ratio(num, table.z(m, n), Rational(1), 0.0);
}

// Law of the root degree of T_n.
inline TableValue root_degree_pmf(const PartitionTable& table, long long n, long long d) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "root degree law needs n >= 2");
  if (!table.positive(n - 1, n)) throw Error(ErrorCode::infeasible_allocation, "Z_n = 0");
  if (d <= 0 || d > n - 1) return detail::zero_value(table);
  const TableValue num = detail::product(table.weight(d), table.z(n - 1 - d, n - 1));
  const Rational factor = Rational(d) * Rational(n, n - 1);
  return detail::ratio(num, table.z(n - 1, n), factor,
                       std::log(static_cast<double>(d)) + std::log(static_cast<double>(n) / static_cast<double>(n - 1)));
}

// Probability that the nodes v_1..v_l of `prefix` (Ulam-Harris labels, in
// depth-first order) all lie in T_n and have outdegrees d_1..d_l.
inline TableValue joint_degree_prob(const PartitionTable& table, const OrderedTree& prefix,
                                    const std::vector<long long>& d, long long n) {
  const long long l = static_cast<long long>(d.size());
  if (l != static_cast<long long>(prefix.size())) {
    throw Error(ErrorCode::prefix_incompatible, "degree list length differs from the prefix tree size");
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < static_cast<long long>(prefix.degrees()[i])) {
      throw Error(ErrorCode::prefix_incompatible,
                  "d_" + std::to_string(i + 1) + " is below the outdegree in the prefix tree");
    }
  }
  if (n <= l) throw Error(ErrorCode::invalid_argument, "need n > size of the prefix tree");
  if (!table.positive(n - 1, n)) throw Error(ErrorCode::infeasible_allocation, "Z_n = 0");
  long long D = 0;
  for (long long x : d) D += x;
  if (D > n - 1) return detail::zero_value(table);
  TableValue num = table.z(n - D - 1, n - l);
  for (long long x : d) num = detail::product(num, table.weight(x));
  const Rational factor = Rational(n, n - l) * Rational(D - l + 1);
  return detail::ratio(num, table.z(n - 1, n), factor,
                       std::log(static_cast<double>(n) / static_cast<double>(n - l)) +
                           std::log(static_cast<double>(D - l + 1)));
}

struct WeightedTree {
  OrderedTree tree;
  double weight = 0.0;
  std::optional<Rational> exact;
};

// Every tree on n nodes with positive weight prod w_{d(v)}.
inline std::vector<WeightedTree> brute_force(const WeightSpec& spec, long long n) {
  if (n < 1 || n > 12) throw Error(ErrorCode::invalid_argument, "brute force enumeration needs 1 <= n <= 12");
  const bool exact = spec.has_exact_weights();
  std::vector<double> w(static_cast<std::size_t>(n));
  std::vector<Rational> we;
  for (long long k = 0; k < n; ++k) {
    w[static_cast<std::size_t>(k)] = spec.weight(k);
    if (exact) we.push_back(*spec.exact_weight(k));
  }
  std::vector<WeightedTree> out;
  DegreeSeq cur(static_cast<std::size_t>(n));
  // position i, running sum of the first i degrees
  auto rec = [&](auto&& self, long long i, long long sum) -> void {
    if (i == n) {
      if (sum != n - 1) return;
      WeightedTree wt{OrderedTree::trusted(cur), 1.0, std::nullopt};
      if (exact) wt.exact = Rational(1);
      for (Degree x : cur) {
        wt.weight *= w[x];
        if (exact) *wt.exact *= we[x];
      }
      if (wt.weight > 0.0 || (wt.exact && *wt.exact > 0)) out.push_back(std::move(wt));
      return;
    }
    for (long long x = 0; sum + x <= n - 1; ++x) {
      const long long s = sum + x;
      if (i + 1 < n && s < i + 1) continue;
      if (w[static_cast<std::size_t>(x)] == 0.0 && (!exact || we[static_cast<std::size_t>(x)] == 0)) continue;
      cur[static_cast<std::size_t>(i)] = static_cast<Degree>(x);
      self(self, i + 1, s);
    }
  };
  rec(rec, 0, 0);
  return out;
}

// Ulam-Harris label (1-based child indices from the root) of every node, in
// depth-first order.
inline std::vector<std::vector<Degree>> ulam_harris_labels(const OrderedTree& t) {
  const auto& d = t.degrees();
  std::vector<std::vector<Degree>> labels(d.size());
  struct Frame {
    std::size_t node;
    Degree remaining;
    Degree next;
  };
  std::vector<Frame> stack;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) {
      Frame& f = stack.back();
      labels[i] = labels[f.node];
      labels[i].push_back(++f.next);
      if (--f.remaining == 0) stack.pop_back();
    }
    if (d[i] > 0) stack.push_back({i, d[i], 0});
  }
  return labels;
}

// Z(m, n) > 0, decided exactly by positivity of the convolution powers.
inline bool feasible(const WeightSpec& spec, long long m, long long n) {
  if (m < 0 || n < 0) return false;
  if (n == 0) return m == 0;
  auto [shifted, alpha] = shift_support(spec);
  const long long mw = m - alpha * n;
  if (mw < 0) return false;
  if (shifted.finite_support() && mw > shifted.omega() * n) return false;
  const std::size_t len = static_cast<std::size_t>(mw + 1);
  BitRow w(len);
  // support {0, d, 2d, ...} up to min(mw, omega): n-fold sums are the multiples of d up to n omega
  long long d = 0;
  bool progression = true;
  const long long top = shifted.finite_support() ? std::min(mw, shifted.omega()) : mw;
  for (long long k = 0; k <= mw; ++k) {
    const bool pos = shifted.log_weight(k) != -kInf;
    if (pos) w.set(static_cast<std::size_t>(k));
    if (k == 0 || k > top || !progression) continue;
    if (d == 0) {
      if (pos) d = k;
    } else if (pos != (k % d == 0)) {
      progression = false;
    }
  }
  if (progression) return d == 0 ? mw == 0 : mw % d == 0;
  // binary powering of the positivity pattern
  BitRow result(len);
  result.set(0);
  BitRow base = w;
  long long e = n;
  while (e > 0) {
    if (e & 1) result = BitRow::convolve(result, base, len);
    e >>= 1;
    if (e > 0) base = BitRow::convolve(base, base, len);
  }
  return result.test(static_cast<std::size_t>(mw));
}

}  // namespace simplygen
