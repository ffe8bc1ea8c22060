#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "simplygen/exact.hpp"
#include "simplygen/rational.hpp"
#include "simplygen/trees.hpp"

// Reference computations used by the verification suites. They avoid the
// allocation tables on purpose, so agreement with them means something.
namespace simplygen::oracle {

inline BigInt binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline BigInt catalan(long long n) { return binomial(2 * n, n) / (n + 1); }

// Z_1..Z_N by decomposing at the root: Z_s = sum_d w_d F_d(s-1), where
// F_d(t) is the weight of ordered d-tuples of trees with t nodes in total.
inline std::vector<Rational> tree_weights_by_root(const WeightSpec& spec, long long N) {
  std::vector<Rational> Z(static_cast<std::size_t>(N + 1), 0);
  std::vector<Rational> w(static_cast<std::size_t>(N));
  for (long long k = 0; k < N; ++k) w[static_cast<std::size_t>(k)] = *spec.exact_weight(k);
  // F[d][t]
  std::vector<std::vector<Rational>> F(static_cast<std::size_t>(N), std::vector<Rational>(static_cast<std::size_t>(N), 0));
  F[0][0] = 1;
  for (long long s = 1; s <= N; ++s) {
    Rational z = 0;
    for (long long d = 0; d <= s - 1; ++d) z += w[static_cast<std::size_t>(d)] * F[d][s - 1];
    Z[static_cast<std::size_t>(s)] = z;
    if (s == N) break;
    for (long long d = 1; d <= s; ++d) {
      Rational f = 0;
      for (long long j = 1; j <= s; ++j) f += Z[static_cast<std::size_t>(j)] * F[d - 1][s - j];
      F[d][s] = f;
    }
  }
  return Z;
}

// Calls fn on every sequence of `parts` nonnegative integers summing to `total`.
inline void for_each_composition(long long total, long long parts, const std::function<void(const DegreeSeq&)>& fn) {
  DegreeSeq cur(static_cast<std::size_t>(parts), 0);
  auto rec = [&](auto&& self, long long i, long long left) -> void {
    if (i == parts - 1) {
      cur[static_cast<std::size_t>(i)] = static_cast<Degree>(left);
      fn(cur);
      return;
    }
    for (long long x = 0; x <= left; ++x) {
      cur[static_cast<std::size_t>(i)] = static_cast<Degree>(x);
      self(self, i + 1, left - x);
    }
  };
  if (parts == 0) {
    if (total == 0) fn(cur);
    return;
  }
  rec(rec, 0, total);
}

// Prefix-sum test for a depth-first degree sequence, written out directly.
inline bool valid_degree_sequence(const DegreeSeq& d) {
  long long s = 0;
  const long long n = static_cast<long long>(d.size());
  for (long long k = 1; k <= n; ++k) {
    s += d[static_cast<std::size_t>(k - 1)];
    if (k < n && s < k) return false;
  }
  return s == n - 1;
}

// Exact probabilities of every tree of size n, by enumeration.
inline std::map<DegreeSeq, double> tree_law(const WeightSpec& spec, long long n) {
  const auto trees = brute_force(spec, n);
  double total = 0.0;
  for (const auto& t : trees) total += t.weight;
  std::map<DegreeSeq, double> out;
  for (const auto& t : trees) out[t.tree.degrees()] = t.weight / total;
  return out;
}

// Law of the left ball of radius 2 of the limit tree for an offspring law with
// P(xi=0)=p0, P(xi=1)=p1 and mean mu <= 1, written out by hand: the root is a
// spine node, its special child (if inside the ball) is a spine node, the
// other children are ordinary, and every depth-2 node is a leaf of the ball.
inline std::map<DegreeSeq, double> kesten_ball2_law(double p0, double p1, double mu) {
  const double A = 1.0 - p0 - p1;              // P(xi >= 2)
  const double B = mu - p1 - 2.0 * A;          // sum_{k>=2} (k-2) pi_k
  // truncated outdegree (0, 1 or 2) of an ordinary node and of a depth-1 spine node
  const double normal[3] = {p0, p1, A};
  const double spine[3] = {0.0, p1, 1.0 - p1};
  std::map<DegreeSeq, double> out;
  auto shape = [](std::vector<Degree> kids) {
    DegreeSeq d{static_cast<Degree>(kids.size())};
    for (Degree a : kids) {
      d.push_back(a);
      d.insert(d.end(), a, 0);
    }
    return d;
  };
  for (Degree a = 0; a < 3; ++a) out[shape({a})] += p1 * spine[a];
  for (Degree a = 0; a < 3; ++a) {
    for (Degree b = 0; b < 3; ++b) {
      const double pr = A * spine[a] * normal[b] + A * normal[a] * spine[b] + (B + 1.0 - mu) * normal[a] * normal[b];
      out[shape({a, b})] += pr;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    if (it->second <= 0.0) it = out.erase(it);
    else ++it;
  }
  return out;
}

}  // namespace simplygen::oracle
