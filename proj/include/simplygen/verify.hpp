#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <boost/math/special_functions/zeta.hpp>

#include "simplygen/analysis.hpp"
#include "simplygen/exact.hpp"
#include "simplygen/metrics.hpp"
#include "simplygen/oracles.hpp"
#include "simplygen/predict.hpp"
#include "simplygen/sampling.hpp"
#include "simplygen/summary.hpp"
#include "simplygen/verify_core.hpp"

namespace simplygen {

namespace detail {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Statistical tolerances widen by sqrt(full/fast) when the fast budget cuts
// the replicate count.
struct McSize {
  std::size_t count;
  double tol_scale;
};

inline McSize mc_size(Budget b, std::size_t full, std::size_t fast) {
  if (b == Budget::full || fast >= full) return {full, 1.0};
  return {fast, std::sqrt(static_cast<double>(full) / static_cast<double>(fast))};
}

inline std::string mc_note(const McSize& s) {
  std::string out = "R=" + std::to_string(s.count);
  if (s.tol_scale != 1.0) out += ", tolerance x" + fmt(s.tol_scale, 3);
  return out;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size();
  return k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

}  // namespace detail

// ---- exact identities ----------------------------------------------------

inline void check_tz_identity(detail::SuiteRun& run, long long n_max) {
  for (const auto& spec : {WeightSpec::uniform(), WeightSpec::binary_full(), WeightSpec::motzkin(), WeightSpec::dary(3)}) {
    const auto table = build_table(spec, n_max - 1, n_max, TableMode::rational);
    const auto Z = oracle::tree_weights_by_root(spec, n_max);
    long long bad = 0, first = 0;
    for (long long n = 1; n <= n_max; ++n) {
      if (Rational(n) * Z[static_cast<std::size_t>(n)] != table.exact_z(n - 1, n)) {
        if (!bad) first = n;
        ++bad;
      }
    }
    run.check("n Z_n = Z(n-1,n), " + spec.name() + ", n <= " + std::to_string(n_max), bad == 0,
              bad ? "first mismatch at n=" + std::to_string(first) : "exact");
  }
}

inline SuiteResult suite_tz_identity(const VerifyOptions&) {
  detail::SuiteRun run("tz-identity", 1);
  detail::guarded(run, "tz identity", [&] { check_tz_identity(run, 30); });
  return run.finish(1.0);
}

inline SuiteResult suite_closed_forms(const VerifyOptions&) {
  detail::SuiteRun run("closed-forms", 2);
  detail::guarded(run, "catalan", [&] {
    const auto t = build_table(WeightSpec::uniform(), 19, 20, TableMode::rational);
    long long bad = 0;
    for (long long n = 1; n <= 20; ++n) {
      if (*z_tree(t, n).exact != Rational(oracle::catalan(n - 1))) ++bad;
    }
    run.check("uniform Z_n = C_{n-1}, n <= 20", bad == 0, std::to_string(bad) + " mismatches");
  });
  detail::guarded(run, "borel", [&] {
    const auto t = build_table(WeightSpec::inv_factorial(), 19, 20);
    double worst = 0.0;
    for (long long n = 1; n <= 20; ++n) {
      const double nn = static_cast<double>(n);
      const double expect = (nn - 1.0) * std::log(nn) - std::lgamma(nn + 1.0);
      worst = std::max(worst, std::abs(std::expm1(z_tree(t, n).log_value - expect)));
    }
    run.check("inv_factorial Z_n = n^{n-1}/n!, n <= 20, rel < 1e-10", worst < 1e-10, "worst " + fmt(worst, 3));
  });
  detail::guarded(run, "forest", [&] {
    const auto t = build_table(WeightSpec::rooted_forest(), 20, 7);
    double worst = 0.0;
    for (auto [m, n] : std::vector<std::pair<long long, long long>>{{6, 3}, {10, 4}, {20, 7}}) {
      const double mm = static_cast<double>(m), nn = static_cast<double>(n);
      const double expect = std::log(nn) + (mm - nn - 1.0) * std::log(mm) - std::lgamma(mm - nn + 1.0);
      worst = std::max(worst, std::abs(std::expm1(t.log_z(m, n) - expect)));
    }
    run.check("rooted_forest Z(m,n) = n m^{m-n-1}/(m-n)!, rel < 1e-9", worst < 1e-9, "worst " + fmt(worst, 3));
  });
  return run.finish(1.0);
}

// Tree-mode builtins whose weights are exact rationals.
inline std::vector<WeightSpec> rational_tree_families() {
  std::vector<WeightSpec> out;
  for (const auto& s : builtin_families()) {
    if (s.has_exact_weights() && is_tree_mode(s)) out.push_back(s);
  }
  return out;
}

inline void check_oracle_agreement(detail::SuiteRun& run, long long n_max) {
  const std::vector<OrderedTree> prefixes = {OrderedTree::from_degrees({0}), OrderedTree::from_degrees({1, 0}),
                                             OrderedTree::from_degrees({2, 0, 0}),
                                             OrderedTree::from_degrees({1, 1, 0})};
  std::vector<std::vector<std::vector<Degree>>> prefix_labels;
  for (const auto& p : prefixes) prefix_labels.push_back(ulam_harris_labels(p));
  for (const auto& spec : rational_tree_families()) {
    const auto table = build_table(spec, n_max - 1, n_max, TableMode::rational);
    long long z_bad = 0, root_bad = 0, joint_bad = 0, joint_checked = 0;
    std::string first;
    for (long long n = 1; n <= n_max; ++n) {
      const auto trees = brute_force(spec, n);
      Rational total = 0;
      for (const auto& t : trees) total += *t.exact;
      if (*z_tree(table, n).exact != total) {
        ++z_bad;
        if (first.empty()) first = "Z_" + std::to_string(n);
      }
      if (total == 0 || n < 2) continue;
      std::vector<Rational> root(static_cast<std::size_t>(n), 0);
      for (const auto& t : trees) root[t.tree.degrees()[0]] += *t.exact / total;
      for (long long d = 0; d < n; ++d) {
        if (*root_degree_pmf(table, n, d).exact != root[static_cast<std::size_t>(d)]) {
          ++root_bad;
          if (first.empty()) first = "root n=" + std::to_string(n) + " d=" + std::to_string(d);
        }
      }
      for (std::size_t pi = 0; pi < prefixes.size(); ++pi) {
        const auto& prefix = prefixes[pi];
        const long long l = static_cast<long long>(prefix.size());
        if (n <= l) continue;
        std::map<std::vector<long long>, Rational> freq;
        for (const auto& t : trees) {
          const auto labels = ulam_harris_labels(t.tree);
          std::map<std::vector<Degree>, std::size_t> where;
          for (std::size_t i = 0; i < labels.size(); ++i) where[labels[i]] = i;
          std::vector<long long> key;
          bool inside = true;
          for (const auto& lab : prefix_labels[pi]) {
            auto it = where.find(lab);
            if (it == where.end()) {
              inside = false;
              break;
            }
            key.push_back(t.tree.degrees()[it->second]);
          }
          if (inside) freq[key] += *t.exact / total;
        }
        // every admissible d with d_i >= prefix degree and sum <= n-1
        std::vector<long long> d(static_cast<std::size_t>(l));
        auto rec = [&](auto&& self, long long i, long long sum) -> void {
          if (i == l) {
            ++joint_checked;
            const auto it = freq.find(d);
            const Rational expect = it == freq.end() ? Rational(0) : it->second;
            if (*joint_degree_prob(table, prefix, d, n).exact != expect) {
              ++joint_bad;
              if (first.empty()) first = "joint n=" + std::to_string(n) + " prefix " + to_string(prefix);
            }
            return;
          }
          for (long long x = prefix.degrees()[static_cast<std::size_t>(i)]; sum + x <= n - 1; ++x) {
            d[static_cast<std::size_t>(i)] = x;
            self(self, i + 1, sum + x);
          }
        };
        rec(rec, 0, 0);
      }
    }
    run.check("oracle agreement, " + spec.name() + ", n <= " + std::to_string(n_max),
              z_bad + root_bad + joint_bad == 0,
              z_bad + root_bad + joint_bad == 0
                  ? std::to_string(joint_checked) + " joint laws exact"
                  : std::to_string(z_bad) + " Z, " + std::to_string(root_bad) + " root, " + std::to_string(joint_bad) +
                        " joint mismatches; first " + first);
  }
}

inline SuiteResult suite_oracle(const VerifyOptions&) {
  detail::SuiteRun run("oracle", 3);
  detail::guarded(run, "oracle agreement", [&] { check_oracle_agreement(run, 9); });
  return run.finish(30.0);
}

inline void check_cycle_lemma(detail::SuiteRun& run, long long n_max) {
  for (long long n = 1; n <= n_max; ++n) {
    long long allocations = 0, bad = 0, bad_fast = 0, valid = 0;
    oracle::for_each_composition(n - 1, n, [&](const DegreeSeq& y) {
      ++allocations;
      long long good = 0;
      DegreeSeq r(y.size());
      for (std::size_t s = 0; s < y.size(); ++s) {
        for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[(s + i) % y.size()];
        if (oracle::valid_degree_sequence(r)) ++good;
      }
      if (oracle::valid_degree_sequence(y)) ++valid;
      if (good != 1) ++bad;
      if (forest_rotations(y).size() != 1) ++bad_fast;
    });
    const bool count_ok = BigInt(valid) == oracle::catalan(n - 1);
    run.check("n=" + std::to_string(n) + ": one valid rotation per allocation", bad == 0 && bad_fast == 0 && count_ok,
              std::to_string(allocations) + " allocations, " + std::to_string(valid) + " valid sequences" +
                  (bad || bad_fast ? ", " + std::to_string(bad + bad_fast) + " violations" : ""));
  }
}

inline SuiteResult suite_cycle_lemma(const VerifyOptions& o) {
  detail::SuiteRun run("cycle-lemma", 4);
  detail::guarded(run, "cycle lemma", [&] { check_cycle_lemma(run, o.n_max); });
  return run.finish(10.0);
}

// ---- samplers against exact laws -------------------------------------------

inline SuiteResult suite_sampler_law(const VerifyOptions& o) {
  detail::SuiteRun run("sampler-law", 5);
  detail::guarded(run, "sampler law", [&] {
    const auto spec = WeightSpec::uniform();
    const long long n = 6;
    const auto law = oracle::tree_law(spec, n);
    const auto sz = detail::mc_size(o.budget, 100000, 10000);
    std::vector<ShapeHistogram> fringe(2);
    for (int s = 0; s < 2; ++s) {
      const Strategy strat = s == 0 ? Strategy::exact : Strategy::rejection;
      const TreeSampler sampler(spec, n, strat);
      Rng rng(o.seed, 5000 + static_cast<std::uint64_t>(s));
      std::map<DegreeSeq, double> hist;
      for (std::size_t r = 0; r < sz.count; ++r) {
        const auto t = sampler.sample(rng);
        hist[t.degrees()] += 1.0;
        for (const auto& [shape, c] : fringe_counts(t, static_cast<std::size_t>(n))) fringe[s][shape] += c;
      }
      std::vector<double> obs, probs;
      bool stray = false;
      for (const auto& [shape, p] : law) {
        obs.push_back(hist.count(shape) ? hist[shape] : 0.0);
        probs.push_back(p);
      }
      for (const auto& [shape, c] : hist) stray = stray || !law.count(shape);
      const auto cs = chi_square(obs, probs);
      run.check(std::string("chi-square vs enumeration, ") + std::string(to_string(strat)) + " (p > 1e-4)",
                !stray && cs.p_value > 1e-4, "p = " + fmt(cs.p_value, 4) + ", " + detail::mc_note(sz));
    }
    const double tv = dist_tv_counts(fringe[0], fringe[1]);
    const double tol = 0.01 * sz.tol_scale;
    run.check("pooled fringe-shape histograms agree (d_TV < " + fmt(tol, 3) + ")", tv < tol, "d_TV = " + fmt(tv, 4));
  });
  return run.finish(30.0);
}

// ---- laws of large numbers -----------------------------------------------------

inline SuiteResult suite_degree_lln(const VerifyOptions& o) {
  detail::SuiteRun run("degree-lln", 6);
  detail::guarded(run, "degree lln", [&] {
    const long long n = 100000;
    Rng rng(o.seed, 6000);
    const auto t = TreeSampler(WeightSpec::uniform(), n).sample(rng);
    const auto s = stats(t);
    double worst = 0.0;
    for (std::size_t d = 0; d <= 5; ++d) {
      worst = std::max(worst, std::abs(static_cast<double>(s.count(d)) / n - std::ldexp(1.0, -static_cast<int>(d) - 1)));
    }
    run.check("uniform tree n=1e5: |N_d/n - 2^{-d-1}| < 0.01, d <= 5", worst < 0.01, "worst " + fmt(worst, 3));
    Rng rng2(o.seed, 6001);
    const auto a = AllocSampler(WeightSpec::uniform(), 2 * n, n).sample(rng2);
    const auto c = a.counts();
    worst = 0.0;
    for (std::size_t k = 0; k <= 5; ++k) {
      const double got = k < c.size() ? static_cast<double>(c[k]) / n : 0.0;
      worst = std::max(worst, std::abs(got - std::pow(2.0 / 3.0, static_cast<double>(k)) / 3.0));
    }
    run.check("uniform allocation (2n,n), n=1e5: |N_k/n - (1/3)(2/3)^k| < 0.01, k <= 5", worst < 0.01,
              "worst " + fmt(worst, 3));
  });
  return run.finish(10.0);
}

inline SuiteResult suite_root_degree(const VerifyOptions& o) {
  detail::SuiteRun run("root-degree", 7);
  detail::guarded(run, "root degree", [&] {
    const long long n = 10000;
    const auto sz = detail::mc_size(o.budget, 10000, 1000);
    const TreeSampler sampler(WeightSpec::uniform(), n, Strategy::rejection);
    const auto roots = run_replicates(o.seed, 7000, sz.count, o.workers,
                                      [&](Rng& rng, std::size_t) { return sampler.sample(rng).degrees()[0]; });
    std::vector<std::uint64_t> hist;
    for (auto r : roots) add_count(hist, r);
    Pmf expect;
    for (int k = 0; k < 80; ++k) expect.p.push_back(k * std::ldexp(1.0, -k - 1));
    expect.p.back() += 1.0 - expect.total();
    const double dk = dist_kolmogorov(empirical_pmf(hist), expect);
    const double tol = 0.02 * sz.tol_scale;
    run.check("uniform n=1e4 root degree vs k 2^{-k-1} (d_K < " + fmt(tol, 3) + ")", dk < tol,
              "d_K = " + fmt(dk, 4) + ", " + detail::mc_note(sz));
  });
  return run.finish(120.0);
}

inline SuiteResult suite_fringe_lln(const VerifyOptions& o) {
  detail::SuiteRun run("fringe-lln", 8);
  detail::guarded(run, "fringe lln", [&] {
    const long long n = 100000;
    Rng rng(o.seed, 8000);
    const auto t = TreeSampler(WeightSpec::uniform(), n).sample(rng);
    const auto fr = fringe_counts(t, 3);
    double worst = 0.0;
    std::string where;
    for (long long size = 1; size <= 3; ++size) {
      for (const auto& wt : brute_force(WeightSpec::uniform(), size)) {
        double p = 1.0;  // GW tree with Geometric(1/2) offspring
        for (Degree d : wt.tree.degrees()) p *= std::ldexp(1.0, -static_cast<int>(d) - 1);
        const auto it = fr.find(wt.tree.degrees());
        const double got = it == fr.end() ? 0.0 : static_cast<double>(it->second) / n;
        if (std::abs(got - p) >= worst) {
          worst = std::abs(got - p);
          where = format_degrees(wt.tree.degrees());
        }
      }
    }
    run.check("uniform n=1e5: |N_T/n - P(T)| < 0.01 for |T| <= 3", worst < 0.01, "worst " + fmt(worst, 3) + " at (" + where + ")");
  });
  return run.finish(10.0);
}

// ---- asymptotics --------------------------------------------------------

inline SuiteResult suite_asymptotic_ratios(const VerifyOptions&) {
  detail::SuiteRun run("asymptotic-ratios", 9);
  detail::guarded(run, "asymptotic ratios", [&] {
    const auto spec = WeightSpec::uniform();
    auto log_zn = [&](long long n) { return log_z_single(spec, n - 1, n) - std::log(static_cast<double>(n)); };
    const auto pred200 = predict_tree_partition(spec, 200);
    const double ratio = std::exp(log_zn(201) - log_zn(200));
    run.check("predicted Z_{n+1}/Z_n limit is 4", std::abs(pred200.value("zn_ratio") - 4.0) < 1e-9,
              fmt(pred200.value("zn_ratio"), 12));
    run.check("|Z_201/Z_200 - 4| < 0.05", std::abs(ratio - 4.0) < 0.05, "ratio " + fmt(ratio, 8));
    const auto pred500 = predict_tree_partition(spec, 500);
    const double rel = std::abs(std::expm1(log_zn(500) - pred500.value("log_zn")));
    // the prediction itself against the Catalan form (1/sqrt(4 pi)) 4^n n^{-3/2} / 2
    const double cat = -0.5 * std::log(4.0 * M_PI) + 500.0 * std::log(4.0) - std::log(2.0) - 1.5 * std::log(500.0);
    run.check("predicted Z_n at n=500 equals 4^n/(2 sqrt(4 pi) n^{3/2})",
              std::abs(pred500.value("log_zn") - cat) < 1e-9, fmt(pred500.value("log_zn") - cat, 3));
    run.check("|Z_500 / prediction - 1| < 0.02", rel < 0.02, "relative error " + fmt(rel, 4));
    const long long n = 500;
    const double lz = log_z_single(spec, 2 * n, n) / static_cast<double>(n);
    const auto part = predict_partition(spec, 2 * n, n);
    run.check("predicted (1/n) log Z(2n,n) limit is log(27/4)",
              std::abs(part.value("log_z_over_n") - std::log(27.0 / 4.0)) < 1e-9, fmt(part.value("log_z_over_n"), 12));
    run.check("|(1/n) log Z(2n,n) - log(27/4)| < 0.02 at n=500", std::abs(lz - std::log(27.0 / 4.0)) < 0.02,
              "value " + fmt(lz, 8));
  });
  return run.finish(5.0);
}

// ---- extremes -----------------------------------------------------------

inline SuiteResult suite_condensation(const VerifyOptions& o) {
  detail::SuiteRun run("condensation", 10);
  detail::guarded(run, "condensation", [&] {
    const long long n = 2000;
    const auto spec = WeightSpec::powerlaw(Param(4));
    const double z3 = boost::math::zeta(3.0), z4 = boost::math::zeta(4.0);
    const double nu_oracle = (z3 - z4) / z4;  // w_k = (k+1)^{-4}
    run.check("nu = (zeta(3) - zeta(4))/zeta(4)", std::abs(nu(spec) - nu_oracle) < 1e-8,
              fmt(nu(spec), 10) + " vs " + fmt(nu_oracle, 10));
    const auto sz = detail::mc_size(o.budget, 200, 200);
    const TreeSampler sampler(spec, n, Strategy::exact);
    const auto tops = run_replicates(o.seed, 10000, sz.count, o.workers, [&](Rng& rng, std::size_t) {
      const auto s = stats(sampler.sample(rng));
      return std::pair<long long, long long>(static_cast<long long>(s.largest(1)), static_cast<long long>(s.largest(2)));
    });
    std::size_t in_band = 0;
    std::vector<double> y2n;
    std::vector<long long> y2;
    for (auto [a, b] : tops) {
      if (std::abs(static_cast<double>(a) / n - (1.0 - nu_oracle)) < 0.05) ++in_band;
      y2n.push_back(static_cast<double>(b) / n);
      y2.push_back(b);
    }
    const double frac = static_cast<double>(in_band) / static_cast<double>(tops.size());
    run.check("Y_(1)/n within (1 - nu) +- 0.05 in >= 90% of replicates", frac >= 0.9,
              fmt(100.0 * frac, 4) + "% in band, " + detail::mc_note(sz));
    const double med = detail::median(y2n);
    run.check("median Y_(2)/n < 0.05", med < 0.05, "median " + fmt(med, 4));
    // W = Y_(2)/n^{1/3}, P(W <= x) = exp(-(c'/3) x^-3), c' = 1/zeta(4); Y_(2) <= k iff W < (k+1)/n^{1/3}
    const double cp = 1.0 / z4, scale = std::cbrt(static_cast<double>(n));
    const double dk = dist_kolmogorov_cdf(y2, [&](long long k) {
      if (k < 0) return 0.0;
      return std::exp(-(cp / 3.0) * std::pow(static_cast<double>(k + 1) / scale, -3.0));
    });
    const double tol = 0.1 * sz.tol_scale;
    run.check("Y_(2)/n^{1/3} vs Frechet(alpha=3, c'=1/zeta(4)) (d_K < " + fmt(tol, 3) + ")", dk < tol,
              "d_K = " + fmt(dk, 4));
  });
  return run.finish(600.0);
}

inline SuiteResult suite_max_degree(const VerifyOptions& o) {
  detail::SuiteRun run("max-degree", 11);
  detail::guarded(run, "max degree", [&] {
    const long long n = 10000;
    const double nn = static_cast<double>(n);
    const auto sz = detail::mc_size(o.budget, 500, 100);
    const TreeSampler sampler(WeightSpec::uniform(), n);
    const auto tops = run_replicates(o.seed, 11000, sz.count, o.workers, [&](Rng& rng, std::size_t) {
      return static_cast<long long>(stats(sampler.sample(rng)).largest(1));
    });
    // P(xi > k) = 2^{-k-1} for Geometric(1/2)
    const double dk = dist_kolmogorov_cdf(tops, [&](long long k) {
      return k < 0 ? 0.0 : std::exp(-nn * std::ldexp(1.0, -static_cast<int>(k) - 1));
    });
    const double tol = 0.05 * sz.tol_scale;
    run.check("P(Y_(1) <= k) vs exp(-n 2^{-k-1}) (d_K < " + fmt(tol, 3) + ")", dk < tol,
              "d_K = " + fmt(dk, 4) + ", " + detail::mc_note(sz));
    // k_3 = max{k : 2^{-k-1/2} >= 1/n}
    long long k3 = 0;
    while (std::pow(2.0, -(k3 + 1) - 0.5) >= 1.0 / nn) ++k3;
    std::size_t near = 0;
    for (auto y : tops) near += std::abs(y - k3) <= 2 ? 1 : 0;
    const double frac = static_cast<double>(near) / static_cast<double>(tops.size());
    run.check("Y_(1) in [k_3 - 2, k_3 + 2] in >= 95% of replicates (k_3 = " + std::to_string(k3) + ")", frac >= 0.95,
              fmt(100.0 * frac, 4) + "%");
  });
  return run.finish(120.0);
}

inline SuiteResult suite_kesten(const VerifyOptions& o) {
  detail::SuiteRun run("kesten", 12);
  detail::guarded(run, "kesten", [&] {
    const long long n = 10000;
    const auto spec = WeightSpec::uniform();
    const auto sz = detail::mc_size(o.budget, 20000, 2000);
    const TreeSampler sampler(spec, n, Strategy::exact);
    const auto balls = run_replicates(o.seed, 12000, sz.count, o.workers,
                                      [&](Rng& rng, std::size_t) { return left_ball(sampler.sample(rng), 2).degrees(); });
    const auto ks = KestenSpec::from_law(canonical_law(spec, 1.0));
    const auto limit = run_replicates(o.seed, 12000 + sz.count, sz.count, o.workers,
                                      [&](Rng& rng, std::size_t) { return sample_kesten_ball(ks, 2, rng).tree.degrees(); });
    ShapeHistogram a, b;
    for (const auto& d : balls) ++a[d];
    for (const auto& d : limit) ++b[d];
    const double tv = dist_tv_counts(a, b);
    const double tol = 0.03 * sz.tol_scale;
    run.check("left ball T_n^[2] vs limit-tree ball (d_TV < " + fmt(tol, 3) + ")", tv < tol,
              "d_TV = " + fmt(tv, 4) + ", " + detail::mc_note(sz));
  });
  return run.finish(300.0);
}

inline SuiteResult suite_forest_max(const VerifyOptions& o) {
  detail::SuiteRun run("forest-max", 13);
  detail::guarded(run, "rooted forests", [&] {
    const long long n = 10000;
    const double lambda = 2.0, nn = static_cast<double>(n);
    const auto sz = detail::mc_size(o.budget, 300, 60);
    const ForestSampler sampler(WeightSpec::inv_factorial(), static_cast<long long>(lambda * nn), n);
    const auto tops = run_replicates(o.seed, 13000, sz.count, o.workers, [&](Rng& rng, std::size_t) {
      long long best = 0;
      for (const auto& t : sampler.sample(rng)) best = std::max(best, static_cast<long long>(t.size()));
      return best;
    });
    const double q = 0.5 * std::exp(0.5), L = -std::log(q);
    const double b = lambda * std::pow(L, 1.5) / (std::sqrt(2.0 * M_PI) * (lambda - 1.0) * (1.0 - q));
    const double A = std::log(nn) - 1.5 * std::log(std::log(nn)) + std::log(b);
    const double dk = dist_kolmogorov_cdf(
        tops, [&](long long k) { return std::exp(-std::exp(-(static_cast<double>(k + 1) * L - A))); });
    double mean = 0.0;
    for (auto t : tops) mean += static_cast<double>(t) / static_cast<double>(tops.size());
    const double tol = 0.08 * sz.tol_scale;
    run.check("rooted forests lambda=2, n=1e4: Y_(1) vs floor-Gumbel (d_K < " + fmt(tol, 3) + ")", dk < tol,
              "d_K = " + fmt(dk, 4) + ", mean Y_(1) " + fmt(mean, 4) + " vs location A/L " + fmt(A / L, 4) + ", " +
                  detail::mc_note(sz));
  });
  detail::guarded(run, "unrooted forests", [&] {
    const long long n = 5000;
    const double lambda = 3.0, nn = static_cast<double>(n);
    const auto sz = detail::mc_size(o.budget, 50, 10);
    const AllocSampler sampler(WeightSpec::unrooted_forest(), static_cast<long long>(lambda * nn), n, Strategy::exact);
    const auto tops = run_replicates(o.seed, 13500, sz.count, o.workers, [&](Rng& rng, std::size_t) {
      auto y = sampler.sample(rng).y;
      std::partial_sort(y.begin(), y.begin() + 2, y.end(), std::greater<>());
      return std::pair<double, double>(y[0], y[1]);
    });
    std::size_t giant_ok = 0, second_ok = 0;
    double worst1 = 0.0, worst2 = 0.0;
    for (auto [y1, y2] : tops) {
      const double e1 = std::abs(y1 - (lambda - 2.0) * nn) / nn;
      worst1 = std::max(worst1, e1);
      worst2 = std::max(worst2, y2 / nn);
      giant_ok += e1 < 0.1;
      second_ok += y2 / nn < 0.05;
    }
    run.check("unrooted forests lambda=3, n=5000: |Y_(1) - (lambda-2) n|/n < 0.1 in every replicate",
              giant_ok == tops.size(),
              std::to_string(giant_ok) + "/" + std::to_string(tops.size()) + " in band, worst " + fmt(worst1, 4) + ", " +
                  detail::mc_note(sz));
    run.check("unrooted forests: Y_(2)/n < 0.05 in every replicate", second_ok == tops.size(),
              std::to_string(second_ok) + "/" + std::to_string(tops.size()) + " below, worst " + fmt(worst2, 4));
  });
  return run.finish(600.0);
}

inline SuiteResult suite_properties(const VerifyOptions& o);

struct SuiteInfo {
  const char* name;
  int criterion;
  SuiteResult (*run)(const VerifyOptions&);
};

inline const std::vector<SuiteInfo>& suites() {
  static const std::vector<SuiteInfo> all = {
      {"tz-identity", 1, suite_tz_identity},       {"closed-forms", 2, suite_closed_forms},
      {"oracle", 3, suite_oracle},                 {"cycle-lemma", 4, suite_cycle_lemma},
      {"sampler-law", 5, suite_sampler_law},       {"degree-lln", 6, suite_degree_lln},
      {"root-degree", 7, suite_root_degree},       {"fringe-lln", 8, suite_fringe_lln},
      {"asymptotic-ratios", 9, suite_asymptotic_ratios}, {"condensation", 10, suite_condensation},
      {"max-degree", 11, suite_max_degree},        {"kesten", 12, suite_kesten},
      {"forest-max", 13, suite_forest_max},        {"properties", 14, suite_properties},
  };
  return all;
}

inline SuiteResult run_suite(std::string_view name, const VerifyOptions& o) {
  for (const auto& s : suites()) {
    if (name == s.name) return s.run(o);
  }
  throw Error(ErrorCode::invalid_argument, "unknown suite '" + std::string(name) + "'");
}

}  // namespace simplygen

#include "simplygen/properties.hpp"
