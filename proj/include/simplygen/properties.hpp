#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "simplygen/verify.hpp"

namespace simplygen {

namespace props {

inline constexpr std::size_t kCases = 1000;

// ---- weights ----

inline Check psi_monotone(Gen& g) {
  Property prop("psi strictly increasing on a 100-point grid");
  std::vector<WeightSpec> fams;
  for (const auto& s : builtin_families()) {
    if (s.rho() > 0.0) fams.push_back(s);
  }
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    const double top = std::isfinite(s.rho()) ? s.rho() : 10.0;
    const long long i = g.integer(0, 98);
    const long long j = g.integer(i + 1, 99);
    const double t1 = top * static_cast<double>(i) / 100.0, t2 = top * static_cast<double>(j) / 100.0;
    const double a = psi(s, t1), b = psi(s, t2);
    prop(a < b, [&] { return s.name() + ": psi(" + fmt(t1) + ")=" + fmt(a) + " >= psi(" + fmt(t2) + ")=" + fmt(b); });
  }
  return prop.result();
}

// tilt parameters: the two fixed pairs, then random ones
inline std::pair<Param, Param> tilt_pair(Gen& g, std::size_t c) {
  if (c % 4 == 0) return {Param(2), Param::parse("1/2")};
  if (c % 4 == 1) return {Param::parse("1/3"), Param(3)};
  return {Param(g.real(0.2, 5.0)), Param(g.real(0.2, 5.0))};
}

inline Check tilt_covariance(Gen& g) {
  Property prop("tau_of(tilt(spec,a,b), x) = tau_of(spec, x)/b");
  const auto fams = builtin_families();
  const std::vector<double> xs = {0.5, 1.0, 2.0};
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    const auto [a, b] = tilt_pair(g, c);
    double x = c % 2 ? g.pick(xs) : g.real(0.05, 4.0);
    if (x <= static_cast<double>(s.alpha_min())) x += static_cast<double>(s.alpha_min());
    if (s.finite_support() && x >= static_cast<double>(s.omega())) x = 0.5 * static_cast<double>(s.omega());
    const double t = tau_of(s, x);
    const double tt = tau_of(tilt(s, a, b), x);
    const double expect = t / b.value;
    const bool ok = expect == 0.0 ? tt == 0.0 : std::abs(tt - expect) <= 1e-9 * expect;
    prop(ok, [&] { return s.name() + " x=" + fmt(x) + " b=" + fmt(b.value) + ": " + fmt(tt, 15) + " vs " + fmt(expect, 15); });
  }
  return prop.result();
}

inline Check pi_tilt_invariance(Gen& g) {
  Property prop("canonical law is tilt invariant (k <= 50, 1e-10)");
  std::vector<WeightSpec> fams;
  for (const auto& s : builtin_families()) {
    if (s.rho() > 0.0) fams.push_back(s);
  }
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    const auto [a, b] = tilt_pair(g, c);
    double hi = 3.0;
    if (s.finite_support()) hi = std::min(hi, static_cast<double>(s.omega()) - 0.05);
    const double lambda = g.real(static_cast<double>(s.alpha_min()) + 0.05, hi);
    const auto l1 = canonical_law(s, lambda);
    const auto l2 = canonical_law(tilt(s, a, b), lambda);
    double worst = 0.0;
    for (long long k = 0; k <= 50; ++k) worst = std::max(worst, std::abs(l1.pi(k) - l2.pi(k)));
    prop(worst < 1e-10, [&] { return s.name() + " lambda=" + fmt(lambda) + ": diff " + fmt(worst, 3); });
  }
  return prop.result();
}

inline Check normalization(Gen& g) {
  Property prop("sum pi_k = 1 and sum k pi_k = min(lambda, nu)");
  std::vector<WeightSpec> fams;
  for (const auto& s : builtin_families()) {
    if (s.rho() > 0.0) fams.push_back(s);
  }
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    double hi = 4.0;
    if (s.finite_support()) hi = static_cast<double>(s.omega()) - 0.05;
    const double lambda = g.real(static_cast<double>(s.alpha_min()) + 0.05, hi);
    const auto law = canonical_law(s, lambda);
    // adaptive K: the first 2^j - 1 where the tail is below 1e-13
    long long K = 0;
    double mass = 0.0, mean = 0.0, tail = 1.0;
    for (;; ++K) {
      const double p = law.pi(K);
      mass += p;
      mean += static_cast<double>(K) * p;
      if (s.finite_support() && K >= s.omega()) {
        tail = 0.0;
        break;
      }
      if (K >= 15 && ((K + 1) & K) == 0 && (tail = law.tail(K)) < 1e-13) break;
      if (K > (1 << 16)) break;
    }
    double mean_tail = 0.0;
    if (tail > 0.0) {
      try {
        mean_tail = std::exp(log_series(s, law.tau, 1, K + 1) - law.log_phi_tau);
      } catch (const BoundaryImprecise& e) {
        mean_tail = e.estimate() / law.phi_tau;
      }
    }
    const double target = std::min(lambda, law.nu);
    const bool ok = std::abs(mass + tail - 1.0) < 1e-9 &&
                    (!std::isfinite(target) || std::abs(mean + mean_tail - target) < 1e-8);
    prop(ok, [&] {
      return s.name() + " lambda=" + fmt(lambda) + ": mass " + fmt(mass, 15) + " tail " + fmt(tail, 3) + " mean " +
             fmt(mean + mean_tail, 15) + " target " + fmt(target, 15);
    });
  }
  return prop.result();
}

// random probability vector with mean exactly 1, as rationals
inline std::vector<Rational> mean_one_law(Gen& g) {
  const long long K = g.integer(2, 8);
  std::vector<Rational> u(static_cast<std::size_t>(K + 1));
  Rational total = 0, mean = 0;
  for (long long k = 0; k <= K; ++k) {
    u[static_cast<std::size_t>(k)] = Rational(g.integer(0, 20));
    total += u[static_cast<std::size_t>(k)];
  }
  u[0] += 1;
  u[static_cast<std::size_t>(K)] += 1;
  total += 2;
  for (long long k = 0; k <= K; ++k) {
    u[static_cast<std::size_t>(k)] /= total;
    mean += u[static_cast<std::size_t>(k)] * k;
  }
  // mix with a point mass at 0 or at K to bring the mean to 1
  std::vector<Rational> p = u;
  if (mean > 1) {
    const Rational th = 1 / mean;
    for (auto& x : p) x *= th;
    p[0] += 1 - th;
  } else if (mean < 1) {
    const Rational th = Rational(K - 1) / (K - mean);
    for (auto& x : p) x *= th;
    p[static_cast<std::size_t>(K)] += 1 - th;
  }
  return p;
}

inline Check probability_fixed_point(Gen& g) {
  Property prop("mean-one probability weights are their own canonical law");
  for (std::size_t c = 0; c < kCases; ++c) {
    WeightSpec s = WeightSpec::uniform();
    if (c == 0) s = WeightSpec::geometric(Param::parse("1/2"));
    else if (c == 1) s = WeightSpec::poisson(Param(1));
    else s = WeightSpec::explicit_exact(mean_one_law(g), kInf);
    const auto law = canonical_law(s, 1.0);
    // the poisson family carries 1/k! without the e^-1
    auto target = [&](long long k) { return c == 1 ? std::exp(-1.0 - std::lgamma(k + 1.0)) : s.weight(k); };
    double worst = c == 1 ? 0.0 : std::abs(law.tau - 1.0);
    for (long long k = 0; k <= 40; ++k) worst = std::max(worst, std::abs(law.pi(k) - target(k)));
    prop(worst < 1e-12, [&] { return s.name() + ": deviation " + fmt(worst, 3); });
  }
  return prop.result();
}

// ---- trees ----

inline Check tree_roundtrip(Gen& g) {
  Property prop("degree sequence and text roundtrip");
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto t = g.tree(g.integer(1, 300));
    const auto again = OrderedTree::from_degrees(t.degrees());
    const bool ok = again.degrees() == t.degrees() && parse_tree(to_string(t)).degrees() == t.degrees() &&
                    parse_tree(to_string(t, true)).degrees() == t.degrees();
    prop(ok, [&] { return to_string(t, true); });
  }
  return prop.result();
}

inline bool stats_consistent(const OrderedTree& t) {
  const auto s = stats(t);
  const auto& d = t.degrees();
  std::size_t nodes = 0, edges = 0, levels = 0, widest = 0;
  for (std::size_t k = 0; k < s.degree_counts.size(); ++k) {
    nodes += s.degree_counts[k];
    edges += k * s.degree_counts[k];
  }
  for (auto w : s.level_widths) {
    levels += w;
    widest = std::max(widest, w);
  }
  return s.size == d.size() && nodes == d.size() && edges + 1 == d.size() && levels == d.size() &&
         s.level_widths.size() == s.height + 1 && s.width == widest && s.level_widths[0] == 1 &&
         s.root_degree == d[0] && (d.size() < 2 || s.level_widths[1] == d[0]) &&
         s.largest(1) == *std::max_element(d.begin(), d.end());
}

inline Check tree_stats(Gen& g) {
  Property prop("tree statistics are consistent (all trees n <= 8, then random)");
  for (long long n = 1; n <= 8; ++n) {
    for (const auto& wt : brute_force(WeightSpec::uniform(), n)) {
      prop(stats_consistent(wt.tree), [&] { return to_string(wt.tree); });
    }
  }
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto t = g.tree(g.integer(1, 500));
    prop(stats_consistent(t), [&] { return to_string(t, true); });
  }
  return prop.result();
}

inline Check catalan_count() {
  Property prop("valid sequences of length n number C_{n-1}, n <= 8");
  for (long long n = 1; n <= 8; ++n) {
    long long valid = 0, agree = 0, total = 0;
    oracle::for_each_composition(n - 1, n, [&](const DegreeSeq& y) {
      ++total;
      const bool v = OrderedTree::is_valid(y);
      valid += v;
      agree += v == oracle::valid_degree_sequence(y);
    });
    prop(BigInt(valid) == oracle::catalan(n - 1) && agree == total,
         [&] { return "n=" + std::to_string(n) + ": " + std::to_string(valid) + " valid"; });
  }
  return prop.result();
}

inline Check fringe_leaves(Gen& g) {
  Property prop("fringe_counts(T, 1) counts the leaves");
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto t = g.tree(g.integer(1, 500));
    const auto f = fringe_counts(t, 1);
    const auto it = f.find(DegreeSeq{0});
    const std::size_t leaves = it == f.end() ? 0 : it->second;
    prop(f.size() == 1 && leaves == stats(t).count(0), [&] { return to_string(t, true); });
  }
  return prop.result();
}

// ---- exact ----

inline Check tilt_identity(Gen& g) {
  Property prop("log Z~(m,n) - n log a - m log b = log Z(m,n)");
  const auto fams = builtin_families();
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    const double a = g.real(0.2, 5.0), b = g.real(0.2, 5.0);
    const long long m_max = g.integer(1, 40), n_max = g.integer(1, 40);
    const auto t1 = build_table(s, m_max, n_max);
    const auto t2 = build_table(tilt(s, a, b), m_max, n_max);
    double worst = 0.0;
    bool support = true;
    for (long long n = 0; n <= n_max; ++n) {
      for (long long m = 0; m <= m_max; ++m) {
        const double z1 = t1.log_z(m, n), z2 = t2.log_z(m, n);
        if ((z1 == -kInf) != (z2 == -kInf)) support = false;
        if (z1 == -kInf || z2 == -kInf) continue;
        const double diff = z2 - static_cast<double>(n) * std::log(a) - static_cast<double>(m) * std::log(b) - z1;
        worst = std::max(worst, std::abs(diff));
      }
    }
    prop(support && worst < 1e-9, [&] {
      return s.name() + " a=" + fmt(a) + " b=" + fmt(b) + " up to (" + std::to_string(m_max) + "," +
             std::to_string(n_max) + "): " + fmt(worst, 3);
    });
  }
  return prop.result();
}

inline Check forest_closed_form(Gen& g) {
  Property prop("rooted_forest Z(m,n) = n m^{m-n-1}/(m-n)!");
  const auto table = build_table(WeightSpec::rooted_forest(), 80, 80);
  for (std::size_t c = 0; c < kCases; ++c) {
    long long m = 6, n = 3;
    if (c == 1) m = 10, n = 4;
    if (c > 1) {
      n = g.integer(1, 80);
      m = g.integer(n, 80);
    }
    const double mm = static_cast<double>(m), nn = static_cast<double>(n);
    const double expect =
        m == n ? 0.0 : std::log(nn) + (mm - nn - 1.0) * std::log(mm) - std::lgamma(mm - nn + 1.0);
    const double rel = std::abs(std::expm1(table.log_z(m, n) - expect));
    prop(rel < 1e-9, [&] { return "(" + std::to_string(m) + "," + std::to_string(n) + "): " + fmt(rel, 3); });
  }
  return prop.result();
}

inline Check identity_check(const char* name, const std::function<void(detail::SuiteRun&)>& fn) {
  detail::SuiteRun sub(name, 0);
  fn(sub);
  auto r = sub.finish(1e9);
  r.checks.pop_back();  // runtime line
  Check c{name, r.pass(), {}};
  std::size_t n = 0;
  for (const auto& x : r.checks) {
    if (!x.pass) {
      c.detail = x.name + ": " + x.detail;
      break;
    }
    ++n;
  }
  if (c.pass) c.detail = std::to_string(n) + " checks";
  return c;
}

// ---- sampling ----

inline Check exact_law(std::uint64_t seed) {
  Property prop("sampled trees follow the enumerated law (n <= 7, both strategies, p > 1e-4)");
  std::uint64_t stream = 0;
  for (const auto& s : builtin_families()) {
    if (!is_tree_mode(s)) continue;
    for (long long n = 2; n <= 7; ++n) {
      if (!feasible(s, n - 1, n)) continue;
      const auto law = oracle::tree_law(s, n);
      for (Strategy strat : {Strategy::exact, Strategy::rejection}) {
        if (strat == Strategy::rejection && s.rho() == 0.0) continue;  // no rejection sampler when rho = 0
        const TreeSampler sampler(s, n, strat);
        Rng rng(seed, 140000 + stream++);
        std::map<DegreeSeq, double> hist;
        for (int r = 0; r < 100000; ++r) hist[sampler.sample(rng).degrees()] += 1.0;
        std::vector<double> obs, probs;
        bool stray = false;
        for (const auto& [shape, p] : law) {
          auto it = hist.find(shape);
          obs.push_back(it == hist.end() ? 0.0 : it->second);
          probs.push_back(p);
        }
        for (const auto& [shape, cnt] : hist) stray = stray || !law.count(shape);
        const auto cs = chi_square(obs, probs);
        prop(!stray && cs.p_value > 1e-4, [&] {
          return s.name() + " n=" + std::to_string(n) + " " + std::string(to_string(strat)) + ": p=" + fmt(cs.p_value, 3);
        });
      }
    }
  }
  return prop.result();
}

inline Check exchangeability(Gen& g) {
  Property prop("Y_1 and Y_n both follow the exact marginal");
  const auto fams = builtin_families();
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    const long long n = g.integer(2, 6);
    const long long m = g.integer(0, 3 * n);
    if (!feasible(s, m, n)) {
      --c;
      continue;
    }
    Strategy strat = Strategy::exact;
    if (s.rho() > 0.0 && g.coin()) strat = Strategy::rejection;
    std::optional<AllocSampler> sampler;
    try {
      sampler.emplace(s, m, n, strat);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::capacity_exceeded && e.code() != ErrorCode::acceptance_too_low) throw;
      sampler.emplace(s, m, n, Strategy::exact);
    }
    const auto table = build_table(s, m, n);
    std::vector<double> probs(static_cast<std::size_t>(m + 1));
    for (long long k = 0; k <= m; ++k) probs[static_cast<std::size_t>(k)] = alloc_marginal(table, m, n, k).value();
    std::vector<double> first(probs.size(), 0.0), last(probs.size(), 0.0);
    for (int r = 0; r < 2000; ++r) {
      const auto a = sampler->sample(g.rng());
      first[a.y.front()] += 1.0;
      last[a.y.back()] += 1.0;
    }
    const double p1 = chi_square(first, probs).p_value, p2 = chi_square(last, probs).p_value;
    prop(p1 > 1e-6 && p2 > 1e-6, [&] {
      return s.name() + " (m,n)=(" + std::to_string(m) + "," + std::to_string(n) + "): p=" + fmt(p1, 3) + ", " +
             fmt(p2, 3);
    });
  }
  return prop.result();
}

inline Check forest_cycle_lemma() {
  Property prop("m - n balls in m boxes have exactly n forest rotations (m <= 8)");
  for (long long m = 1; m <= 8; ++m) {
    for (long long n = 1; n <= m; ++n) {
      oracle::for_each_composition(m - n, m, [&](const DegreeSeq& y) {
        const auto starts = forest_rotations(y);
        long long brute = 0;
        DegreeSeq r(y.size());
        for (std::size_t s = 0; s < y.size(); ++s) {
          for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[(s + i) % y.size()];
          // n trees in a row: every proper prefix keeps sum(d_i - 1) > -n
          long long run = 0;
          bool ok = true;
          for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            run += static_cast<long long>(r[i]) - 1;
            ok = ok && run > -n;
          }
          brute += ok;
        }
        bool split_ok = true;
        for (auto st : starts) {
          for (std::size_t i = 0; i < y.size(); ++i) r[i] = y[(st + i) % y.size()];
          split_ok = split_ok && split_forest(r).size() == static_cast<std::size_t>(n);
        }
        prop(static_cast<long long>(starts.size()) == n && brute == n && split_ok,
             [&] { return "(m,n)=(" + std::to_string(m) + "," + std::to_string(n) + ") " + format_degrees(y); });
      });
    }
  }
  return prop.result();
}

inline Check determinism(Gen& g) {
  Property prop("same (seed, stream) gives the same sample");
  const auto fams = builtin_families();
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    const std::uint64_t seed = g.rng().bits(), stream = g.rng().bits();
    if (is_tree_mode(s) && g.coin()) {
      const long long n = g.integer(1, 60);
      if (!feasible(s, n - 1, n)) continue;
      const TreeSampler sampler(s, n);
      Rng r1(seed, stream), r2(seed, stream);
      const auto a = sampler.sample(r1).degrees();
      const auto b = sampler.sample(r2).degrees();
      prop(a == b, [&] { return s.name() + " tree n=" + std::to_string(n); });
    } else {
      const long long n = g.integer(1, 30), m = g.integer(0, 60);
      if (!feasible(s, m, n)) continue;
      const AllocSampler sampler(s, m, n);
      Rng r1(seed, stream), r2(seed, stream);
      prop(sampler.sample(r1).y == sampler.sample(r2).y, [&] { return s.name() + " alloc"; });
    }
  }
  // worker count does not change the draws
  const TreeSampler sampler(WeightSpec::uniform(), 50);
  auto draw = [&](Rng& rng, std::size_t) { return sampler.sample(rng).degrees(); };
  const auto one = run_replicates(7, 0, 64, 1, draw);
  const auto three = run_replicates(7, 0, 64, 3, draw);
  prop(one == three, [] { return std::string("1 vs 3 workers differ"); });
  return prop.result();
}

inline Check kesten_ball_law(std::uint64_t seed) {
  Property prop("limit-tree ball T^[2] matches its explicit law (d_TV < 0.01)");
  std::uint64_t stream = 0;
  for (const auto& s : builtin_families()) {
    if (!is_tree_mode(s) || s.rho() == 0.0) continue;
    const auto law = canonical_law(s, 1.0);
    if (std::abs(law.mu - 1.0) > 1e-12) continue;
    const auto expect = oracle::kesten_ball2_law(law.pi(0), law.pi(1), law.mu);
    const auto ks = KestenSpec::from_law(law);
    Rng rng(seed, 141000 + stream++);
    ShapeHistogram hist;
    for (int r = 0; r < 100000; ++r) ++hist[sample_kesten_ball(ks, 2, rng).tree.degrees()];
    double s1 = 0.0;
    for (const auto& [shape, p] : expect) {
      auto it = hist.find(shape);
      s1 += std::abs((it == hist.end() ? 0.0 : static_cast<double>(it->second) / 1e5) - p);
    }
    for (const auto& [shape, cnt] : hist) {
      if (!expect.count(shape)) s1 += static_cast<double>(cnt) / 1e5;
    }
    prop(0.5 * s1 < 0.01, [&] { return s.name() + ": d_TV " + fmt(0.5 * s1, 3); });
  }
  return prop.result();
}

// ---- stats ----

inline Check metric_inequalities(Gen& g) {
  Property prop("d_K* <= d_K <= d_TV");
  auto random_pmf = [&](std::size_t len) {
    Pmf p;
    p.p = g.weights(len);
    if (g.coin(0.3)) {
      p.infinity = g.real(0.0, 0.5);
      for (auto& x : p.p) x *= 1.0 - p.infinity;
    }
    return p;
  };
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto a = random_pmf(static_cast<std::size_t>(g.integer(1, 30)));
    const auto b = random_pmf(static_cast<std::size_t>(g.integer(1, 30)));
    const double ks = dist_kolmogorov_mod(a, b), k = dist_kolmogorov(a, b), tv = dist_tv(a, b);
    prop(ks <= k + 1e-15 && k <= tv + 1e-15,
         [&] { return "d_K*=" + fmt(ks) + " d_K=" + fmt(k) + " d_TV=" + fmt(tv); });
  }
  return prop.result();
}

inline Check size_biased_root() {
  Property prop("root law = (n/(n-1)) d P(Y_1 = d), exactly, n <= 8");
  for (const auto& s : rational_tree_families()) {
    const auto table = build_table(s, 7, 8, TableMode::rational);
    for (long long n = 2; n <= 8; ++n) {
      const auto trees = brute_force(s, n);
      Rational total = 0;
      for (const auto& t : trees) total += *t.exact;
      if (total == 0) continue;
      std::vector<Rational> root(static_cast<std::size_t>(n), 0);
      for (const auto& t : trees) root[t.tree.degrees()[0]] += *t.exact / total;
      for (long long d = 0; d < n; ++d) {
        const Rational sb = Rational(n, n - 1) * d * *alloc_marginal(table, n - 1, n, d).exact;
        prop(sb == root[static_cast<std::size_t>(d)],
             [&] { return s.name() + " n=" + std::to_string(n) + " d=" + std::to_string(d); });
      }
    }
  }
  return prop.result();
}

inline Check prediction_gating(Gen& g) {
  Property prop("predictions are emitted only under their conditions");
  {
    const auto s = WeightSpec::powerlaw(Param::parse("5/2"));
    const auto law = canonical_law(s, nu(s));
    const auto p = predict_max_degree(law, 1000, static_cast<long long>(std::round(1000 * law.nu)));
    prop(p.declined, [&] { return "powerlaw(5/2) at lambda = nu: emitted " + p.tag; });
    const auto z = predict_partition(s, static_cast<long long>(std::round(1000 * law.nu)), 1000);
    prop(!z.has("log_z_local"), [] { return std::string("log_z_local emitted at lambda = nu, infinite variance"); });
  }
  std::vector<WeightSpec> fams;
  for (const auto& s : builtin_families()) {
    if (s.rho() > 0.0) fams.push_back(s);
  }
  for (std::size_t c = 1; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    double hi = 3.0;
    if (s.finite_support()) hi = static_cast<double>(s.omega()) - 0.05;
    const double lambda = c % 5 == 0 ? std::min(nu(s), hi) : g.real(static_cast<double>(s.alpha_min()) + 0.05, hi);
    const long long n = g.integer(10, 100000);
    const long long m = static_cast<long long>(std::round(lambda * static_cast<double>(n)));
    const auto law = canonical_law(s, static_cast<double>(m) / static_cast<double>(n));
    // the regime a sample of this size can see: within sqrt(n) of nu n counts as critical,
    // with the variance taken at nu (a power tail has sum k^2 w_k rho^k < inf iff beta > 3)
    const double gap = static_cast<double>(m) - law.nu * static_cast<double>(n);
    const bool window = std::isfinite(law.nu) && std::abs(gap) <= std::sqrt(static_cast<double>(n));
    const bool at_power_boundary = s.tail() && std::isfinite(s.rho());
    const bool sub = !window && law.regime == AllocRegime::subcritical;
    const bool super = !window && law.regime == AllocRegime::supercritical;
    const bool crit = window || law.regime == AllocRegime::critical;
    const bool finite_var = window ? !(at_power_boundary && s.tail()->beta <= 3.0) : law.finite_variance();
    const auto p = predict_max_degree(law, n, m);
    bool ok = true;
    if (!p.declined) {
      if (p.tag == "bounded-support") ok = s.finite_support();
      else if (p.tag == "poisson-max") ok = !super && s.log_weight(0) != -kInf && !(crit && !finite_var);
      else if (p.tag == "condensation") ok = super && s.tail() && s.tail()->beta > 2.0;
      else ok = false;
      if (p.has("gumbel_location")) ok = ok && law.regime == AllocRegime::subcritical;
    } else {
      ok = p.tag == "regime-open" || p.tag == "condensation" || p.tag == "poisson-max";
    }
    if (s.log_weight(0) != -kInf && !(s.finite_support() && law.lambda >= static_cast<double>(s.omega()))) {
      const auto z = predict_partition(s, m, n);
      if (!z.declined) {
        if (z.has("log_z_local")) ok = ok && (sub || (crit && finite_var));
        if (z.has("log_z_condensed")) ok = ok && super;
        if (z.has("log_z_stable")) ok = ok && crit && !finite_var;
      }
    }
    prop(ok, [&] { return s.name() + " lambda=" + fmt(law.lambda) + " tag " + p.tag; });
  }
  return prop.result();
}

inline Check k_index_order(Gen& g) {
  Property prop("k1 <= k2 and k2 - 1 <= k3 <= k2");
  std::vector<WeightSpec> fams;
  for (const auto& s : builtin_families()) {
    if (s.rho() > 0.0 && !s.finite_support() && s.log_weight(0) != -kInf) fams.push_back(s);
  }
  for (std::size_t c = 0; c < kCases; ++c) {
    const auto& s = g.pick(fams);
    const double lambda = g.real(0.05, std::min(3.0, nu(s)));
    const auto law = canonical_law(s, lambda);
    const double n = std::exp(g.real(std::log(10.0), std::log(1e7)));
    const auto k = k_indices(law, n);
    prop(k.k1 <= k.k2 && k.k2 - 1 <= k.k3 && k.k3 <= k.k2, [&] {
      return s.name() + " lambda=" + fmt(lambda) + " n=" + fmt(n) + ": " + std::to_string(k.k1) + "," +
             std::to_string(k.k2) + "," + std::to_string(k.k3);
    });
  }
  return prop.result();
}

}  // namespace props

inline SuiteResult suite_properties(const VerifyOptions& o) {
  detail::SuiteRun run("properties", 14);
  std::uint64_t stream = 0;
  auto add = [&](const char* what, auto fn) {
    detail::guarded(run, what, [&] {
      Gen g(o.seed, 1400 + stream++);
      const auto t0 = std::chrono::steady_clock::now();
      Check c = fn(g);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      c.detail += (c.detail.empty() ? "" : "; ") + fmt(secs, 3) + " s";
      run.add(std::move(c));
    });
  };
  add("weights", props::psi_monotone);
  add("weights", props::tilt_covariance);
  add("weights", props::pi_tilt_invariance);
  add("weights", props::normalization);
  add("weights", props::probability_fixed_point);
  add("trees", props::tree_roundtrip);
  add("trees", props::tree_stats);
  add("trees", [](Gen&) { return props::catalan_count(); });
  add("trees", props::fringe_leaves);
  add("exact", [](Gen&) {
    return props::identity_check("brute-force oracle agreement, n <= 9", [](detail::SuiteRun& r) { check_oracle_agreement(r, 9); });
  });
  add("exact", [](Gen&) {
    return props::identity_check("n Z_n = Z(n-1,n), n <= 30", [](detail::SuiteRun& r) { check_tz_identity(r, 30); });
  });
  add("exact", props::tilt_identity);
  add("exact", props::forest_closed_form);
  add("sampling", [&](Gen&) { return props::exact_law(o.seed); });
  add("sampling", props::exchangeability);
  add("sampling", [](Gen&) {
    return props::identity_check("one valid rotation per allocation, n <= 7", [](detail::SuiteRun& r) { check_cycle_lemma(r, 7); });
  });
  add("sampling", [](Gen&) { return props::forest_cycle_lemma(); });
  add("sampling", props::determinism);
  add("sampling", [&](Gen&) { return props::kesten_ball_law(o.seed); });
  add("stats", props::metric_inequalities);
  add("stats", [](Gen&) { return props::size_biased_root(); });
  add("stats", props::prediction_gating);
  add("stats", props::k_index_order);
  return run.finish(120.0);
}

}  // namespace simplygen
