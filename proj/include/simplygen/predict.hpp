#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "simplygen/analysis.hpp"
#include "simplygen/exact.hpp"
#include "simplygen/metrics.hpp"

namespace simplygen {

struct Prediction {
  std::string quantity;
  std::string tag;
  bool declined = false;
  std::string reason;
  std::vector<std::string> conditions;          // validity conditions that were checked
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, std::string>> skipped;  // items withheld, with the reason
  std::map<std::string, Pmf> laws;
  std::map<DegreeSeq, double> shapes;
  std::function<double(long long)> cdf;         // P(X <= k) on the integers
  std::string cdf_of;                           // which variable cdf describes

  bool has(std::string_view key) const {
    for (const auto& [k, v] : values) {
      if (k == key) return true;
    }
    return false;
  }
  double value(std::string_view key) const {
    for (const auto& [k, v] : values) {
      if (k == key) return v;
    }
    throw Error(ErrorCode::invalid_argument, "prediction has no value '" + std::string(key) + "'");
  }
  void set(std::string key, double v) { values.emplace_back(std::move(key), v); }
  void skip(std::string key, std::string why) { skipped.emplace_back(std::move(key), std::move(why)); }
};

inline Prediction declined(std::string quantity, std::string tag, std::string reason) {
  Prediction p;
  p.quantity = std::move(quantity);
  p.tag = std::move(tag);
  p.declined = true;
  p.reason = std::move(reason);
  return p;
}

namespace detail {

// pi_0..pi_K with K the first index where the tail drops below eps (capped).
inline Pmf law_pmf(const CanonicalLaw& law, double eps = 1e-13, long long cap = 1 << 16) {
  Pmf out;
  const long long K = law.spec.finite_support() ? std::min(law.spec.omega(), cap) : cap;
  double total = 0.0;
  for (long long k = 0; k <= K; ++k) {
    const double p = law.pi(k);
    out.p.push_back(p);
    total += p;
    if (k >= law.spec.alpha_min() && k % 16 == 15 && law.tail(k) < eps) break;
  }
  // what the truncation leaves out (and, below the mean, any defect) goes to the last cell
  if (total < 1.0) out.p.back() += 1.0 - total;
  return out;
}

// |m - nu n| <= sqrt(n), where a finite sample cannot tell lambda from nu.
inline bool in_critical_window(const CanonicalLaw& law, long long m, long long n) {
  const double nn = static_cast<double>(n);
  return std::isfinite(law.nu) && std::abs(static_cast<double>(m) - law.nu * nn) <= std::sqrt(nn);
}

// sum k^2 w_k rho^k = inf for a power tail with beta <= 3
inline bool infinite_variance_at_nu(const WeightSpec& spec) {
  const auto tail = spec.tail();
  return tail && spec.rho_known() && spec.rho() > 0.0 && std::isfinite(spec.rho()) && tail->beta <= 3.0;
}

inline bool is_regime_open(const CanonicalLaw& law, long long m, long long n) {
  if (law.regime == AllocRegime::critical && !law.finite_variance()) return true;
  return in_critical_window(law, m, n) && infinite_variance_at_nu(law.spec);
}

inline double log_phi_at_rho(const WeightSpec& spec) {
  try {
    return log_series(spec, spec.rho(), 0);
  } catch (const BoundaryImprecise& e) {
    return std::log(e.estimate());
  }
}

}  // namespace detail

// N_d/n -> pi_d, root degree -> d pi_d with mass 1 - mu at infinity, and the
// fringe frequencies N_T/n -> prod pi_{d_i}.
inline Prediction predict_degree_law(const CanonicalLaw& law, bool tree_mode = true, std::size_t fringe_max = 3) {
  if (law.spec.finite_support() && law.lambda >= static_cast<double>(law.spec.omega())) {
    return declined("degree-law", "degree-lln", "needs lambda < omega");
  }
  Prediction p;
  p.quantity = "degree-law";
  p.tag = tree_mode ? "degree-lln" : "occupancy-lln";
  p.conditions.push_back("lambda < omega");
  Pmf pi = detail::law_pmf(law);
  p.laws["degree"] = pi;
  p.set("tau", law.tau);
  p.set("mu", law.mu);
  if (tree_mode) {
    Pmf root;
    double s = 0.0;
    for (std::size_t k = 0; k < pi.p.size(); ++k) {
      root.p.push_back(static_cast<double>(k) * pi.p[k]);
      s += root.p.back();
    }
    root.infinity = std::max(0.0, 1.0 - s);
    p.laws["root"] = root;
    p.set("root_mass_at_infinity", root.infinity);
    for (std::size_t size = 1; size <= fringe_max; ++size) {
      for (const auto& wt : brute_force(WeightSpec::uniform(), static_cast<long long>(size))) {
        double prob = 1.0;
        for (Degree d : wt.tree.degrees()) prob *= law.pi(d);
        p.shapes[wt.tree.degrees()] = prob;
      }
    }
  }
  return p;
}

struct KIndices {
  long long k1 = 0, k2 = 0, k3 = 0;
};

// k_1 = max{k: pi_k >= 1/n}, k_2 = max{k: P(xi >= k) >= 1/n},
// k_3 = max{k: sqrt(P(xi >= k) P(xi >= k+1)) >= 1/n}.
inline KIndices k_indices(const CanonicalLaw& law, double n) {
  KIndices out;
  const double inv = 1.0 / n;
  // from a k where P(xi > k) is far below 1/n, walk down accumulating
  // P(xi >= k) = P(xi > k) + pi_k; the first hit of each test is the max
  long long top;
  double above;  // P(xi > k)
  if (law.spec.finite_support()) {
    top = law.spec.omega();
    above = 0.0;
  } else {
    top = 16;
    while ((above = law.tail(top)) >= inv * 1e-3) top *= 2;
  }
  bool f1 = false, f2 = false, f3 = false;
  for (long long k = top; k >= 0 && !(f1 && f2 && f3); --k) {
    const double p = law.pi(k);
    const double at = above + p;  // P(xi >= k)
    if (!f1 && p >= inv) out.k1 = k, f1 = true;
    if (!f2 && at >= inv) out.k2 = k, f2 = true;
    if (!f3 && std::sqrt(at * above) >= inv) out.k3 = k, f3 = true;
    above = at;
  }
  return out;
}

inline double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

// Largest component beyond nu: Y_(1) = m - nu n + O(n^{1/alpha}), and
// Y_(2) / n^{1/alpha} Frechet with P(W <= x) = exp(-(c'/alpha) x^{-alpha}).
inline Prediction predict_condensation(const CanonicalLaw& law, long long n, long long m) {
  const std::string q = "condensation";
  if (law.regime != AllocRegime::supercritical) return declined(q, "condensation", "needs lambda > nu");
  const auto tail = law.spec.tail();
  if (!tail || !(tail->beta > 2.0) || !law.spec.rho_known() || !(law.spec.rho() > 0.0) ||
      !std::isfinite(law.spec.rho())) {
    return declined(q, "condensation", "the condensate law needs a power-law tail w_k ~ c k^-beta rho^-k with beta > 2");
  }
  Prediction p;
  p.quantity = q;
  p.tag = "condensation";
  p.conditions = {"lambda > nu", "power-law tail, beta > 2"};
  const double alpha = tail->beta - 1.0;
  const double c_prime = tail->c / law.phi_tau;  // tau = rho here
  const double nn = static_cast<double>(n);
  const double scale = std::pow(nn, 1.0 / alpha);
  p.set("nu", law.nu);
  p.set("condensate", (law.lambda - law.nu) * nn);
  p.set("condensate_fraction", law.lambda - law.nu);
  p.set("condensate_centered", static_cast<double>(m) - law.nu * nn);
  p.set("alpha", alpha);
  p.set("c_prime", c_prime);
  p.set("second_scale", scale);
  if (alpha < 2.0) {
    p.set("stable_laplace_coefficient", c_prime * std::tgamma(-alpha));
  } else {
    p.skip("stable_laplace_coefficient", "the fluctuations are stable only for 1 < alpha < 2");
  }
  // Y_(2) <= k  <=>  W < (k+1)/n^{1/alpha} under the floor discretization
  p.cdf_of = "Y_(2)";
  p.cdf = [c_prime, alpha, scale](long long k) {
    if (k < 0) return 0.0;
    const double x = static_cast<double>(k + 1) / scale;
    return std::exp(-(c_prime / alpha) * std::pow(x, -alpha));
  };
  return p;
}

// Law of the largest occupancy Y_(1) for n boxes and m balls.
inline Prediction predict_max_degree(const CanonicalLaw& law, long long n, long long m) {
  const std::string q = "max-degree";
  const WeightSpec& spec = law.spec;
  if (spec.finite_support()) {
    Prediction p;
    p.quantity = q;
    p.tag = "bounded-support";
    p.conditions = {"omega < infinity", "lambda > 0"};
    const long long omega = spec.omega();
    p.set("omega", static_cast<double>(omega));
    p.cdf_of = "Y_(1)";
    p.cdf = [omega](long long k) { return k >= omega ? 1.0 : 0.0; };
    return p;
  }
  if (detail::is_regime_open(law, m, n)) {
    return declined(q, "regime-open", "m within sqrt(n) of nu n with infinite variance: the maximum is an open problem");
  }
  const bool window = detail::in_critical_window(law, m, n);
  if (law.regime == AllocRegime::supercritical && !window) return predict_condensation(law, n, m);
  if (spec.log_weight(0) == -kInf) return declined(q, "poisson-max", "needs w_0 > 0 (shift the support first)");
  Prediction p;
  p.quantity = q;
  p.tag = "poisson-max";
  p.conditions = {"w_0 > 0", "omega = infinity",
                  law.regime == AllocRegime::subcritical && !window ? "lambda < nu" : "m within sqrt(n) of nu n, finite variance"};
  const double nn = static_cast<double>(n);
  const auto ks = k_indices(law, nn);
  p.set("k1", static_cast<double>(ks.k1));
  p.set("k2", static_cast<double>(ks.k2));
  p.set("k3", static_cast<double>(ks.k3));
  p.cdf_of = "Y_(1)";
  p.cdf = [law, nn](long long k) { return k < 0 ? 0.0 : std::exp(-nn * law.tail(k)); };
  const bool geometric_ratio = spec.tail() && spec.rho_known() && std::isfinite(spec.rho()) && spec.rho() > 0.0;
  if (law.regime == AllocRegime::subcritical && geometric_ratio) {
    const double qq = law.tau / spec.rho();
    const double L = -std::log(qq);
    const double logN = std::log(nn) + law.log_pi(ks.k1) - static_cast<double>(ks.k1) * std::log(qq) - std::log1p(-qq);
    p.set("q", qq);
    p.set("N", std::exp(logN));
    p.set("gumbel_location", logN / L);
    p.set("gumbel_scale", 1.0 / L);
  } else if (law.regime == AllocRegime::subcritical && spec.rho_known() && spec.rho() == kInf) {
    p.set("concentration_low", static_cast<double>(ks.k3));
    p.set("concentration_high", static_cast<double>(ks.k3 + 1));
  } else {
    p.skip("gumbel", "the geometric-maximum form needs w_{k+1}/w_k -> a in (0, inf) and lambda < nu");
  }
  return p;
}

// Floor-Gumbel law P(Y <= k) = exp(-exp(-((k+1) L - A))).
inline std::function<double(long long)> floor_gumbel_cdf(double A, double L) {
  return [A, L](long long k) { return gumbel_cdf(static_cast<double>(k + 1) * L - A); };
}

enum class ForestKind { rooted, general, unrooted };

inline ForestKind parse_forest_kind(std::string_view s) {
  if (s == "rooted") return ForestKind::rooted;
  if (s == "general") return ForestKind::general;
  if (s == "unrooted") return ForestKind::unrooted;
  throw Error(ErrorCode::parse_error, "unknown forest kind '" + std::string(s) + "'");
}

// Largest tree in a forest of n trees with m = lambda n nodes.
inline Prediction predict_forest_max(ForestKind kind, const WeightSpec& spec, double lambda, long long n) {
  const std::string q = "forest-max";
  if (!(lambda > 1.0)) return declined(q, "forest-max", "needs lambda > 1");
  const double nn = static_cast<double>(n);
  const double loglog = std::log(std::log(nn));
  Prediction p;
  p.quantity = q;
  p.cdf_of = "Y_(1)";
  auto finish = [&](double qq, double b, double loglog_coef) {
    const double L = -std::log(qq);
    const double A = std::log(nn) - loglog_coef * loglog + std::log(b);
    p.set("q", qq);
    p.set("b", b);
    p.set("gumbel_location", A / L);
    p.set("gumbel_scale", 1.0 / L);
    p.cdf = floor_gumbel_cdf(A, L);
  };
  switch (kind) {
    case ForestKind::rooted: {
      p.tag = "rooted-forest-gumbel";
      p.conditions = {"lambda > 1"};
      const double qq = (lambda - 1.0) / lambda * std::exp(1.0 / lambda);
      const double L = -std::log(qq);
      const double b = lambda * std::pow(L, 1.5) / (std::sqrt(2.0 * M_PI) * (lambda - 1.0) * (1.0 - qq));
      finish(qq, b, 1.5);
      return p;
    }
    case ForestKind::general: {
      p.tag = "forest-gumbel";
      if (spec.span() != 1) return declined(q, p.tag, "needs span 1");
      const auto law1 = canonical_law(spec, 1.0);
      if (law1.nu < 1.0) return declined(q, p.tag, "needs nu >= 1");
      if (!law1.finite_variance()) return declined(q, p.tag, "needs finite variance at lambda = 1");
      p.conditions = {"lambda > 1", "nu >= 1", "span 1", "finite variance"};
      const double t1 = law1.tau;
      const double t2 = tau_of(spec, 1.0 - 1.0 / lambda);
      const double qq = std::exp(std::log(t2) - std::log(phi(spec, t2)) + law1.log_phi_tau - std::log(t1));
      const double L = -std::log(qq);
      const double b = t1 * std::pow(L, 1.5) / (t2 * std::sqrt(2.0 * M_PI * law1.sigma2) * (1.0 - qq));
      p.set("tau1", t1);
      p.set("tau2", t2);
      finish(qq, b, 1.5);
      return p;
    }
    case ForestKind::unrooted: {
      if (lambda < 2.0) {
        p.tag = "unrooted-forest-gumbel";
        p.conditions = {"1 < lambda < 2"};
        const double qq = 2.0 * (lambda - 1.0) / lambda * std::exp(2.0 / lambda - 1.0);
        const double L = -std::log(qq);
        const double b = lambda * lambda * std::pow(L, 2.5) / (2.0 * std::sqrt(2.0 * M_PI) * (lambda - 1.0) * (1.0 - qq));
        finish(qq, b, 2.5);
        return p;
      }
      if (lambda == 2.0) {
        return declined(q, "unrooted-forest-critical",
                        "lambda = 2: Y_(j)/n^{2/3} has a point-process limit that is not implemented");
      }
      p.tag = "unrooted-forest-giant";
      p.conditions = {"lambda > 2"};
      const double c_prime = std::sqrt(2.0 / M_PI);
      const double alpha = 1.5;
      const double scale = std::pow(nn, 2.0 / 3.0);
      p.set("giant", (lambda - 2.0) * nn);
      p.set("giant_fraction", lambda - 2.0);
      p.set("alpha", alpha);
      p.set("c_prime", c_prime);
      p.set("second_scale", scale);
      p.set("stable_laplace_coefficient", std::pow(2.0, 2.5) / 3.0);
      p.cdf_of = "Y_(2)";
      p.cdf = [c_prime, alpha, scale](long long k) {
        if (k < 0) return 0.0;
        return std::exp(-(c_prime / alpha) * std::pow(static_cast<double>(k + 1) / scale, -alpha));
      };
      return p;
    }
  }
  return p;
}

namespace detail {

// log of the stable local-limit constant g(0) scaled back to the weights:
// Z(m, n) ~ const * Phi(rho)^n rho^-m * (scale in n).
inline double log_stable_constant(double c, double alpha, double phi_rho) {
  return (std::log(phi_rho) - std::log(c) - std::log(std::tgamma(-alpha))) / alpha -
         std::log(std::abs(std::tgamma(-1.0 / alpha)));
}

}  // namespace detail

// Asymptotics of Z(m, n) for the allocation model; each item is emitted only
// when its hypotheses hold.
inline Prediction predict_partition(const WeightSpec& spec, long long m, long long n) {
  Prediction p;
  p.quantity = "partition";
  p.tag = "partition-asymptotics";
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  const double lambda = mm / nn;
  if (spec.finite_support() && lambda >= static_cast<double>(spec.omega())) {
    return declined(p.quantity, p.tag, "needs lambda < omega");
  }
  if (spec.log_weight(0) == -kInf) {
    return declined(p.quantity, p.tag, "needs w_0 > 0 (shift the support first)");
  }
  const double rho = spec.rho();
  if (rho == 0.0) {
    p.set("log_z_over_n", kInf);
    p.conditions.push_back("rho = 0: (1/n) log Z(m,n) diverges");
    return p;
  }
  const auto law = canonical_law(spec, lambda);
  const double d = static_cast<double>(spec.span());
  const double lt = std::log(law.tau);
  p.set("tau", law.tau);
  p.set("phi_tau", law.phi_tau);
  p.set("log_z_over_n", law.log_phi_tau - lambda * lt);
  p.set("ratio_add_ball", std::exp(-d * lt));  // Z(m+d, n)/Z(m, n)
  p.set("ratio_add_box", law.phi_tau);         // Z(m, n+1)/Z(m, n)
  const bool window = detail::in_critical_window(law, m, n);
  const AllocRegime regime = window ? AllocRegime::critical : law.regime;
  const bool finite_variance = window ? !detail::infinite_variance_at_nu(spec) : law.finite_variance();
  if (regime == AllocRegime::critical) p.conditions.push_back("|m - nu n| <= sqrt(n): critical");
  if (regime == AllocRegime::subcritical || (regime == AllocRegime::critical && finite_variance)) {
    p.set("log_z_local", std::log(d) - 0.5 * std::log(2.0 * M_PI * law.sigma2 * nn) + nn * law.log_phi_tau - mm * lt);
  } else {
    p.skip("log_z_local", "needs lambda < nu, or lambda = nu with finite variance");
  }
  const auto tail = spec.tail();
  const bool power = tail && std::isfinite(rho) && tail->beta > 0.0;
  if (regime == AllocRegime::critical && power && tail->beta > 2.0 && tail->beta <= 3.0) {
    const double alpha = tail->beta - 1.0;
    const double lphi = law.at_boundary() ? law.log_phi_tau : detail::log_phi_at_rho(spec);
    const double base = nn * lphi - mm * std::log(rho);
    if (alpha < 2.0) {
      p.set("log_z_stable", detail::log_stable_constant(tail->c, alpha, std::exp(lphi)) + base - std::log(nn) / alpha);
    } else {
      p.set("log_z_stable", 0.5 * (lphi - std::log(M_PI * tail->c)) + base - 0.5 * std::log(nn * std::log(nn)));
    }
  } else {
    p.skip("log_z_stable", "needs lambda = nu and w_k ~ c k^{-alpha-1} rho^-k with 1 < alpha <= 2");
  }
  if (regime == AllocRegime::supercritical && power && tail->beta > 2.0) {
    p.set("log_z_condensed", std::log(tail->c) - tail->beta * std::log(lambda - law.nu) +
                                 (nn - 1.0) * law.log_phi_tau - mm * std::log(rho) + (1.0 - tail->beta) * std::log(nn));
  } else {
    p.skip("log_z_condensed", "needs lambda > nu and a power-law tail with beta > 2");
  }
  return p;
}

// Asymptotics of the tree partition function Z_n.
inline Prediction predict_tree_partition(const WeightSpec& spec, long long n) {
  require_tree_mode(spec);
  Prediction p;
  p.quantity = "zn";
  p.tag = "tree-partition-asymptotics";
  const double rho = spec.rho();
  if (rho == 0.0) return declined(p.quantity, p.tag, "rho = 0: Z_n grows faster than exponentially");
  const auto law = canonical_law(spec, 1.0);
  const double nn = static_cast<double>(n);
  const double d = static_cast<double>(spec.span());
  const double lt = std::log(law.tau);
  p.set("tau", law.tau);
  p.set("phi_tau", law.phi_tau);
  p.set("rho_z", law.rho_z);
  p.set("log_zn_over_n", law.log_phi_tau - lt);
  // Z_{n+d}/Z_n -> (Phi(tau)/tau)^d
  p.set("zn_ratio", std::exp(d * (law.log_phi_tau - lt)));
  if (law.nu >= 1.0 - kCriticalTol && law.finite_variance()) {
    p.set("log_zn", std::log(d) - 0.5 * std::log(2.0 * M_PI * law.sigma2) + nn * law.log_phi_tau + (1.0 - nn) * lt -
                        1.5 * std::log(nn));
  } else {
    p.skip("log_zn", "needs nu >= 1 and finite variance");
  }
  const auto tail = spec.tail();
  if (law.regime == AllocRegime::critical && !law.finite_variance() && tail && tail->beta > 2.0 && tail->beta <= 3.0) {
    const double alpha = tail->beta - 1.0;
    // tau = rho here; Z_n = Z(n-1, n)/n
    const double base = nn * law.log_phi_tau - (nn - 1.0) * std::log(rho) - std::log(nn);
    if (alpha < 2.0) {
      p.set("log_zn_stable", detail::log_stable_constant(tail->c, alpha, law.phi_tau) + base - std::log(nn) / alpha);
    } else {
      p.set("log_zn_stable",
            0.5 * (law.log_phi_tau - std::log(M_PI * tail->c)) + base - 0.5 * std::log(nn) - 0.5 * std::log(std::log(nn)));
    }
  } else {
    p.skip("log_zn_stable", "needs nu = 1, infinite variance and w_k ~ c k^{-alpha-1} rho^-k with 1 < alpha <= 2");
  }
  if (law.nu < 1.0 && tail && tail->beta > 2.0 && std::isfinite(rho)) {
    const double m = nn - 1.0;
    p.set("log_zn_condensed", std::log(tail->c) - tail->beta * std::log(m / nn - law.nu) + (nn - 1.0) * law.log_phi_tau -
                                  m * std::log(rho) + (1.0 - tail->beta) * std::log(nn) - std::log(nn));
  } else {
    p.skip("log_zn_condensed", "needs nu < 1 and a power-law tail with beta > 2");
  }
  return p;
}

}  // namespace simplygen
