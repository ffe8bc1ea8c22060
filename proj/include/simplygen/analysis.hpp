#pragma once

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "simplygen/error.hpp"
#include "simplygen/weights.hpp"

namespace simplygen {

namespace detail {

// log(e^a + e^b)
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

// Upper incomplete gamma for any real a, z > 0.
inline double upper_gamma(double a, double z) {
  if (a > 0.0) return boost::math::tgamma(a, z);
  const double frac = a - std::floor(a);
  double s = frac;
  double g;
  if (frac == 0.0) {
    g = boost::math::expint(1, z);
    s = 0.0;
  } else {
    g = boost::math::tgamma(s, z);
  }
  // Gamma(s-1, z) = (Gamma(s, z) - z^{s-1} e^{-z}) / (s-1)
  while (s - 1.0 >= a - 1e-12) {
    g = (g - std::pow(z, s - 1.0) * std::exp(-z)) / (s - 1.0);
    s -= 1.0;
  }
  return g;
}

// Online log-sum with a running maximum and compensated summation.
struct LogAccumulator {
  double scale = -kInf;
  double sum = 0.0;
  double comp = 0.0;
  void add(double lterm) {
    if (lterm == -kInf) return;
    double x;
    if (lterm > scale) {
      const double r = std::exp(scale - lterm);
      sum *= r;
      comp *= r;
      scale = lterm;
      x = 1.0;
    } else {
      x = std::exp(lterm - scale);
    }
    const double t = sum + x;
    comp += std::abs(sum) >= x ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  double value() const { return scale == -kInf ? -kInf : scale + std::log(sum + comp); }
};

inline double log_term(const WeightSpec& spec, long long k, double log_t, int j) {
  const double lw = spec.log_weight(k);
  if (lw == -kInf) return -kInf;
  if (j > 0 && k == 0) return -kInf;
  double v = lw;
  if (k > 0) v += static_cast<double>(k) * log_t;
  if (j > 0) v += static_cast<double>(j) * std::log(static_cast<double>(k));
  return v;
}

inline constexpr long long kSeriesCap = 1LL << 15;
inline constexpr long long kBoundaryLevel = 1LL << 14;

inline double boundary_log_series(const WeightSpec& spec, double t, int j, long long k0, double tol) {
  const auto tail = spec.tail();
  if (!tail) throw Error(ErrorCode::invalid_argument, "boundary evaluation needs a declared power tail");
  const double s = tail->beta - j;
  if (s <= 1.0) return kInf;
  const double log_t = std::log(t);
  const double offset = std::log(tail->c);
  // T(K) = S_K + c * sum_{k>K} k^{-s}, with an Euler-Maclaurin tail.
  auto em_tail = [&](double K) {
    return std::pow(K, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(K, -s) + s / 12.0 * std::pow(K, -s - 1.0);
  };
  const long long K1 = std::max(kBoundaryLevel, 4 * k0 + 64);
  const long long K2 = 2 * K1, K3 = 4 * K1;
  double partial = 0.0, s1 = 0.0, s2 = 0.0;
  for (long long k = k0; k <= K3; ++k) {
    const double lt = log_term(spec, k, log_t, j);
    if (lt != -kInf) partial += std::exp(lt - offset);
    if (k == K1) s1 = partial;
    if (k == K2) s2 = partial;
  }
  const double s3 = partial;
  const double t1 = s1 + em_tail(static_cast<double>(K1));
  const double t2 = s2 + em_tail(static_cast<double>(K2));
  const double t3 = s3 + em_tail(static_cast<double>(K3));
  const double f = std::pow(2.0, s);
  const double r1 = (f * t2 - t1) / (f - 1.0);
  const double r2 = (f * t3 - t2) / (f - 1.0);
  const double err = std::abs(r2 - r1);
  if (!(r2 > 0.0)) return -kInf;
  if (err > tol * r2) {
    throw BoundaryImprecise(std::exp(offset) * r2, std::exp(offset) * s3, std::exp(offset) * err);
  }
  return offset + std::log(r2);
}

}  // namespace detail

inline constexpr double kDefaultTol = 1e-15;
// Boundary sums at t = rho are extrapolated and cannot reach machine precision.
inline constexpr double kBoundaryTol = 1e-10;

// log sum_{k >= k0} k^j w_k t^k, possibly +inf. Tolerance is relative.
inline double log_series(const WeightSpec& spec, double t, int j, long long k0 = 0, double tol = kDefaultTol) {
  if (!(t >= 0.0)) throw Error(ErrorCode::invalid_argument, "t must be nonnegative");
  if (k0 < 0) k0 = 0;
  if (t == 0.0) {
    if (k0 > 0 || j > 0) return -kInf;
    return spec.log_weight(0);
  }
  const double log_t = std::log(t);
  const bool has_rho = spec.rho_known();
  const double rho = has_rho ? spec.rho() : kInf;
  if (spec.finite_support()) {
    if (t > rho) return kInf;
    detail::LogAccumulator acc;
    for (long long k = k0; k <= spec.omega(); ++k) acc.add(detail::log_term(spec, k, log_t, j));
    return acc.value();
  }
  if (t > rho) return kInf;
  if (t == rho) return detail::boundary_log_series(spec, t, j, k0, std::max(tol, kBoundaryTol));

  const double q = std::isinf(rho) ? 0.0 : t / rho;
  const double log_tol = std::log(tol);
  detail::LogAccumulator acc;
  double prev = -kInf;
  long long k = k0;
  for (; k < k0 + detail::kSeriesCap; ++k) {
    const double lt = detail::log_term(spec, k, log_t, j);
    acc.add(lt);
    if (lt != -kInf && prev != -kInf) {
      const double r = std::exp(lt - prev);
      const double b = std::max(r, q);
      if (b < 1.0 && lt + std::log(b / (1.0 - b)) < log_tol + acc.value()) return acc.value();
    }
    prev = lt;
  }
  const auto tail = spec.tail();
  if (!tail || q == 0.0) {
    throw BoundaryImprecise(std::exp(acc.value()), std::exp(acc.value()), kInf);
  }
  // Tail from K on with w_k t^k k^j = c k^{-s} q^k (1 + g/k + h/k^2 + ...), g and h read off
  // the terms at K and K/2: integrate from K - 1/2 and add f'(K - 1/2)/24.
  const double s = tail->beta - j;
  const double L = -std::log(q);
  const double K = static_cast<double>(k);
  const double lc = std::log(tail->c);
  auto excess = [&](long long i) {
    const double lt = detail::log_term(spec, i, log_t, j);
    if (lt == -kInf) return 0.0;
    const double x = static_cast<double>(i);
    return std::expm1(lt - (lc - s * std::log(x) + x * std::log(q)));
  };
  const double e1 = excess(k), e2 = excess(k / 2);
  const double h = 0.5 * (e2 - 2.0 * e1) * K * K;
  const double g = (e1 - h / (K * K)) * K;
  const double x0 = K - 0.5;
  const double z = x0 * L;
  double rest = std::pow(L, s - 1.0) * detail::upper_gamma(1.0 - s, z) +
                g * std::pow(L, s) * detail::upper_gamma(-s, z) +
                h * std::pow(L, s + 1.0) * detail::upper_gamma(-s - 1.0, z);
  rest -= std::pow(x0, -s) * std::exp(-z) * (s / x0 + L) / 24.0;
  if (rest > 0.0) acc.add(lc + std::log(rest));
  return acc.value();
}

inline double phi(const WeightSpec& spec, double t, double tol = kDefaultTol) {
  return std::exp(log_series(spec, t, 0, 0, tol));
}

inline double psi(const WeightSpec& spec, double t, double tol = kDefaultTol) {
  if (t == 0.0) return static_cast<double>(spec.alpha_min());
  const double l0 = log_series(spec, t, 0, 0, tol);
  if (l0 == kInf) return kInf;
  const double l1 = log_series(spec, t, 1, 0, tol);
  if (l1 == kInf) return kInf;
  return std::exp(l1 - l0);
}

namespace detail {

inline double compute_nu(const WeightSpec& spec) {
  if (!spec.rho_known()) {
    return spec.finite_support() ? static_cast<double>(spec.omega()) : kInf;
  }
  const double rho = spec.rho();
  if (rho == 0.0) return static_cast<double>(spec.alpha_min());
  if (std::isinf(rho)) return spec.finite_support() ? static_cast<double>(spec.omega()) : kInf;
  try {
    return psi(spec, rho);
  } catch (const BoundaryImprecise&) {
    // fall back to the extrapolated estimates, accepting their error
    auto estimate = [&](int j) {
      try {
        return std::exp(log_series(spec, rho, j));
      } catch (const BoundaryImprecise& e) {
        return e.estimate();
      }
    };
    const double p0 = estimate(0);
    if (std::isinf(p0)) return kInf;
    return estimate(1) / p0;
  }
}

}  // namespace detail

inline double nu(const WeightSpec& spec) {
  return spec.memo_nu([&] { return detail::compute_nu(spec); });
}

// Root of Psi(tau) = x in [0, rho]; rho when x exceeds nu.
inline double tau_of(const WeightSpec& spec, double x, double tol = 1e-13) {
  if (spec.finite_support() && x >= static_cast<double>(spec.omega())) {
    throw Error(ErrorCode::capacity_exceeded,
                "mean " + std::to_string(x) + " is not below omega=" + std::to_string(spec.omega()));
  }
  const double rho = spec.rho();
  const double amin = static_cast<double>(spec.alpha_min());
  if (x < amin) throw Error(ErrorCode::invalid_argument, "mean is below the minimum of the support");
  if (x == amin || rho == 0.0) return 0.0;
  if (x >= nu(spec)) return rho;
  if (std::isinf(rho)) {
    double lo = 0.0, hi = 1.0;
    while (psi(spec, hi) <= x) {
      lo = hi;
      hi *= 2.0;
    }
    for (int it = 0; it < 400 && hi - lo > tol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (psi(spec, mid) <= x) lo = mid;
      else hi = mid;
    }
    return 0.5 * (lo + hi);
  }
  // Illinois iteration in v = -log(1 - t/rho), where psi flattens out towards nu
  // instead of steepening; every evaluation near rho is a long series.
  auto t_of = [&](double v) { return -rho * std::expm1(-v); };
  auto f = [&](double v) { return psi(spec, t_of(v)) - x; };
  const double v_top = 36.0;  // 1 - t/rho ~ 2e-16
  double lo = 0.0, hi = 1.0;
  double flo = amin - x, fhi = f(hi);
  while (fhi <= 0.0 && hi < v_top) {
    lo = hi;
    flo = fhi;
    hi = std::min(2.0 * hi, v_top);
    fhi = hi == v_top ? nu(spec) - x : f(hi);
  }
  if (fhi <= 0.0) return t_of(hi);
  int side = 0, run = 0;
  for (int it = 0; it < 400; ++it) {
    if (hi - lo <= tol * hi || std::nextafter(t_of(lo), kInf) >= t_of(hi)) break;
    double v = run >= 2 ? 0.5 * (lo + hi) : hi - fhi * (hi - lo) / (fhi - flo);
    if (!(v > lo && v < hi)) v = 0.5 * (lo + hi);
    const double fv = f(v);
    if (fv == 0.0) return t_of(v);
    const int now = fv < 0.0 ? -1 : 1;
    run = now == side ? run + 1 : 0;
    if (now < 0) {
      lo = v;
      flo = fv;
      if (side == -1) fhi *= 0.5;
    } else {
      hi = v;
      fhi = fv;
      if (side == 1) flo *= 0.5;
    }
    side = now;
  }
  return 0.5 * (t_of(lo) + t_of(hi));
}

enum class TreeCase { Ia, Ib, II, III };
enum class AllocRegime { subcritical, critical, supercritical };

inline std::string_view to_string(TreeCase c) {
  switch (c) {
    case TreeCase::Ia: return "Ia";
    case TreeCase::Ib: return "Ib";
    case TreeCase::II: return "II";
    case TreeCase::III: return "III";
  }
  return "?";
}

inline std::string_view to_string(AllocRegime r) {
  switch (r) {
    case AllocRegime::subcritical: return "subcritical";
    case AllocRegime::critical: return "critical";
    case AllocRegime::supercritical: return "supercritical";
  }
  return "?";
}

inline constexpr double kCriticalTol = 1e-9;

struct CanonicalLaw {
  WeightSpec spec;
  double lambda = 1.0;
  double tau = 0.0;
  double log_phi_tau = 0.0;
  double phi_tau = 1.0;
  double mu = 0.0;
  double nu = 0.0;
  double sigma2 = 0.0;
  double rho_z = 0.0;
  AllocRegime regime = AllocRegime::subcritical;

  double log_pi(long long k) const {
    if (tau == 0.0) {
      return k == spec.alpha_min() ? 0.0 : -kInf;
    }
    const double lw = spec.log_weight(k);
    if (lw == -kInf) return -kInf;
    return lw + static_cast<double>(k) * std::log(tau) - log_phi_tau;
  }
  double pi(long long k) const { return std::exp(log_pi(k)); }

  // P(xi > k)
  double tail(long long k) const {
    if (tau == 0.0) return k < spec.alpha_min() ? 1.0 : 0.0;
    if (k < 0) return 1.0;
    double l;
    try {
      l = log_series(spec, tau, 0, k + 1);
    } catch (const BoundaryImprecise& e) {
      l = std::log(e.estimate());
    }
    return std::min(1.0, std::exp(l - log_phi_tau));
  }

  bool finite_variance() const { return std::isfinite(sigma2); }
  bool at_boundary() const { return spec.rho_known() && tau == spec.rho(); }
};

inline CanonicalLaw canonical_law(const WeightSpec& spec, double lambda, double tol = 1e-13) {
  CanonicalLaw law{spec};
  law.lambda = lambda;
  law.nu = nu(spec);
  law.tau = tau_of(spec, lambda, tol);
  const double rho = spec.rho();
  auto eval = [&](int j) {
    try {
      return log_series(spec, law.tau, j);
    } catch (const BoundaryImprecise& e) {
      return std::log(e.estimate());
    }
  };
  if (law.tau == 0.0) {
    law.log_phi_tau = spec.log_weight(spec.alpha_min());
    law.phi_tau = std::exp(law.log_phi_tau);
    law.mu = static_cast<double>(spec.alpha_min());
    law.sigma2 = 0.0;
    if (spec.alpha_min() > 0) {
      law.log_phi_tau = -kInf;
      law.phi_tau = 0.0;
    }
    law.rho_z = 0.0;
  } else {
    law.log_phi_tau = eval(0);
    law.phi_tau = std::exp(law.log_phi_tau);
    const double l1 = eval(1);
    const double l2 = eval(2);
    law.mu = (law.tau == rho) ? std::min(law.nu, std::exp(l1 - law.log_phi_tau)) : std::exp(l1 - law.log_phi_tau);
    if (law.tau < rho) law.mu = std::min(law.mu, lambda);
    law.sigma2 = (l2 == kInf) ? kInf : std::max(0.0, std::exp(l2 - law.log_phi_tau) - law.mu * law.mu);
    law.rho_z = std::exp(std::log(law.tau) - law.log_phi_tau);
  }
  if (std::abs(lambda - law.nu) <= kCriticalTol * std::max(1.0, lambda)) law.regime = AllocRegime::critical;
  else if (lambda < law.nu) law.regime = AllocRegime::subcritical;
  else law.regime = AllocRegime::supercritical;
  return law;
}

inline void require_tree_mode(const WeightSpec& spec) {
  if (spec.log_weight(0) == -kInf) throw Error(ErrorCode::not_tree_mode, "tree mode needs w_0 > 0");
  if (spec.finite_support() && spec.omega() < 2) {
    throw Error(ErrorCode::not_tree_mode, "tree mode needs some w_k > 0 with k >= 2");
  }
}

struct Classification {
  TreeCase tree_case = TreeCase::Ia;
  bool finite_variance = true;
  double nu = 0.0;
  double tau = 0.0;
  double sigma2 = 0.0;

  std::string label() const {
    std::string s(to_string(tree_case));
    if (tree_case == TreeCase::Ia || tree_case == TreeCase::Ib) s += finite_variance ? " I_alpha" : " I_beta";
    return s;
  }
};

inline Classification classify(const WeightSpec& spec, double tol = 1e-13) {
  require_tree_mode(spec);
  const CanonicalLaw law = canonical_law(spec, 1.0, tol);
  Classification c;
  c.nu = law.nu;
  c.tau = law.tau;
  c.sigma2 = law.sigma2;
  c.finite_variance = law.finite_variance();
  if (law.nu == 0.0) c.tree_case = TreeCase::III;
  else if (std::abs(law.nu - 1.0) <= kCriticalTol && law.at_boundary()) c.tree_case = TreeCase::Ib;
  else if (law.nu > 1.0) c.tree_case = TreeCase::Ia;
  else c.tree_case = TreeCase::II;
  return c;
}

}  // namespace simplygen
