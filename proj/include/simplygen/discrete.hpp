#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "simplygen/analysis.hpp"
#include "simplygen/error.hpp"
#include "simplygen/rng.hpp"

namespace simplygen {

inline constexpr long long kInfiniteDraw = -1;

// Walker/Vose alias table over k = 0..K, with optional buckets for the mass
// beyond K and for an atom at infinity.
class DiscreteSampler {
 public:
  static constexpr long long kMaxTable = 1LL << 20;
  static constexpr long long kBoundaryTable = 1LL << 12;

  // Point masses p_0..p_K; no tail.
  static DiscreteSampler from_pmf(const std::vector<double>& p) {
    DiscreteSampler s;
    s.K_ = static_cast<long long>(p.size()) - 1;
    s.build(p, 0.0, 0.0);
    s.log_mass_ = [p](long long k) {
      return k >= 0 && k < static_cast<long long>(p.size()) ? std::log(p[static_cast<std::size_t>(k)]) : -kInf;
    };
    return s;
  }

  // Point masses p_0..p_K plus an atom at infinity.
  static DiscreteSampler from_pmf_with_infinity(std::vector<double> p, double infinity_mass) {
    if (p.empty()) p.push_back(0.0);
    DiscreteSampler s;
    s.K_ = static_cast<long long>(p.size()) - 1;
    s.build(p, 0.0, infinity_mass);
    s.log_mass_ = [p](long long k) {
      return k >= 0 && k < static_cast<long long>(p.size()) ? std::log(p[static_cast<std::size_t>(k)]) : -kInf;
    };
    return s;
  }

  // Offspring law pi of a canonical law.
  static DiscreteSampler offspring(const CanonicalLaw& law) {
    return from_law(law, 0, 0.0);
  }

  // k pi_k / mu (size-biased), or k pi_k with an atom 1 - mu at infinity.
  static DiscreteSampler size_biased(const CanonicalLaw& law, bool atom_at_infinity) {
    if (!(law.mu > 0.0)) throw Error(ErrorCode::invalid_argument, "size-biasing needs mu > 0");
    const double infinity_mass = atom_at_infinity ? std::max(0.0, 1.0 - law.mu) : 0.0;
    return from_law(law, 1, infinity_mass);
  }

  long long sample(Rng& rng) const {
    // one 64-bit draw: the high word of r*size picks the column, the low word
    // is the uniform used against that column's threshold
    const __uint128_t p = static_cast<__uint128_t>(rng.bits()) * threshold_.size();
    const auto i = static_cast<std::size_t>(p >> 64);
    const std::uint64_t j = static_cast<std::uint64_t>(p) < threshold_[i] ? i : alias_[i];
    const auto k = static_cast<long long>(j);
    if (k <= K_) return k;
    if (k == K_ + 1 && tail_bucket_) return sample_tail(rng);
    return kInfiniteDraw;
  }

  long long table_size() const { return K_ + 1; }
  double log_mass(long long k) const { return log_mass_(k); }
  // Largest point mass over the whole support, relative to the total mass.
  double max_mass() const { return max_mass_; }

 private:
  static DiscreteSampler from_law(const CanonicalLaw& law, int j, double infinity_mass) {
    DiscreteSampler s;
    const double log_norm = j == 0 ? 0.0 : std::log(law.mu);
    const double scale_inf = j == 0 ? 0.0 : (infinity_mass > 0.0 ? 0.0 : log_norm);
    // with an atom at infinity the masses k pi_k are left unnormalized
    s.log_mass_ = [law, j, scale_inf](long long k) {
      if (k < 0) return -kInf;
      if (j == 1 && k == 0) return -kInf;
      double v = law.log_pi(k);
      if (j == 1) v += std::log(static_cast<double>(k)) - scale_inf;
      return v;
    };
    auto tail_beyond = [&](long long K) -> double {
      if (law.tau == 0.0) return 0.0;
      double l;
      try {
        l = log_series(law.spec, law.tau, j, K + 1);
      } catch (const BoundaryImprecise& e) {
        l = std::log(e.estimate());
      }
      return std::exp(l - law.log_phi_tau - scale_inf);
    };
    const WeightSpec& spec = law.spec;
    long long K;
    double tail = 0.0;
    if (law.tau == 0.0) {
      K = spec.alpha_min();
    } else if (spec.finite_support()) {
      K = spec.omega();
    } else if (law.at_boundary() && spec.tail()) {
      // a power tail never gets below 2^-53; the Pareto fallback takes k > K
      K = kBoundaryTable;
      tail = tail_beyond(K);
    } else {
      K = 64;
      tail = tail_beyond(K);
      while (tail > 0x1.0p-53 && K < kMaxTable) {
        K *= 2;
        tail = tail_beyond(K);
      }
    }
    s.K_ = K;
    std::vector<double> p(static_cast<std::size_t>(K + 1));
    for (long long k = 0; k <= K; ++k) p[static_cast<std::size_t>(k)] = std::exp(s.log_mass_(k));
    if (tail > 0.0) {
      s.tail_bucket_ = true;
      s.tail_mass_ = tail;
      s.q_ = spec.rho_known() && std::isfinite(spec.rho()) ? law.tau / spec.rho() : 0.0;
      if (s.q_ >= 1.0 - 1e-15) {
        const auto pt = spec.tail();
        if (!pt) throw Error(ErrorCode::invalid_argument, "power-tail metadata required at the boundary");
        s.pareto_beta_ = pt->beta - j;
        if (s.pareto_beta_ <= 1.0) throw Error(ErrorCode::invalid_argument, "tail mass is not summable");
        s.pareto_bound_ = s.envelope_bound();
      }
    }
    s.build(p, tail, infinity_mass);
    return s;
  }

  // sup_{k>K} mass(k) / int_k^{k+1} y^{-beta} dy over a geometric grid, with margin.
  double envelope_bound() const {
    double best = 0.0;
    for (double x = static_cast<double>(K_ + 1); x < 1e15; x = std::ceil(x * 1.05)) {
      const auto k = static_cast<long long>(x);
      best = std::max(best, std::exp(log_mass_(k)) / pareto_cell(k));
    }
    return best * 1.001;
  }

  double pareto_cell(long long k) const {
    const double b1 = pareto_beta_ - 1.0;
    const double x = static_cast<double>(k);
    return (std::pow(x, -b1) - std::pow(x + 1.0, -b1)) / b1;
  }

  long long sample_tail(Rng& rng) const {
    if (pareto_beta_ > 0.0) {
      const double b1 = pareto_beta_ - 1.0;
      for (;;) {
        const double u = 1.0 - rng.uniform();
        const double y = static_cast<double>(K_ + 1) * std::pow(u, -1.0 / b1);
        if (!(y < 9e18)) continue;
        const auto k = static_cast<long long>(y);
        if (rng.uniform() * pareto_bound_ * pareto_cell(k) <= std::exp(log_mass_(k))) return k;
      }
    }
    // sequential inversion for geometrically decaying tails
    double u = rng.uniform() * tail_mass_;
    long long k = K_ + 1;
    for (;; ++k) {
      const double m = std::exp(log_mass_(k));
      u -= m;
      if (u <= 0.0) return k;
      if (m < tail_mass_ * 1e-30 && k > 2 * K_) return k;
    }
  }

  void build(const std::vector<double>& p, double tail, double infinity_mass) {
    std::vector<double> w(p);
    if (tail_bucket_) w.push_back(tail);
    if (infinity_mass > 0.0) {
      if (!tail_bucket_) w.push_back(0.0);
      w.push_back(infinity_mass);
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorCode::empty_support, "distribution has no mass");
    max_mass_ = 0.0;
    for (double x : p) max_mass_ = std::max(max_mass_, x / total);
    const std::size_t n = w.size();
    std::vector<double> prob(n, 0.0);
    alias_.assign(n, 0);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      scaled[i] = w[i] / total * static_cast<double>(n);
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      const auto s = small.back();
      small.pop_back();
      const auto l = large.back();
      prob[s] = scaled[s];
      alias_[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      if (scaled[l] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    for (auto i : large) prob[i] = 1.0, alias_[i] = i;
    for (auto i : small) prob[i] = 1.0, alias_[i] = i;
    threshold_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      threshold_[i] = prob[i] >= 1.0 ? ~std::uint64_t{0} : static_cast<std::uint64_t>(std::ldexp(prob[i], 64));
    }
  }

  long long K_ = 0;
  bool tail_bucket_ = false;
  double tail_mass_ = 0.0;
  double q_ = 0.0;
  double pareto_beta_ = 0.0;
  double pareto_bound_ = 0.0;
  double max_mass_ = 0.0;
  std::vector<std::uint64_t> threshold_;
  std::vector<std::uint32_t> alias_;
  std::function<double(long long)> log_mass_;
};

}  // namespace simplygen
