#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplygen/error.hpp"
#include "simplygen/rational.hpp"

namespace simplygen {

inline constexpr long long kUnbounded = std::numeric_limits<long long>::max();
inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Family {
  uniform,
  geometric,
  poisson,
  binary_full,
  binary_pos,
  motzkin,
  dary,
  powerlaw,
  inv_factorial,
  factorial,
  factorial_pow,
  rooted_forest,
  unrooted_forest,
  loglaw,
  explicit_list,
};

inline std::string_view family_name(Family f) {
  switch (f) {
    case Family::uniform: return "uniform";
    case Family::geometric: return "geometric";
    case Family::poisson: return "poisson";
    case Family::binary_full: return "binary_full";
    case Family::binary_pos: return "binary_pos";
    case Family::motzkin: return "motzkin";
    case Family::dary: return "dary";
    case Family::powerlaw: return "powerlaw";
    case Family::inv_factorial: return "inv_factorial";
    case Family::factorial: return "factorial";
    case Family::factorial_pow: return "factorial_pow";
    case Family::rooted_forest: return "rooted_forest";
    case Family::unrooted_forest: return "unrooted_forest";
    case Family::loglaw: return "loglaw";
    case Family::explicit_list: return "explicit";
  }
  return "unknown";
}

// A real parameter that remembers its exact rational value when it has one.
struct Param {
  double value = 0.0;
  std::optional<Rational> exact;

  Param() = default;
  Param(double v) : value(v) {}
  Param(int v) : value(v), exact(Rational(v)) {}
  Param(const Rational& r) : value(to_double(r)), exact(r) {}

  static Param parse(std::string_view text) {
    if (auto r = parse_rational(text)) return Param(*r);
    std::string s(text);
    if (s == "inf" || s == "infinity") return Param(kInf);
    try {
      std::size_t used = 0;
      double v = std::stod(s, &used);
      if (used == s.size()) return Param(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::parse_error, "not a number: '" + s + "'");
  }

  bool is_integer() const { return exact && boost::multiprecision::denominator(*exact) == 1; }
};

// Asymptotic shape w_k ~ c k^{-beta} rho^{-k}.
struct PowerTail {
  double c = 1.0;
  double beta = 0.0;
};

class WeightSpec {
 public:
  static WeightSpec uniform() { return WeightSpec(Family::uniform, Param(1)); }
  static WeightSpec geometric(Param p) {
    if (!(p.value > 0.0 && p.value < 1.0))
      throw Error(ErrorCode::invalid_argument, "geometric needs 0 < p < 1");
    return WeightSpec(Family::geometric, std::move(p));
  }
  static WeightSpec poisson(Param a) {
    if (!(a.value > 0.0)) throw Error(ErrorCode::invalid_argument, "poisson needs a > 0");
    return WeightSpec(Family::poisson, std::move(a));
  }
  static WeightSpec binary_full() { return WeightSpec(Family::binary_full, Param(2)); }
  static WeightSpec binary_pos() { return WeightSpec(Family::binary_pos, Param(2)); }
  static WeightSpec motzkin() { return WeightSpec(Family::motzkin, Param(2)); }
  static WeightSpec dary(int d) {
    if (d < 1) throw Error(ErrorCode::invalid_argument, "dary needs d >= 1");
    return WeightSpec(Family::dary, Param(d));
  }
  static WeightSpec powerlaw(Param beta) { return WeightSpec(Family::powerlaw, std::move(beta)); }
  static WeightSpec inv_factorial() { return WeightSpec(Family::inv_factorial, Param(1)); }
  static WeightSpec factorial() { return WeightSpec(Family::factorial, Param(1)); }
  static WeightSpec factorial_pow(Param alpha) {
    return WeightSpec(Family::factorial_pow, std::move(alpha));
  }
  static WeightSpec rooted_forest() { return WeightSpec(Family::rooted_forest, Param(1)); }
  static WeightSpec unrooted_forest() { return WeightSpec(Family::unrooted_forest, Param(1)); }
  static WeightSpec loglaw() { return WeightSpec(Family::loglaw, Param(1)); }

  // rho is the declared radius of convergence; nullopt leaves it unknown.
  static WeightSpec explicit_exact(std::vector<Rational> w, std::optional<double> rho) {
    std::vector<double> logs;
    logs.reserve(w.size());
    for (const auto& x : w) {
      if (x < 0) throw Error(ErrorCode::invalid_argument, "weights must be nonnegative");
      logs.push_back(log_rational(x));
    }
    WeightSpec s(Family::explicit_list, Param(0), std::move(logs), std::move(w), rho);
    return s;
  }
  static WeightSpec explicit_real(const std::vector<double>& w, std::optional<double> rho) {
    std::vector<double> logs;
    logs.reserve(w.size());
    for (double x : w) {
      if (!(x >= 0.0)) throw Error(ErrorCode::invalid_argument, "weights must be nonnegative");
      logs.push_back(std::log(x));
    }
    return WeightSpec(Family::explicit_list, Param(0), std::move(logs), {}, rho);
  }

  // Weights given by their logarithms (-inf for zero), e.g. derived sequences
  // too large for doubles.
  static WeightSpec explicit_log(std::vector<double> logs, std::optional<double> rho) {
    return WeightSpec(Family::explicit_list, Param(0), std::move(logs), {}, rho);
  }

  // Builtin family by name; `param` is p, a, d, beta or alpha as appropriate.
  static WeightSpec builtin(std::string_view name, std::optional<Param> param = std::nullopt) {
    auto need = [&](const char* what) -> Param {
      if (!param) throw Error(ErrorCode::invalid_argument, std::string(name) + " needs " + what);
      return *param;
    };
    if (name == "uniform") return uniform();
    if (name == "geometric") return geometric(need("p"));
    if (name == "poisson") return poisson(need("a"));
    if (name == "binary_full") return binary_full();
    if (name == "binary_pos") return binary_pos();
    if (name == "motzkin") return motzkin();
    if (name == "dary") {
      Param d = need("d");
      if (!d.is_integer()) throw Error(ErrorCode::invalid_argument, "dary needs an integer d");
      return dary(static_cast<int>(d.value));
    }
    if (name == "powerlaw") return powerlaw(need("beta"));
    if (name == "inv_factorial") return inv_factorial();
    if (name == "factorial") return factorial();
    if (name == "factorial_pow") return factorial_pow(need("alpha"));
    if (name == "rooted_forest") return rooted_forest();
    if (name == "unrooted_forest") return unrooted_forest();
    if (name == "loglaw") return loglaw();
    throw Error(ErrorCode::invalid_argument, "unknown family '" + std::string(name) + "'");
  }

  Family family() const { return family_; }
  const Param& param() const { return param_; }
  const Param& tilt_a() const { return a_; }
  const Param& tilt_b() const { return b_; }
  long long shift() const { return shift_; }

  double log_weight(long long k) const {
    if (k < 0) return -kInf;
    if (k > omega_) return -kInf;
    const double base = base_log(k + shift_);
    if (base == -kInf) return -kInf;
    return base + log_a_ + static_cast<double>(k) * log_b_;
  }
  double weight(long long k) const { return std::exp(log_weight(k)); }

  bool has_exact_weights() const {
    if (a_.value != 1.0 && !a_.exact) return false;
    if (b_.value != 1.0 && !b_.exact) return false;
    switch (family_) {
      case Family::geometric:
      case Family::poisson: return param_.exact.has_value();
      case Family::powerlaw:
      case Family::factorial_pow: return param_.is_integer();
      case Family::explicit_list: return exact_table_ != nullptr;
      default: return true;
    }
  }

  std::optional<Rational> exact_weight(long long k) const {
    if (!has_exact_weights()) return std::nullopt;
    if (k < 0 || k > omega_) return Rational(0);
    Rational base = exact_base(k + shift_);
    if (base == 0) return base;
    if (a_.exact) base *= *a_.exact;
    if (b_.exact) base *= pow(*b_.exact, k);
    return base;
  }

  bool rho_known() const { return rho_.has_value(); }
  double rho() const {
    if (!rho_) throw Error(ErrorCode::rho_required, "explicit weight spec has no declared rho");
    return *rho_;
  }
  long long omega() const { return omega_; }
  bool finite_support() const { return omega_ != kUnbounded; }
  long long alpha_min() const { return alpha_min_; }
  long long span() const { return span_; }
  std::optional<PowerTail> tail() const { return tail_; }

  std::string name() const {
    std::ostringstream os;
    os << family_name(family_);
    switch (family_) {
      case Family::geometric:
      case Family::poisson:
      case Family::dary:
      case Family::powerlaw:
      case Family::factorial_pow:
        os << "(" << (param_.exact ? to_string(*param_.exact) : std::to_string(param_.value)) << ")";
        break;
      default: break;
    }
    if (a_.value != 1.0 || b_.value != 1.0) os << " tilted(a=" << a_.value << ",b=" << b_.value << ")";
    if (shift_ != 0) os << " shifted(" << shift_ << ")";
    return os.str();
  }

  // nu is computed once per spec and shared by its tilts, which have the same nu.
  template <class Fn>
  double memo_nu(Fn compute) const {
    std::call_once(nu_memo_->once, [&] { nu_memo_->value = compute(); });
    return nu_memo_->value;
  }

  friend WeightSpec tilt(const WeightSpec& spec, const Param& a, const Param& b);
  friend std::pair<WeightSpec, long long> shift_support(const WeightSpec& spec);

 private:
  static constexpr long long kCache = 4096;

  WeightSpec(Family f, Param p) : family_(f), param_(std::move(p)) { init_builtin(); }
  WeightSpec(Family f, Param p, std::vector<double> logs, std::vector<Rational> exact,
             std::optional<double> rho)
      : family_(f), param_(std::move(p)), rho_(rho) {
    cache_ = std::make_shared<const std::vector<double>>(std::move(logs));
    if (!exact.empty()) exact_table_ = std::make_shared<const std::vector<Rational>>(std::move(exact));
    init_explicit();
  }

  void init_builtin() {
    const double e_inv = std::exp(-1.0);
    const double rt2pi = 1.0 / std::sqrt(2.0 * M_PI);
    omega_ = kUnbounded;
    alpha_min_ = 0;
    span_ = 1;
    switch (family_) {
      case Family::uniform: rho_ = 1.0; tail_ = PowerTail{1.0, 0.0}; break;
      case Family::geometric:
        rho_ = 1.0 / (1.0 - param_.value);
        tail_ = PowerTail{param_.value, 0.0};
        break;
      case Family::poisson:
      case Family::inv_factorial: rho_ = kInf; break;
      case Family::binary_full: rho_ = kInf; omega_ = 2; span_ = 2; break;
      case Family::binary_pos:
      case Family::motzkin: rho_ = kInf; omega_ = 2; break;
      case Family::dary: rho_ = kInf; omega_ = static_cast<long long>(param_.value); break;
      case Family::powerlaw: rho_ = 1.0; tail_ = PowerTail{1.0, param_.value}; break;
      case Family::factorial: rho_ = 0.0; break;
      case Family::factorial_pow:
        if (param_.value > 0) {
          rho_ = 0.0;
        } else if (param_.value < 0) {
          rho_ = kInf;
        } else {
          rho_ = 1.0;
          tail_ = PowerTail{1.0, 0.0};
        }
        break;
      case Family::rooted_forest:
        rho_ = e_inv;
        alpha_min_ = 1;
        tail_ = PowerTail{rt2pi, 1.5};
        break;
      case Family::unrooted_forest:
        rho_ = e_inv;
        alpha_min_ = 1;
        tail_ = PowerTail{rt2pi, 2.5};
        break;
      case Family::loglaw: rho_ = 1.0; alpha_min_ = 1; tail_ = PowerTail{1.0, 1.0}; break;
      case Family::explicit_list: break;
    }
    std::vector<double> logs(static_cast<std::size_t>(kCache));
    for (long long k = 0; k < kCache; ++k) logs[static_cast<std::size_t>(k)] = formula_log(k);
    cache_ = std::make_shared<const std::vector<double>>(std::move(logs));
  }

  void init_explicit() {
    const auto& logs = *cache_;
    long long lo = -1, hi = -1;
    long long g = 0;
    for (std::size_t k = 0; k < logs.size(); ++k) {
      if (logs[k] == -kInf) continue;
      if (lo < 0) lo = static_cast<long long>(k);
      else g = std::gcd(g, static_cast<long long>(k) - lo);
      hi = static_cast<long long>(k);
    }
    if (lo < 0) throw Error(ErrorCode::empty_support, "all weights are zero");
    alpha_min_ = lo;
    omega_ = hi;
    span_ = g == 0 ? 1 : g;
  }

  double base_log(long long j) const {
    if (j < static_cast<long long>(cache_->size())) return (*cache_)[static_cast<std::size_t>(j)];
    if (family_ == Family::explicit_list) return -kInf;
    return formula_log(j);
  }

  double formula_log(long long j) const {
    const double x = static_cast<double>(j);
    switch (family_) {
      case Family::uniform: return 0.0;
      case Family::geometric: return std::log(param_.value) + x * std::log1p(-param_.value);
      case Family::poisson: return x * std::log(param_.value) - std::lgamma(x + 1.0);
      case Family::binary_full: return (j == 0 || j == 2) ? 0.0 : -kInf;
      case Family::binary_pos:
        if (j == 0 || j == 2) return 0.0;
        return j == 1 ? std::log(2.0) : -kInf;
      case Family::motzkin: return j <= 2 ? 0.0 : -kInf;
      case Family::dary: {
        const long long d = static_cast<long long>(param_.value);
        if (j > d) return -kInf;
        double c = 1.0;
        for (long long i = 1; i <= j; ++i) c = c * static_cast<double>(d - j + i) / static_cast<double>(i);
        return std::log(c);
      }
      case Family::powerlaw: return -param_.value * std::log(x + 1.0);
      case Family::inv_factorial: return -std::lgamma(x + 1.0);
      case Family::factorial: return std::lgamma(x + 1.0);
      case Family::factorial_pow: return param_.value * std::lgamma(x + 1.0);
      case Family::rooted_forest:
        return j == 0 ? -kInf : (x - 1.0) * std::log(x) - std::lgamma(x + 1.0);
      case Family::unrooted_forest:
        return j == 0 ? -kInf : (x - 2.0) * std::log(x) - std::lgamma(x + 1.0);
      case Family::loglaw: return j == 0 ? -kInf : -std::log(x);
      case Family::explicit_list: return -kInf;
    }
    return -kInf;
  }

  Rational exact_base(long long j) const {
    switch (family_) {
      case Family::uniform: return 1;
      case Family::geometric: return *param_.exact * pow(Rational(1) - *param_.exact, j);
      case Family::poisson: return pow(*param_.exact, j) / Rational(factorial_int(j));
      case Family::binary_full: return (j == 0 || j == 2) ? 1 : 0;
      case Family::binary_pos:
        if (j == 0 || j == 2) return 1;
        return j == 1 ? 2 : 0;
      case Family::motzkin: return j <= 2 ? 1 : 0;
      case Family::dary: {
        const long long d = static_cast<long long>(param_.value);
        if (j > d) return 0;
        return Rational(factorial_int(d) / (factorial_int(j) * factorial_int(d - j)));
      }
      case Family::powerlaw: {
        const long long beta = param_.exact->convert_to<long long>();
        return pow(Rational(j + 1), -beta);
      }
      case Family::inv_factorial: return Rational(1) / Rational(factorial_int(j));
      case Family::factorial: return Rational(factorial_int(j));
      case Family::factorial_pow: {
        const long long alpha = param_.exact->convert_to<long long>();
        return pow(Rational(factorial_int(j)), alpha);
      }
      case Family::rooted_forest:
        if (j == 0) return 0;
        return pow(Rational(j), j - 1) / Rational(factorial_int(j));
      case Family::unrooted_forest:
        if (j == 0) return 0;
        return pow(Rational(j), j - 2) / Rational(factorial_int(j));
      case Family::loglaw: return j == 0 ? Rational(0) : Rational(1, j);
      case Family::explicit_list:
        return j < static_cast<long long>(exact_table_->size()) ? (*exact_table_)[static_cast<std::size_t>(j)]
                                                                : Rational(0);
    }
    return 0;
  }

  Family family_;
  Param param_;
  std::shared_ptr<const std::vector<double>> cache_;
  std::shared_ptr<const std::vector<Rational>> exact_table_;
  std::optional<double> rho_;
  std::optional<PowerTail> tail_;
  long long omega_ = kUnbounded;
  long long alpha_min_ = 0;
  long long span_ = 1;
  Param a_{1}, b_{1};
  double log_a_ = 0.0, log_b_ = 0.0;
  long long shift_ = 0;

  struct NuMemo {
    std::once_flag once;
    double value = 0.0;
  };
  std::shared_ptr<NuMemo> nu_memo_ = std::make_shared<NuMemo>();
};

// w~_k = a b^k w_k. Composes with earlier tilts and shifts.
inline WeightSpec tilt(const WeightSpec& spec, const Param& a, const Param& b) {
  if (!(a.value > 0.0) || !(b.value > 0.0))
    throw Error(ErrorCode::invalid_argument, "tilt needs a > 0 and b > 0");
  WeightSpec out = spec;
  auto mul = [](const Param& x, const Param& y) {
    Param r(x.value * y.value);
    if (x.exact && y.exact) r = Param(*x.exact * *y.exact);
    return r;
  };
  out.a_ = mul(spec.a_, a);
  out.b_ = mul(spec.b_, b);
  out.log_a_ = std::log(out.a_.value);
  out.log_b_ = std::log(out.b_.value);
  if (spec.rho_) {
    const double r = *spec.rho_;
    out.rho_ = (r == 0.0 || std::isinf(r)) ? r : r / b.value;
  }
  if (spec.tail_) out.tail_ = PowerTail{spec.tail_->c * a.value, spec.tail_->beta};
  return out;
}

inline WeightSpec tilt(const WeightSpec& spec, double a, double b) { return tilt(spec, Param(a), Param(b)); }

// Removes alpha_min balls from every box: returns (w_{k+alpha}) and alpha.
inline std::pair<WeightSpec, long long> shift_support(const WeightSpec& spec) {
  const long long alpha = spec.alpha_min_;
  if (alpha == 0) return {spec, 0};
  WeightSpec out = spec;
  // a b^k w_{k+s+alpha} = (a b^{-alpha}) b^{k+alpha} w_{k+alpha+s}
  const Param& b = spec.b_;
  Param scale(std::pow(b.value, static_cast<double>(alpha)));
  if (b.exact) scale = Param(pow(*b.exact, alpha));
  out.a_ = Param(spec.a_.value * scale.value);
  if (spec.a_.exact && scale.exact) out.a_ = Param(*spec.a_.exact * *scale.exact);
  out.log_a_ = std::log(out.a_.value);
  out.shift_ = spec.shift_ + alpha;
  out.nu_memo_ = std::make_shared<WeightSpec::NuMemo>();
  out.alpha_min_ = 0;
  if (spec.omega_ != kUnbounded) out.omega_ = spec.omega_ - alpha;
  if (spec.tail_ && spec.rho_)
    out.tail_ = PowerTail{spec.tail_->c * std::pow(*spec.rho_, -static_cast<double>(alpha)), spec.tail_->beta};
  return {out, alpha};
}

// w~_k = w_{omega-k}, for finite support; swaps the roles of balls and holes.
inline WeightSpec reflect(const WeightSpec& spec) {
  if (!spec.finite_support()) throw Error(ErrorCode::invalid_argument, "reflection needs finite support");
  const long long om = spec.omega();
  if (spec.has_exact_weights()) {
    std::vector<Rational> w;
    for (long long k = 0; k <= om; ++k) w.push_back(*spec.exact_weight(om - k));
    return WeightSpec::explicit_exact(std::move(w), kInf);
  }
  std::vector<double> w;
  for (long long k = 0; k <= om; ++k) w.push_back(spec.weight(om - k));
  return WeightSpec::explicit_real(w, kInf);
}

}  // namespace simplygen
