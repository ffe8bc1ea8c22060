#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "simplygen/error.hpp"
#include "simplygen/rng.hpp"
#include "simplygen/sampling.hpp"
#include "simplygen/summary.hpp"
#include "simplygen/trees.hpp"
#include "simplygen/weights.hpp"

namespace simplygen {

enum class Budget { fast, full };

inline Budget parse_budget(std::string_view s) {
  if (s == "fast") return Budget::fast;
  if (s == "full") return Budget::full;
  throw Error(ErrorCode::parse_error, "budget must be fast or full, got '" + std::string(s) + "'");
}

struct VerifyOptions {
  Budget budget = Budget::full;
  long long n_max = 7;  // cycle-lemma enumeration bound
  std::uint64_t seed = 20240611;
  unsigned workers = 1;
};

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  int criterion = 0;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool pass() const {
    if (checks.empty()) return false;
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

inline std::string fmt(double x, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

namespace detail {

// Collects checks for one suite and times it.
class SuiteRun {
 public:
  SuiteRun(std::string name, int criterion) : start_(std::chrono::steady_clock::now()) {
    r_.name = std::move(name);
    r_.criterion = criterion;
  }

  bool check(std::string name, bool ok, std::string detail = {}) {
    r_.checks.push_back({std::move(name), ok, std::move(detail)});
    return ok;
  }
  void add(Check c) { r_.checks.push_back(std::move(c)); }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  SuiteResult finish(double limit_seconds) {
    r_.seconds = elapsed();
    check("runtime < " + fmt(limit_seconds) + " s", r_.seconds < limit_seconds, fmt(r_.seconds, 3) + " s");
    return std::move(r_);
  }

 private:
  SuiteResult r_;
  std::chrono::steady_clock::time_point start_;
};

// Runs a guarded block, turning exceptions into a failed check.
template <class Fn>
void guarded(SuiteRun& run, const std::string& what, Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    run.check(what, false, std::string("exception: ") + e.what());
  }
}

}  // namespace detail

// Case counter for property checks; keeps the first counterexample.
class Property {
 public:
  explicit Property(std::string name) : name_(std::move(name)) {}

  void operator()(bool ok, const std::function<std::string()>& what) {
    ++cases_;
    if (!ok) {
      if (failures_ == 0) first_ = what();
      ++failures_;
    }
  }
  void fail(const std::string& what) {
    ++cases_;
    if (failures_ == 0) first_ = what;
    ++failures_;
  }

  std::size_t cases() const { return cases_; }

  Check result() const {
    Check c;
    c.name = name_ + " (" + std::to_string(cases_) + " cases)";
    c.pass = failures_ == 0 && cases_ > 0;
    if (failures_) c.detail = std::to_string(failures_) + " failing, first: " + first_;
    else if (cases_ == 0) c.detail = "no cases ran";
    return c;
  }

 private:
  std::string name_;
  std::size_t cases_ = 0, failures_ = 0;
  std::string first_;
};

// Hand-rolled generator for property cases.
class Gen {
 public:
  Gen(std::uint64_t seed, std::uint64_t stream) : rng_(seed, stream) {}

  Rng& rng() { return rng_; }
  double real(double lo, double hi) { return lo + (hi - lo) * rng_.uniform(); }
  long long integer(long long lo, long long hi) {
    return lo + static_cast<long long>(rng_.below(static_cast<std::uint64_t>(hi - lo + 1)));
  }
  bool coin(double p = 0.5) { return rng_.uniform() < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[rng_.below(v.size())];
  }

  // n - 1 balls thrown into n boxes, read through the cycle lemma.
  OrderedTree tree(long long n) {
    DegreeSeq y(static_cast<std::size_t>(n), 0);
    for (long long i = 0; i + 1 < n; ++i) ++y[rng_.below(static_cast<std::uint64_t>(n))];
    return alloc_to_tree(y);
  }

  std::vector<double> weights(std::size_t len) {
    std::vector<double> w(len);
    double total = 0.0;
    for (auto& x : w) {
      x = coin(0.2) ? 0.0 : rng_.uniform();
      total += x;
    }
    if (total == 0.0) {
      w[0] = 1.0;
      total = 1.0;
    }
    for (auto& x : w) x /= total;
    return w;
  }

 private:
  Rng rng_;
};

// Builtin families at representative parameters.
inline std::vector<WeightSpec> builtin_families() {
  return {WeightSpec::uniform(),
          WeightSpec::geometric(Param::parse("1/2")),
          WeightSpec::geometric(Param::parse("1/3")),
          WeightSpec::poisson(Param(1)),
          WeightSpec::poisson(Param(2)),
          WeightSpec::binary_full(),
          WeightSpec::binary_pos(),
          WeightSpec::motzkin(),
          WeightSpec::dary(3),
          WeightSpec::powerlaw(Param::parse("5/2")),
          WeightSpec::powerlaw(Param(4)),
          WeightSpec::inv_factorial(),
          WeightSpec::factorial(),
          WeightSpec::factorial_pow(Param(2)),
          WeightSpec::factorial_pow(Param::parse("-1/2")),
          WeightSpec::rooted_forest(),
          WeightSpec::unrooted_forest(),
          WeightSpec::loglaw()};
}

inline bool is_tree_mode(const WeightSpec& s) {
  try {
    require_tree_mode(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace simplygen
