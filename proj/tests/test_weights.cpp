#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "simplygen/analysis.hpp"
#include "simplygen/weight_file.hpp"

using namespace simplygen;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

// zeta(s) by partial sums plus an Euler-Maclaurin tail.
double zeta(double s) {
  const int N = 100000;
  double sum = 0.0;
  for (int k = N - 1; k >= 1; --k) sum += std::pow(k, -s);
  const double n = N;
  return sum + std::pow(n, 1 - s) / (s - 1) + 0.5 * std::pow(n, -s) + s * std::pow(n, -s - 1) / 12.0;
}

}  // namespace

TEST_CASE("declared radii of the builtin families") {
  CHECK(WeightSpec::uniform().rho() == 1.0);
  CHECK(std::isinf(WeightSpec::poisson(Param(1)).rho()));
  CHECK(WeightSpec::powerlaw(Param(4)).rho() == 1.0);
  CHECK(WeightSpec::factorial().rho() == 0.0);
  CHECK_THAT(WeightSpec::rooted_forest().rho(), WithinRel(std::exp(-1.0), 1e-15));
  CHECK_THAT(WeightSpec::unrooted_forest().rho(), WithinRel(std::exp(-1.0), 1e-15));
}

TEST_CASE("span, omega and alpha_min") {
  CHECK(WeightSpec::binary_full().span() == 2);
  CHECK(WeightSpec::binary_full().omega() == 2);
  CHECK(WeightSpec::motzkin().span() == 1);
  CHECK(WeightSpec::dary(3).omega() == 3);
  CHECK(WeightSpec::rooted_forest().alpha_min() == 1);
  CHECK_FALSE(WeightSpec::uniform().finite_support());
  const auto gapped = WeightSpec::explicit_exact({Rational(0), Rational(1), Rational(0), Rational(0), Rational(1)}, kInf);
  CHECK(gapped.alpha_min() == 1);
  CHECK(gapped.span() == 3);
}

TEST_CASE("phi examples") {
  CHECK_THAT(phi(WeightSpec::uniform(), 0.5), WithinRel(2.0, 1e-13));
  CHECK(phi(WeightSpec::powerlaw(Param(4)), 0.0) == 1.0);
  CHECK(phi(WeightSpec::binary_full(), 0.0) == 1.0);
  double e = 0.0, term = 1.0;
  for (int k = 0; k < 30; ++k) {
    e += term;
    term /= k + 1;
  }
  CHECK_THAT(phi(WeightSpec::inv_factorial(), 1.0), WithinRel(e, 1e-12));
  CHECK(std::isinf(phi(WeightSpec::uniform(), 1.5)));
}

TEST_CASE("psi examples") {
  CHECK_THAT(psi(WeightSpec::uniform(), 0.5), WithinRel(1.0, 1e-13));
  CHECK(psi(WeightSpec::motzkin(), 0.0) == 0.0);
  CHECK_THAT(psi(WeightSpec::unrooted_forest(), std::exp(-1.0)), WithinRel(2.0, 1e-6));
  // t/(1-t) for the uniform family
  for (double t : {0.1, 0.3, 0.7, 0.9}) CHECK_THAT(psi(WeightSpec::uniform(), t), WithinRel(t / (1 - t), 1e-12));
}

TEST_CASE("nu examples") {
  const double oracle = (zeta(3) - zeta(4)) / zeta(4);
  CHECK_THAT(nu(WeightSpec::powerlaw(Param(4))), WithinRel(oracle, 1e-8));
  CHECK_THAT(oracle, WithinAbs(0.110627, 1e-6));
  CHECK(nu(WeightSpec::factorial()) == 0.0);
  CHECK(nu(WeightSpec::dary(3)) == 3.0);
  CHECK(std::isinf(nu(WeightSpec::uniform())));
  CHECK(nu(WeightSpec::inv_factorial()) == kInf);
  CHECK_THAT(nu(WeightSpec::powerlaw(Param::parse("2.47875"))), WithinAbs(1.0, 1e-4));
}

TEST_CASE("tau_of examples") {
  CHECK_THAT(tau_of(WeightSpec::uniform(), 1.0), WithinRel(0.5, 1e-12));
  CHECK(tau_of(WeightSpec::powerlaw(Param(4)), 1.0) == 1.0);
  CHECK_THAT(tau_of(WeightSpec::uniform(), 2.0), WithinRel(2.0 / 3.0, 1e-12));
  CHECK(tau_of(WeightSpec::motzkin(), 0.0) == 0.0);
  // Poisson(a) weights: Psi(t) = t, so tau(x) = x
  CHECK_THAT(tau_of(WeightSpec::inv_factorial(), 3.5), WithinRel(3.5, 1e-12));
}

TEST_CASE("tau_of errors") {
  CHECK(code_of([] { tau_of(WeightSpec::dary(3), 3.0); }) == ErrorCode::capacity_exceeded);
  const auto no_rho = WeightSpec::explicit_exact({Rational(1), Rational(1), Rational(1)}, std::nullopt);
  CHECK(code_of([&] { tau_of(no_rho, 0.5); }) == ErrorCode::rho_required);
}

TEST_CASE("canonical law of the uniform family") {
  const auto law = canonical_law(WeightSpec::uniform(), 1.0);
  for (int k = 0; k < 40; ++k) CHECK_THAT(law.pi(k), WithinRel(std::ldexp(1.0, -k - 1), 1e-12));
  CHECK_THAT(law.sigma2, WithinRel(2.0, 1e-10));
  CHECK_THAT(law.mu, WithinRel(1.0, 1e-12));
  CHECK_THAT(law.rho_z, WithinRel(0.25, 1e-12));
}

TEST_CASE("canonical law of motzkin and dary(3)") {
  const auto mz = canonical_law(WeightSpec::motzkin(), 1.0);
  for (int k = 0; k < 3; ++k) CHECK_THAT(mz.pi(k), WithinRel(1.0 / 3.0, 1e-12));
  CHECK(mz.pi(3) == 0.0);
  CHECK_THAT(mz.sigma2, WithinRel(2.0 / 3.0, 1e-10));
  const auto d3 = canonical_law(WeightSpec::dary(3), 1.0);
  const double expect[] = {8.0 / 27, 12.0 / 27, 6.0 / 27, 1.0 / 27};
  for (int k = 0; k < 4; ++k) CHECK_THAT(d3.pi(k), WithinRel(expect[k], 1e-12));
}

TEST_CASE("canonical law in the condensation regime caps mu at nu") {
  const auto law = canonical_law(WeightSpec::powerlaw(Param(4)), 1.0);
  CHECK(law.tau == 1.0);
  CHECK_THAT(law.mu, WithinRel(law.nu, 1e-10));
  CHECK(law.regime == AllocRegime::supercritical);
  const auto fact = canonical_law(WeightSpec::factorial(), 0.7);
  CHECK(fact.tau == 0.0);
  CHECK(fact.pi(0) == 1.0);
  CHECK(fact.nu == 0.0);
}

TEST_CASE("tilt examples") {
  const auto u = tilt(WeightSpec::uniform(), Param::parse("1/2"), Param::parse("1/2"));
  const auto g = WeightSpec::geometric(Param::parse("1/2"));
  for (int k = 0; k < 20; ++k) {
    REQUIRE(u.exact_weight(k));
    CHECK(*u.exact_weight(k) == Rational(1, 1LL << (k + 1)));
    CHECK_THAT(u.weight(k), WithinRel(g.weight(k), 1e-15));
  }
  CHECK(u.rho() == 2.0);
  const auto same = tilt(WeightSpec::motzkin(), Param(1), Param(1));
  for (int k = 0; k < 4; ++k) CHECK(same.log_weight(k) == WeightSpec::motzkin().log_weight(k));

  const auto rf = tilt(WeightSpec::rooted_forest(), 1.0, std::exp(-1.0));
  for (long long k : {1000LL, 4000LL}) {
    const double scaled = rf.weight(k) * std::pow(static_cast<double>(k), 1.5) * std::sqrt(2 * M_PI);
    CHECK_THAT(scaled, WithinAbs(1.0, 1.0 / static_cast<double>(k)));
  }
}

TEST_CASE("shift_support examples") {
  auto [rf, a] = shift_support(WeightSpec::rooted_forest());
  CHECK(a == 1);
  // (k+1)^k / (k+1)!
  for (int k = 0; k < 8; ++k) {
    BigInt num = 1, den = 1;
    for (int i = 0; i < k; ++i) num *= k + 1;
    for (int i = 2; i <= k + 1; ++i) den *= i;
    CHECK(*rf.exact_weight(k) == Rational(num, den));
  }
  auto [ll, b] = shift_support(WeightSpec::loglaw());
  CHECK(b == 1);
  for (int k = 0; k < 8; ++k) CHECK(*ll.exact_weight(k) == Rational(1, k + 1));
  auto [u, c] = shift_support(WeightSpec::uniform());
  CHECK(c == 0);
  CHECK(u.log_weight(3) == 0.0);
  CHECK(code_of([] { shift_support(WeightSpec::explicit_exact({Rational(0), Rational(0)}, 1.0)); }) ==
        ErrorCode::empty_support);
}

TEST_CASE("classify examples") {
  CHECK(classify(WeightSpec::uniform()).tree_case == TreeCase::Ia);
  CHECK(classify(WeightSpec::uniform()).finite_variance);
  CHECK(classify(WeightSpec::powerlaw(Param(4))).tree_case == TreeCase::II);
  CHECK(classify(WeightSpec::factorial()).tree_case == TreeCase::III);
  CHECK(classify(WeightSpec::binary_full()).tree_case == TreeCase::Ia);
  CHECK(code_of([] { classify(WeightSpec::rooted_forest()); }) == ErrorCode::not_tree_mode);
}

TEST_CASE("parameters parse as exact rationals when they can") {
  const Param half = Param::parse("1/2");
  REQUIRE(half.exact);
  CHECK(*half.exact == Rational(1, 2));
  const Param dec = Param::parse("2.5");
  REQUIRE(dec.exact);
  CHECK(*dec.exact == Rational(5, 2));
  CHECK(Param::parse("4").is_integer());
}

TEST_CASE("weight file parsing") {
  std::istringstream in(
      "# Catalan weights, truncated\n"
      "rho = inf\n"
      "mode = tree\n"
      "0 1\n"
      "2 1/2   # half\n"
      "3 0.25\n");
  const auto wf = parse_weight_file(in);
  REQUIRE(wf.mode);
  CHECK(*wf.mode == FileMode::tree);
  CHECK(std::isinf(wf.spec.rho()));
  CHECK(*wf.spec.exact_weight(1) == 0);
  CHECK(*wf.spec.exact_weight(2) == Rational(1, 2));
  CHECK(*wf.spec.exact_weight(3) == Rational(1, 4));
  CHECK(wf.spec.omega() == 3);
}

TEST_CASE("weight file errors") {
  auto parse = [](const char* text) {
    std::istringstream in(text);
    return parse_weight_file(in);
  };
  CHECK(code_of([&] { parse("0 1\n1 1\n"); }) == ErrorCode::rho_required);
  CHECK(code_of([&] { parse("rho = 1\n"); }) == ErrorCode::empty_support);
  CHECK(code_of([&] { parse("rho = 1\n0 1\n0 2\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([&] { parse("rho = 1\n0 -1\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([&] { parse("rho = 1\n0 1\nrho = 2\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([&] { parse("rho = 1\nmode = forest\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([&] { parse("rho = 1\nx 1\n"); }) == ErrorCode::parse_error);
}

TEST_CASE("config files are key = value with comments") {
  std::istringstream in("# sweep\nfamily = powerlaw\nbeta=4   # exponent\n\nn = 2000\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.at("family") == "powerlaw");
  CHECK(cfg.at("beta") == "4");
  CHECK(cfg.at("n") == "2000");
  std::istringstream bad("family powerlaw\n");
  CHECK(code_of([&] { parse_config(bad); }) == ErrorCode::parse_error);
}
