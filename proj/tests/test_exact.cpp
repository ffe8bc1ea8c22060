#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "simplygen/exact.hpp"
#include "simplygen/oracles.hpp"

using namespace simplygen;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Rational rz(const PartitionTable& t, long long m, long long n) { return t.exact_z(m, n); }

Rational ex(const TableValue& v) {
  REQUIRE(v.exact);
  return *v.exact;
}

BigInt factorial(long long n) {
  BigInt f = 1;
  for (long long i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt power(long long b, long long e) {
  BigInt p = 1;
  for (long long i = 0; i < e; ++i) p *= b;
  return p;
}

}  // namespace

TEST_CASE("small partition functions") {
  const auto u = build_table(WeightSpec::uniform(), 6, 6, TableMode::rational);
  CHECK(rz(u, 2, 3) == 6);
  CHECK(rz(u, 0, 0) == 1);
  CHECK(rz(u, 3, 0) == 0);
  for (long long j = 0; j <= 6; ++j) CHECK(rz(u, j, 1) == 1);
  // Z(m, n) = binom(m + n - 1, n - 1) for the uniform family
  for (long long n = 1; n <= 6; ++n)
    for (long long m = 0; m <= 6; ++m) CHECK(rz(u, m, n) == Rational(oracle::binomial(m + n - 1, n - 1)));

  const auto geo = WeightSpec::geometric(Param::parse("1/3"));
  const auto g = build_table(geo, 4, 5, TableMode::rational);
  Rational w0n = 1;
  for (long long n = 0; n <= 5; ++n) {
    CHECK(rz(g, 0, n) == w0n);
    w0n *= *geo.exact_weight(0);
  }
}

TEST_CASE("binary_full needs an even number of balls") {
  const auto t = build_table(WeightSpec::binary_full(), 12, 8, TableMode::rational);
  for (long long n = 1; n <= 8; ++n) {
    for (long long m = 0; m <= 12; ++m) {
      CHECK((rz(t, m, n) > 0) == (m % 2 == 0 && m <= 2 * n));
      CHECK(t.positive(m, n) == (rz(t, m, n) > 0));
      CHECK(feasible(WeightSpec::binary_full(), m, n) == (rz(t, m, n) > 0));
    }
  }
}

TEST_CASE("the recursion holds in rational mode") {
  const auto spec = WeightSpec::motzkin();
  const auto t = build_table(spec, 10, 6, TableMode::rational);
  for (long long n = 1; n <= 6; ++n) {
    for (long long m = 0; m <= 10; ++m) {
      Rational s = 0;
      for (long long k = 0; k <= m; ++k) s += *spec.exact_weight(k) * rz(t, m - k, n - 1);
      CHECK(rz(t, m, n) == s);
    }
  }
}

TEST_CASE("log mode agrees with rational mode") {
  for (const auto& spec : {WeightSpec::uniform(), WeightSpec::inv_factorial(), WeightSpec::dary(3),
                           WeightSpec::rooted_forest(), WeightSpec::factorial()}) {
    const auto r = build_table(spec, 25, 12, TableMode::rational);
    const auto l = build_table(spec, 25, 12, TableMode::log);
    for (long long n = 1; n <= 12; ++n) {
      for (long long m = 0; m <= 25; ++m) {
        const Rational z = rz(r, m, n);
        if (z == 0) {
          CHECK(l.log_z(m, n) == -kInf);
        } else {
          CHECK_THAT(l.log_z(m, n), WithinAbs(log_rational(z), 1e-10 * std::max(1.0, std::abs(log_rational(z)))));
        }
      }
    }
  }
}

TEST_CASE("split tables agree with full tables") {
  for (const auto& spec : {WeightSpec::uniform(), WeightSpec::powerlaw(Param(4)), WeightSpec::loglaw()}) {
    const auto full = build_table(spec, 60, 30);
    for (auto [m, n] : {std::pair{29LL, 30LL}, {60LL, 17LL}, {5LL, 30LL}}) {
      CHECK_THAT(log_z_single(spec, m, n), WithinAbs(full.log_z(m, n), 1e-9));
    }
  }
}

TEST_CASE("tree partition functions") {
  const auto u = build_table(WeightSpec::uniform(), 29, 30, TableMode::rational);
  CHECK(ex(z_tree(u, 3)) == 2);
  CHECK(ex(z_tree(u, 5)) == 14);
  for (long long n = 1; n <= 30; ++n) CHECK(ex(z_tree(u, n)) == Rational(oracle::catalan(n - 1)));

  const auto b = build_table(WeightSpec::inv_factorial(), 19, 20, TableMode::rational);
  CHECK(ex(z_tree(b, 4)) == Rational(8, 3));
  for (long long n = 1; n <= 20; ++n) CHECK(ex(z_tree(b, n)) == Rational(power(n, n - 1), factorial(n)));

  const auto bl = build_table(WeightSpec::inv_factorial(), 19, 20, TableMode::log);
  for (long long n = 1; n <= 20; ++n) {
    const double expect = (n - 1) * std::log(static_cast<double>(n)) - std::lgamma(n + 1.0);
    CHECK_THAT(z_tree(bl, n).log_value, WithinAbs(expect, 1e-10 * std::max(1.0, std::abs(expect))));
  }

  const auto bf = build_table(WeightSpec::binary_full(), 11, 12, TableMode::rational);
  for (long long n = 1; n <= 12; ++n) CHECK((ex(z_tree(bf, n)) > 0) == (n % 2 == 1));
}

TEST_CASE("rooted forest closed form") {
  const auto t = build_table(WeightSpec::rooted_forest(), 20, 7, TableMode::log);
  for (auto [m, n] : {std::pair{6LL, 3LL}, {10LL, 4LL}, {20LL, 7LL}}) {
    const double expect = std::log(static_cast<double>(n)) + (m - n - 1) * std::log(static_cast<double>(m)) -
                          std::lgamma(static_cast<double>(m - n + 1));
    CHECK_THAT(t.log_z(m, n), WithinRel(expect, 1e-9));
  }
}

TEST_CASE("allocation marginals") {
  const auto u = build_table(WeightSpec::uniform(), 6, 6, TableMode::rational);
  CHECK(ex(alloc_marginal(u, 2, 3, 0)) == Rational(1, 2));
  CHECK(ex(alloc_marginal(u, 2, 3, 5)) == 0);
  Rational total = 0;
  for (long long k = 0; k <= 6; ++k) total += ex(alloc_marginal(u, 6, 4, k));
  CHECK(total == 1);
  const auto b = build_table(WeightSpec::binary_full(), 6, 6, TableMode::rational);
  CHECK_THROWS_AS(alloc_marginal(b, 3, 2, 1), Error);
}

TEST_CASE("root degree law") {
  const auto u = build_table(WeightSpec::uniform(), 9, 10, TableMode::rational);
  CHECK(ex(root_degree_pmf(u, 3, 1)) == Rational(1, 2));
  CHECK(ex(root_degree_pmf(u, 3, 2)) == Rational(1, 2));
  CHECK(ex(root_degree_pmf(u, 3, 0)) == 0);
  Rational total = 0;
  for (long long d = 0; d <= 9; ++d) total += ex(root_degree_pmf(u, 10, d));
  CHECK(total == 1);
}

TEST_CASE("joint degree probabilities") {
  const auto u = build_table(WeightSpec::uniform(), 5, 6, TableMode::rational);
  CHECK(ex(joint_degree_prob(u, OrderedTree::from_degrees({1, 0}), {1, 1}, 4)) == Rational(1, 5));
  for (long long d = 0; d <= 4; ++d) {
    CHECK(ex(joint_degree_prob(u, OrderedTree(), {static_cast<Degree>(d)}, 5)) == ex(root_degree_pmf(u, 5, d)));
  }
  CHECK(ex(joint_degree_prob(u, OrderedTree::from_degrees({1, 0}), {3, 3}, 5)) == 0);
  try {
    joint_degree_prob(u, OrderedTree::from_degrees({2, 0, 0}), {1, 0, 0}, 5);
    FAIL("accepted a degree below the prefix outdegree");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::prefix_incompatible);
  }
}

TEST_CASE("brute force enumeration") {
  const auto three = brute_force(WeightSpec::uniform(), 3);
  REQUIRE(three.size() == 2);
  for (const auto& wt : three) CHECK(wt.weight == 1.0);
  const auto one = brute_force(WeightSpec::geometric(Param::parse("1/4")), 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].tree.degrees() == DegreeSeq{0});
  CHECK(*one[0].exact == Rational(1, 4));  // w_k = p (1-p)^k
  for (const auto& spec : {WeightSpec::uniform(), WeightSpec::motzkin(), WeightSpec::binary_pos(), WeightSpec::dary(3)}) {
    const auto t = build_table(spec, 8, 9, TableMode::rational);
    for (long long n = 1; n <= 9; ++n) {
      Rational total = 0;
      for (const auto& wt : brute_force(spec, n)) total += *wt.exact;
      CHECK(total == ex(z_tree(t, n)));
    }
  }
}

TEST_CASE("feasibility") {
  CHECK(feasible(WeightSpec::uniform(), 0, 4));
  CHECK_FALSE(feasible(WeightSpec::dary(2), 9, 4));
  CHECK(feasible(WeightSpec::dary(2), 8, 4));
  CHECK_FALSE(feasible(WeightSpec::rooted_forest(), 3, 4));
  CHECK(feasible(WeightSpec::rooted_forest(), 4, 4));
  CHECK(feasible(WeightSpec::binary_full(), 200000, 100001));
  CHECK_FALSE(feasible(WeightSpec::binary_full(), 199999, 100001));
}

TEST_CASE("rational mode is refused for irrational weights") {
  try {
    build_table(WeightSpec::powerlaw(Param::parse("2.5")), 4, 4, TableMode::rational);
    FAIL("built a rational table");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::rational_unavailable);
  }
}
