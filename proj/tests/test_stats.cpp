#include <catch_amalgamated.hpp>

#include <cmath>

#include "simplygen/metrics.hpp"
#include "simplygen/oracles.hpp"
#include "simplygen/predict.hpp"
#include "simplygen/report.hpp"
#include "simplygen/summary.hpp"

using namespace simplygen;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Pmf pmf(std::vector<double> p, double inf = 0.0) { return Pmf{std::move(p), inf}; }

const double kZeta3 = 1.2020569031595942;
const double kZeta4 = M_PI * M_PI * M_PI * M_PI / 90.0;

double log_binomial(double a, double b) { return std::lgamma(a + 1) - std::lgamma(b + 1) - std::lgamma(a - b + 1); }

}  // namespace

TEST_CASE("distances on small laws") {
  const auto a = pmf({0.5, 0.5}), b = pmf({0.2, 0.3, 0.5});
  CHECK_THAT(dist_tv(a, b), WithinAbs(0.5, 1e-15));
  CHECK_THAT(dist_kolmogorov(a, b), WithinAbs(0.5, 1e-15));
  CHECK_THAT(dist_kolmogorov_mod(a, b), WithinAbs(0.3, 1e-15));
  CHECK(dist_tv(a, a) == 0.0);

  // an atom at infinity is invisible to the cdf on finite k but counts for TV
  const auto c = pmf({0.5}, 0.5), d = pmf({0.5, 0.5});
  CHECK_THAT(dist_tv(c, d), WithinAbs(0.5, 1e-15));
  CHECK_THAT(dist_kolmogorov_mod(c, d), WithinAbs(0.25, 1e-15));

  CHECK_THROWS_AS(dist_tv(pmf({0.5}), a), Error);
  CHECK_THROWS_AS(dist_tv(pmf({1.5, -0.5}), a), Error);
}

TEST_CASE("histogram distance") {
  std::map<int, std::uint64_t> a{{1, 3}, {2, 1}}, b{{1, 1}, {3, 1}};
  CHECK_THAT(dist_tv_counts(a, b), WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(dist_tv_counts(a, std::map<int, std::uint64_t>{}), Error);
}

TEST_CASE("kolmogorov distance against a cdf") {
  const auto F = [](long long k) { return k < 0 ? 0.0 : k < 2 ? 0.5 : 1.0; };
  CHECK_THAT(dist_kolmogorov_cdf({0, 2}, F), WithinAbs(0.0, 1e-15));
  CHECK_THAT(dist_kolmogorov_cdf({2, 2}, F), WithinAbs(0.5, 1e-15));
  CHECK_THAT(dist_kolmogorov_cdf({5, 5}, F), WithinAbs(1.0, 1e-15));
  CHECK_THROWS_AS(dist_kolmogorov_cdf({}, F), Error);
}

TEST_CASE("chi-square goodness of fit") {
  const auto exact = chi_square({250, 250, 500}, {0.25, 0.25, 0.5});
  CHECK(exact.statistic == 0.0);
  CHECK(exact.dof == 2.0);
  CHECK_THAT(exact.p_value, WithinAbs(1.0, 1e-12));
  // X^2 = 2 * 100^2 / 500 = 40 on one degree of freedom
  const auto off = chi_square({600, 400}, {0.5, 0.5});
  CHECK_THAT(off.statistic, WithinAbs(40.0, 1e-9));
  CHECK(off.dof == 1.0);
  CHECK(off.p_value < 1e-9);
  CHECK_THROWS_AS(chi_square({1, 2}, {1.0}), Error);
}

TEST_CASE("running statistics") {
  RunningStat s, t;
  for (double x : {1.0, 2.0, 3.0}) s.add(x);
  for (double x : {4.0, 10.0}) t.add(x);
  CHECK(s.mean() == 2.0);
  CHECK(s.variance() == 1.0);
  s.merge(t);
  CHECK(s.count == 5);
  CHECK(s.mean() == 4.0);
  CHECK_THAT(s.variance(), WithinAbs(12.5, 1e-12));
}

TEST_CASE("empirical summary bookkeeping") {
  EmpiricalSummary s(7, 6, 3, 3);
  s.add_tree(OrderedTree::from_degrees({3, 2, 0, 0, 0, 1, 0}));
  CHECK(s.replicates == 1);
  CHECK(s.degree_counts == std::vector<std::uint64_t>{4, 1, 1, 1});
  CHECK(s.order_stat(1) == std::vector<long long>{3});
  CHECK(s.order_stat(2) == std::vector<long long>{2});
  CHECK(s.order_stat(3) == std::vector<long long>{1});
  CHECK(s.root_degrees == std::vector<std::uint64_t>{0, 0, 0, 1});
  CHECK(s.fringe_frequency(DegreeSeq{0}) == 4.0 / 7.0);
  CHECK(s.fringe_frequency(DegreeSeq{1, 0}) == 1.0 / 7.0);

  Allocation a;
  a.m = 6;
  a.y = {0, 6, 0, 0, 0, 0, 0};
  EmpiricalSummary t(7, 6);
  t.add_allocation(a);
  CHECK(t.order_stat(1) == std::vector<long long>{6});
  CHECK(t.order_stat(2) == std::vector<long long>{0});
  a.y = {0, 5, 0, 0, 0, 0, 0};
  CHECK_THROWS_AS(t.add_allocation(a), Error);

  s.merge(t);
  CHECK(s.replicates == 2);
  CHECK(s.degree_frequency(0) == 10.0 / 14.0);
  CHECK(s.order_stat(1) == std::vector<long long>{3, 6});
}

TEST_CASE("uniform degree law prediction") {
  const auto p = predict_degree_law(canonical_law(WeightSpec::uniform(), 1.0));
  REQUIRE_FALSE(p.declined);
  const Pmf& pi = p.laws.at("degree");
  for (std::size_t k = 0; k < 30; ++k) CHECK_THAT(pi.at(k), WithinRel(std::ldexp(1.0, -static_cast<int>(k) - 1), 1e-9));
  const Pmf& root = p.laws.at("root");
  for (std::size_t k = 0; k < 30; ++k) CHECK_THAT(root.at(k), WithinAbs(k * std::ldexp(1.0, -static_cast<int>(k) - 1), 1e-12));
  CHECK(p.value("root_mass_at_infinity") < 1e-9);
  CHECK_THAT(p.shapes.at(DegreeSeq{1, 0}), WithinRel(1.0 / 8.0, 1e-9));
  CHECK_THAT(p.shapes.at(DegreeSeq{2, 0, 0}), WithinRel(1.0 / 32.0, 1e-9));
  CHECK(p.shapes.size() == 4);
  CHECK(predict_degree_law(canonical_law(WeightSpec::uniform(), 1.0), false).laws.count("root") == 0);
}

TEST_CASE("root law carries the missing mass at infinity") {
  // below nu the root degree loses 1 - mu to infinity
  const auto law = canonical_law(WeightSpec::powerlaw(Param(4)), 1.0);
  const double nu = (kZeta3 - kZeta4) / kZeta4;
  CHECK_THAT(law.nu, WithinRel(nu, 1e-6));
  const auto p = predict_degree_law(law);
  CHECK_THAT(p.value("root_mass_at_infinity"), WithinAbs(1.0 - nu, 1e-5));
}

TEST_CASE("degree law of a bounded family") {
  const auto p = predict_degree_law(canonical_law(WeightSpec::binary_pos(), 1.0));
  CHECK_FALSE(p.declined);
  const Pmf& pi = p.laws.at("degree");
  CHECK(pi.p.size() == 3);
  CHECK_THAT(pi.total(), WithinAbs(1.0, 1e-12));
  CHECK_THAT(pi.at(1) + 2 * pi.at(2), WithinAbs(1.0, 1e-9));
  CHECK_THROWS_AS(canonical_law(WeightSpec::binary_pos(), 2.0), Error);
}

TEST_CASE("k indices for geometric tails") {
  // pi_k = 2^{-k-1}, P(xi >= k) = 2^{-k}
  const auto law = canonical_law(WeightSpec::uniform(), 1.0);
  for (double n : {100.0, 1000.0, 1e5}) {
    const auto ks = k_indices(law, n);
    CHECK(ks.k1 == static_cast<long long>(std::floor(std::log2(n) - 1.0)));
    CHECK(ks.k2 == static_cast<long long>(std::floor(std::log2(n))));
    CHECK(ks.k3 == static_cast<long long>(std::floor(std::log2(n) - 0.5)));
    CHECK(ks.k1 <= ks.k3);
    CHECK(ks.k3 <= ks.k2);
  }
}

TEST_CASE("maximum degree below nu") {
  const long long n = 1000;
  const auto p = predict_max_degree(canonical_law(WeightSpec::uniform(), 1.0), n, n - 1);
  REQUIRE_FALSE(p.declined);
  CHECK(p.tag == "poisson-max");
  for (long long k = 0; k < 30; ++k) {
    CHECK_THAT(p.cdf(k), WithinAbs(std::exp(-n * std::ldexp(1.0, -static_cast<int>(k) - 1)), 1e-9));
  }
  CHECK_THAT(p.value("q"), WithinRel(0.5, 1e-9));
  CHECK_THAT(p.value("gumbel_scale"), WithinRel(1.0 / std::log(2.0), 1e-9));
  // N = n pi_{k1} q^{-k1} / (1 - q) = n
  CHECK_THAT(p.value("N"), WithinRel(static_cast<double>(n), 1e-9));
  CHECK_THAT(p.value("gumbel_location"), WithinRel(std::log2(static_cast<double>(n)), 1e-9));

  const auto bounded = predict_max_degree(canonical_law(WeightSpec::dary(3), 1.0), 100, 99);
  CHECK(bounded.tag == "bounded-support");
  CHECK(bounded.cdf(2) == 0.0);
  CHECK(bounded.cdf(3) == 1.0);

  const auto po = predict_max_degree(canonical_law(WeightSpec::inv_factorial(), 1.0), n, n - 1);
  CHECK(po.value("concentration_high") == po.value("concentration_low") + 1);
  CHECK_FALSE(po.has("gumbel_location"));
}

TEST_CASE("condensation beyond nu") {
  const auto spec = WeightSpec::powerlaw(Param(4));
  const long long n = 10000, m = 5000;
  const auto law = canonical_law(spec, 0.5);
  CHECK(law.regime == AllocRegime::supercritical);
  const auto p = predict_max_degree(law, n, m);
  REQUIRE(p.quantity == "condensation");
  const double nu = (kZeta3 - kZeta4) / kZeta4;
  CHECK_THAT(p.value("condensate_fraction"), WithinAbs(0.5 - nu, 1e-6));
  CHECK_THAT(p.value("alpha"), WithinAbs(3.0, 1e-12));
  CHECK_THAT(p.value("c_prime"), WithinRel(1.0 / kZeta4, 1e-9));
  CHECK_THAT(p.value("second_scale"), WithinRel(std::cbrt(static_cast<double>(n)), 1e-12));
  CHECK_FALSE(p.has("stable_laplace_coefficient"));
  // Frechet: P(Y_(2) <= k) = exp(-(c'/3) ((k+1)/n^{1/3})^{-3})
  for (long long k : {5LL, 20LL, 60LL}) {
    const double x = (k + 1) / std::cbrt(static_cast<double>(n));
    CHECK_THAT(p.cdf(k), WithinAbs(std::exp(-(1.0 / kZeta4 / 3.0) / (x * x * x)), 1e-12));
  }
  // a light tail has no condensate law
  CHECK(predict_condensation(canonical_law(WeightSpec::uniform(), 0.5), n, m).declined);
}

TEST_CASE("open regime is declined") {
  const auto spec = WeightSpec::powerlaw(Param::parse("2.5"));
  const long long n = 10000;
  const auto law = canonical_law(spec, 1.0);
  const auto p = predict_max_degree(law, n, std::llround(law.nu * n));
  CHECK(p.declined);
  CHECK(p.tag == "regime-open");
}

TEST_CASE("forest maxima") {
  const auto rooted = predict_forest_max(ForestKind::rooted, WeightSpec::rooted_forest(), 2.0, 10000);
  CHECK(rooted.tag == "rooted-forest-gumbel");
  CHECK_THAT(rooted.value("q"), WithinRel(0.5 * std::exp(0.5), 1e-12));

  const auto below = predict_forest_max(ForestKind::unrooted, WeightSpec::unrooted_forest(), 1.5, 10000);
  CHECK(below.tag == "unrooted-forest-gumbel");
  CHECK_THAT(below.value("q"), WithinRel(2.0 / 3.0 * std::exp(1.0 / 3.0), 1e-12));

  const auto crit = predict_forest_max(ForestKind::unrooted, WeightSpec::unrooted_forest(), 2.0, 10000);
  CHECK(crit.declined);
  CHECK(crit.tag == "unrooted-forest-critical");

  const auto giant = predict_forest_max(ForestKind::unrooted, WeightSpec::unrooted_forest(), 3.0, 10000);
  CHECK(giant.tag == "unrooted-forest-giant");
  CHECK(giant.value("giant") == 10000.0);
  CHECK(giant.cdf_of == "Y_(2)");

  CHECK(predict_forest_max(ForestKind::rooted, WeightSpec::rooted_forest(), 1.0, 100).declined);
  CHECK(predict_forest_max(ForestKind::general, WeightSpec::binary_full(), 2.0, 100).declined);

  // uniform, lambda = 2: tau1 = 1/2, tau2 = 1/3, q = (tau2 / Phi(tau2)) (Phi(tau1) / tau1) = 8/9
  const auto gen = predict_forest_max(ForestKind::general, WeightSpec::uniform(), 2.0, 10000);
  CHECK_THAT(gen.value("tau1"), WithinRel(0.5, 1e-9));
  CHECK_THAT(gen.value("tau2"), WithinRel(1.0 / 3.0, 1e-9));
  CHECK_THAT(gen.value("q"), WithinRel(8.0 / 9.0, 1e-9));
}

TEST_CASE("floor gumbel cdf") {
  const auto F = floor_gumbel_cdf(3.0, 1.0);
  CHECK_THAT(F(2), WithinAbs(std::exp(-1.0), 1e-15));
  CHECK(F(-1) < F(0));
  CHECK(F(100) > 1.0 - 1e-12);
}

TEST_CASE("partition function asymptotics") {
  // uniform: Z(m, n) = binom(m + n - 1, n - 1)
  const long long n = 4000, m = 2000;
  const auto p = predict_partition(WeightSpec::uniform(), m, n);
  REQUIRE_FALSE(p.declined);
  const double lambda = 0.5, tau = lambda / (1 + lambda);
  CHECK_THAT(p.value("tau"), WithinRel(tau, 1e-9));
  CHECK_THAT(p.value("log_z_over_n"), WithinRel(-std::log(1 - tau) - lambda * std::log(tau), 1e-9));
  const double exact = log_binomial(m + n - 1, n - 1);
  CHECK_THAT(p.value("log_z_local"), WithinAbs(exact, 1e-3));
  CHECK_THAT(p.value("ratio_add_ball"), WithinRel(1.0 / tau, 1e-9));
  CHECK_FALSE(p.has("log_z_condensed"));

  const auto cond = predict_partition(WeightSpec::powerlaw(Param(4)), 5000, 10000);
  CHECK(cond.has("log_z_condensed"));
  CHECK_FALSE(cond.has("log_z_local"));

  CHECK(predict_partition(WeightSpec::binary_pos(), 250, 100).declined);
  CHECK(predict_partition(WeightSpec::factorial(), 10, 10).value("log_z_over_n") == kInf);
}

TEST_CASE("tree partition asymptotics") {
  const auto p = predict_tree_partition(WeightSpec::uniform(), 2000);
  CHECK_THAT(p.value("zn_ratio"), WithinRel(4.0, 1e-9));
  CHECK_THAT(p.value("log_zn"), WithinAbs(log_binomial(2 * 1999, 1999) - std::log(2000.0), 1e-3));

  const auto b = predict_tree_partition(WeightSpec::binary_full(), 2001);
  CHECK_THAT(b.value("zn_ratio"), WithinRel(4.0, 1e-9));
  CHECK(predict_tree_partition(WeightSpec::factorial(), 10).declined);
}

TEST_CASE("comparison reports") {
  const auto law = canonical_law(WeightSpec::uniform(), 1.0);
  const auto pred = predict_degree_law(law);
  EmpiricalSummary s(200, 199);
  Rng rng(31, 0);
  const TreeSampler sampler(WeightSpec::uniform(), 200);
  for (int i = 0; i < 2000; ++i) s.add_tree(sampler.sample(rng));
  const auto good = compare(s, pred, 0.02);
  CHECK(good.pass());
  CHECK(good.rows.size() > 5);

  const auto wrong = compare(s, predict_degree_law(canonical_law(WeightSpec::motzkin(), 1.0)), 0.02);
  CHECK_FALSE(wrong.pass());

  const auto none = compare(EmpiricalSummary(5, 4), pred);
  CHECK(none.declined);
  CHECK_FALSE(none.pass());

  const auto dec = compare(s, predict_forest_max(ForestKind::unrooted, WeightSpec::unrooted_forest(), 2.0, 10));
  CHECK(dec.declined);
  CHECK(dec.to_json()["pass"] == false);
}

TEST_CASE("prediction json") {
  const auto p = predict_max_degree(canonical_law(WeightSpec::uniform(), 1.0), 1000, 999);
  const auto j = prediction_json(p);
  CHECK(j["tag"] == "poisson-max");
  CHECK(j["values"]["k1"] == 8.0);
  REQUIRE(j["cdf"].is_array());
  double last = 0.0;
  for (const auto& row : j["cdf"]) {
    CHECK(row[1].get<double>() >= last);
    last = row[1].get<double>();
  }
  const auto d = prediction_json(predict_forest_max(ForestKind::unrooted, WeightSpec::unrooted_forest(), 2.0, 10));
  CHECK(d["declined"] == true);
  CHECK(d.contains("reason"));
}
