#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "simplygen/metrics.hpp"
#include "simplygen/oracles.hpp"
#include "simplygen/sampling.hpp"
#include "simplygen/summary.hpp"

using namespace simplygen;
using Catch::Matchers::WithinAbs;

namespace {

// |freq - p| within 4 standard errors
void check_freq(double count, double total, double p) {
  const double se = std::sqrt(p * (1 - p) / total);
  INFO("observed " << count / total << ", expected " << p);
  CHECK(std::abs(count / total - p) <= 4.0 * se + 1e-12);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_CASE("rng streams") {
  Rng a(5, 1), b(5, 1), c(5, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.bits();
    CHECK(x == b.bits());
    differs = differs || x != c.bits();
  }
  CHECK(differs);
  Rng r(9, 0);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("exact allocations: unique outcomes") {
  Rng rng(1, 0);
  const auto z = AllocSampler(WeightSpec::uniform(), 0, 5, Strategy::exact).sample(rng);
  CHECK(z.y == DegreeSeq(5, 0));
  const auto b = AllocSampler(WeightSpec::binary_full(), 2, 1, Strategy::exact).sample(rng);
  CHECK(b.y == DegreeSeq{2});
  CHECK(code_of([] { AllocSampler(WeightSpec::binary_full(), 3, 2); }) == ErrorCode::infeasible_allocation);
}

TEST_CASE("exact allocations of 2 balls in 3 boxes are uniform") {
  const AllocSampler s(WeightSpec::uniform(), 2, 3, Strategy::exact);
  std::map<DegreeSeq, double> seen;
  const int R = 100000;
  Rng rng(2, 0);
  for (int i = 0; i < R; ++i) seen[s.sample(rng).y] += 1;
  CHECK(seen.size() == 6);
  for (const auto& [y, c] : seen) check_freq(c, R, 1.0 / 6.0);
}

TEST_CASE("rejection allocations match the exact marginal") {
  const auto table = build_table(WeightSpec::uniform(), 4, 5, TableMode::rational);
  const AllocSampler s(WeightSpec::uniform(), 4, 5, Strategy::rejection);
  REQUIRE(s.strategy() == Strategy::rejection);
  std::vector<std::uint64_t> counts;
  Rng rng(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const auto a = s.sample(rng);
    long long total = 0;
    for (auto v : a.y) total += v;
    REQUIRE(total == 4);
    add_count(counts, a.y[0]);
  }
  Pmf exact;
  for (long long k = 0; k <= 4; ++k) exact.p.push_back(alloc_marginal(table, 4, 5, k).value());
  CHECK(dist_tv(empirical_pmf(counts), exact) < 0.01);
}

TEST_CASE("rejection with one box is a point mass") {
  const auto law = canonical_law(WeightSpec::uniform(), 3.0);
  Rng rng(4, 0);
  for (int i = 0; i < 100; ++i) CHECK(sample_alloc_rejection(law, 3, 1, rng, 100000).y == DegreeSeq{3});
}

TEST_CASE("rejection gives up after max_trials") {
  const auto law = canonical_law(WeightSpec::powerlaw(Param(4)), 1.0);
  Rng rng(4, 1);
  CHECK(code_of([&] { sample_alloc_rejection(law, 2000, 1000, rng, 3); }) == ErrorCode::acceptance_too_low);
}

TEST_CASE("cycle lemma rotation") {
  CHECK(alloc_to_tree(DegreeSeq{0, 2, 0}).degrees() == DegreeSeq{2, 0, 0});
  CHECK(alloc_to_tree(DegreeSeq{1, 1, 0}).degrees() == DegreeSeq{1, 1, 0});
  CHECK(alloc_to_tree(DegreeSeq{0, 0, 3, 0}).degrees() == DegreeSeq{3, 0, 0, 0});
  CHECK_THROWS_AS(alloc_to_tree(DegreeSeq{1, 1, 1}), Error);
  // x = (-1, -1) with r = 2: both rotations are forests of two trees
  CHECK(forest_rotations(DegreeSeq{0, 0}).size() == 2);
}

TEST_CASE("uniform trees on 3 nodes") {
  for (auto strategy : {Strategy::exact, Strategy::rejection}) {
    const TreeSampler s(WeightSpec::uniform(), 3, strategy);
    Rng rng(5, static_cast<std::uint64_t>(strategy));
    double paths = 0;
    const int R = 100000;
    for (int i = 0; i < R; ++i) paths += s.sample(rng).degrees() == DegreeSeq{1, 1, 0};
    check_freq(paths, R, 0.5);
  }
}

TEST_CASE("degenerate and structured tree samples") {
  Rng rng(6, 0);
  CHECK(sample_tree(WeightSpec::uniform(), 1, rng).degrees() == DegreeSeq{0});
  const TreeSampler bin(WeightSpec::binary_full(), 5);
  for (int i = 0; i < 200; ++i) {
    const auto t = bin.sample(rng);
    for (auto d : t.degrees()) CHECK((d == 0 || d == 2));
  }
  CHECK(code_of([] { TreeSampler(WeightSpec::binary_full(), 4); }) == ErrorCode::infeasible_allocation);
  CHECK(code_of([] { TreeSampler(WeightSpec::factorial(), 3000); }) == ErrorCode::capacity_exceeded);
  CHECK(code_of([] { TreeSampler(WeightSpec::rooted_forest(), 5); }) == ErrorCode::not_tree_mode);
}

TEST_CASE("tree samples follow the enumerated law, n = 6") {
  const auto law = oracle::tree_law(WeightSpec::motzkin(), 6);
  std::vector<double> probs;
  std::map<DegreeSeq, std::size_t> index;
  for (const auto& [d, p] : law) {
    index[d] = probs.size();
    probs.push_back(p);
  }
  for (auto strategy : {Strategy::exact, Strategy::rejection}) {
    const TreeSampler s(WeightSpec::motzkin(), 6, strategy);
    std::vector<double> obs(probs.size(), 0.0);
    Rng rng(7, static_cast<std::uint64_t>(strategy));
    for (int i = 0; i < 100000; ++i) obs[index.at(s.sample(rng).degrees())] += 1;
    CHECK(chi_square(obs, probs).p_value > 1e-4);
  }
}

TEST_CASE("Galton-Watson trees") {
  Rng rng(8, 0);
  const auto point = DiscreteSampler::from_pmf({1.0});
  for (int i = 0; i < 10; ++i) CHECK(sample_gw(point, rng).tree->degrees() == DegreeSeq{0});

  const auto geo = DiscreteSampler::offspring(canonical_law(WeightSpec::uniform(), 1.0));
  const int R = 100000;
  double three = 0;
  for (int i = 0; i < R; ++i) {
    const auto g = sample_gw(geo, rng, 100000);
    three += !g.budget_exceeded() && g.tree->size() == 3;
  }
  check_freq(three, R, 2.0 / 32.0);

  const auto po = DiscreteSampler::offspring(canonical_law(WeightSpec::inv_factorial(), 1.0));
  std::vector<double> sizes(6, 0.0);
  for (int i = 0; i < R; ++i) {
    const auto g = sample_gw(po, rng, 100000);
    if (!g.budget_exceeded() && g.tree->size() < 6) sizes[g.tree->size()] += 1;
  }
  for (int n = 1; n < 6; ++n) {
    check_freq(sizes[n], R, std::exp((n - 1) * std::log(n) - n - std::lgamma(n + 1.0)));
  }
}

TEST_CASE("Galton-Watson budget is reported, not thrown") {
  Rng rng(8, 1);
  const auto two = DiscreteSampler::from_pmf({0.0, 0.0, 1.0});
  const auto g = sample_gw(two, rng, 1000);
  CHECK(g.budget_exceeded());
  CHECK(g.nodes == 1000);
}

TEST_CASE("limit-tree balls") {
  Rng rng(9, 0);
  const auto star = KestenSpec::from_pmf({1.0});
  const auto b = sample_kesten_ball(star, 4, rng);
  CHECK(b.exploded);
  CHECK(b.tree.degrees() == DegreeSeq{4, 0, 0, 0, 0});

  const auto bin = KestenSpec::from_law(canonical_law(WeightSpec::binary_full(), 1.0));
  for (int i = 0; i < 100; ++i) {
    const auto t = sample_kesten_ball(bin, 3, rng).tree;
    CHECK(t.degrees()[0] == 2);
    for (auto d : t.degrees()) CHECK((d == 0 || d == 2));
  }

  // spine root degree of the uniform family is k 2^{-k-1}
  const auto geo = KestenSpec::from_law(canonical_law(WeightSpec::uniform(), 1.0));
  std::vector<std::uint64_t> roots;
  for (int i = 0; i < 100000; ++i) add_count(roots, sample_kesten_ball(geo, 64, rng).tree.degrees()[0]);
  Pmf expect;
  for (int k = 0; k < 64; ++k) expect.p.push_back(k * std::ldexp(1.0, -k - 1));
  expect.p.back() += 1.0 - expect.total();
  CHECK(dist_tv(empirical_pmf(roots), expect) < 0.01);
}

TEST_CASE("size-biased balls") {
  Rng rng(10, 0);
  const auto path = KestenSpec::from_pmf({0.0, 1.0});
  CHECK(sample_size_biased_ball(path, 5, rng).tree.degrees() == DegreeSeq{1, 1, 1, 1, 1, 0});
  // mu = 1: identical laws of the root degree
  const auto geo = KestenSpec::from_law(canonical_law(WeightSpec::uniform(), 1.0));
  std::vector<std::uint64_t> a, b;
  for (int i = 0; i < 50000; ++i) {
    add_count(a, sample_size_biased_ball(geo, 30, rng).tree.degrees()[0]);
    add_count(b, sample_kesten_ball(geo, 30, rng).tree.degrees()[0]);
  }
  CHECK(dist_tv(empirical_pmf(a), empirical_pmf(b)) < 0.02);
  CHECK_THROWS_AS(sample_size_biased_ball(KestenSpec::from_pmf({1.0}), 3, rng), Error);
}

TEST_CASE("forests") {
  Rng rng(11, 0);
  const auto singles = sample_forest(WeightSpec::inv_factorial(), 7, 7, rng);
  CHECK(singles.size() == 7);
  for (const auto& t : singles) CHECK(t.size() == 1);
  const ForestSampler f(WeightSpec::uniform(), 40, 6);
  for (int i = 0; i < 200; ++i) {
    const auto trees = f.sample(rng);
    std::size_t total = 0;
    for (const auto& t : trees) total += t.size();
    CHECK(trees.size() == 6);
    CHECK(total == 40);
  }
}

TEST_CASE("forest sizes follow the rooted forest allocation") {
  // largest tree of a forest with 3 trees on 10 nodes, by enumeration of Z_k = k^{k-1}/k!
  std::map<long long, double> law;
  double total = 0;
  auto zk = [](long long k) { return std::exp((k - 1) * std::log(k) - std::lgamma(k + 1.0)); };
  for (long long a = 1; a <= 8; ++a) {
    for (long long b = 1; a + b <= 9; ++b) {
      const long long c = 10 - a - b;
      const double w = zk(a) * zk(b) * zk(c);
      law[std::max({a, b, c})] += w;
      total += w;
    }
  }
  const ForestSampler f(WeightSpec::inv_factorial(), 10, 3);
  std::map<long long, double> seen;
  Rng rng(12, 0);
  const int R = 50000;
  for (int i = 0; i < R; ++i) {
    std::size_t best = 0;
    for (const auto& t : f.sample(rng)) best = std::max(best, t.size());
    seen[static_cast<long long>(best)] += 1;
  }
  for (const auto& [k, w] : law) check_freq(seen[k], R, w / total);
}

TEST_CASE("replicates do not depend on the worker count") {
  auto draw = [](Rng& rng, std::size_t) { return sample_tree(WeightSpec::uniform(), 50, rng).degrees(); };
  CHECK(run_replicates(3, 10, 40, 1, draw) == run_replicates(3, 10, 40, 4, draw));
  auto first = run_replicates(3, 10, 5, 1, draw);
  Rng direct(3, 12);
  CHECK(first[2] == sample_tree(WeightSpec::uniform(), 50, direct).degrees());
}
