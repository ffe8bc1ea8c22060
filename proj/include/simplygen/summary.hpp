#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <thread>
#include <vector>

#include "simplygen/metrics.hpp"
#include "simplygen/rng.hpp"
#include "simplygen/sampling.hpp"
#include "simplygen/trees.hpp"

namespace simplygen {

struct RunningStat {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const RunningStat& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double variance() const {
    if (count < 2) return 0.0;
    const double c = static_cast<double>(count);
    return std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
  }
  double std_error() const { return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0; }
};

inline void add_count(std::vector<std::uint64_t>& v, std::size_t k, std::uint64_t c = 1) {
  if (k >= v.size()) v.resize(k + 1, 0);
  v[k] += c;
}

using ShapeHistogram = std::map<DegreeSeq, std::uint64_t>;

// Pooled counts over replicates; merging is plain addition, so the result
// does not depend on how replicates were split between workers.
struct EmpiricalSummary {
  long long n = 0;
  long long m = 0;
  std::size_t fringe_max = 3;
  std::size_t j_max = 3;

  std::uint64_t replicates = 0;
  std::vector<std::uint64_t> degree_counts;  // pooled N_k
  std::vector<std::uint64_t> root_degrees;   // root degree histogram (trees)
  ShapeHistogram fringe;                     // pooled N_T, |T| <= fringe_max
  std::vector<std::vector<long long>> largest;  // largest[j-1][r] = Y_(j) of replicate r
  RunningStat height, width;

  EmpiricalSummary() = default;
  EmpiricalSummary(long long n_, long long m_, std::size_t fringe_max_ = 3, std::size_t j_max_ = 3)
      : n(n_), m(m_), fringe_max(fringe_max_), j_max(j_max_), largest(j_max_) {}

  void add_counts(const std::vector<std::size_t>& counts) {
    for (std::size_t k = 0; k < counts.size(); ++k) add_count(degree_counts, k, counts[k]);
    std::size_t seen = 0, j = 0;
    for (std::size_t k = counts.size(); k-- > 0 && j < j_max;) {
      seen += counts[k];
      while (j < j_max && seen > j) largest[j++].push_back(static_cast<long long>(k));
    }
    while (j < j_max) largest[j++].push_back(0);
  }

  void add_tree(const OrderedTree& t) {
    const TreeStats s = stats(t);
    check_counts(s.degree_counts, static_cast<long long>(t.size()), static_cast<long long>(t.size()) - 1);
    ++replicates;
    add_counts(s.degree_counts);
    add_count(root_degrees, s.root_degree);
    if (fringe_max > 0) {
      for (auto& [shape, c] : fringe_counts(t, fringe_max)) fringe[shape] += c;
    }
    height.add(static_cast<double>(s.height));
    width.add(static_cast<double>(s.width));
  }

  void add_allocation(const Allocation& a) {
    const auto c = a.counts();
    check_counts(c, static_cast<long long>(a.y.size()), a.m);
    ++replicates;
    add_counts(c);
  }

  void merge(const EmpiricalSummary& o) {
    replicates += o.replicates;
    for (std::size_t k = 0; k < o.degree_counts.size(); ++k) add_count(degree_counts, k, o.degree_counts[k]);
    for (std::size_t k = 0; k < o.root_degrees.size(); ++k) add_count(root_degrees, k, o.root_degrees[k]);
    for (const auto& [shape, c] : o.fringe) fringe[shape] += c;
    if (largest.size() < o.largest.size()) largest.resize(o.largest.size());
    for (std::size_t j = 0; j < o.largest.size(); ++j) {
      largest[j].insert(largest[j].end(), o.largest[j].begin(), o.largest[j].end());
    }
    height.merge(o.height);
    width.merge(o.width);
  }

  double nodes() const { return static_cast<double>(replicates) * static_cast<double>(n); }
  double degree_frequency(std::size_t k) const {
    return k < degree_counts.size() ? static_cast<double>(degree_counts[k]) / nodes() : 0.0;
  }
  double fringe_frequency(const DegreeSeq& shape) const {
    auto it = fringe.find(shape);
    return it == fringe.end() ? 0.0 : static_cast<double>(it->second) / nodes();
  }
  Pmf degree_pmf() const { return empirical_pmf(degree_counts); }
  Pmf root_pmf() const { return empirical_pmf(root_degrees); }
  const std::vector<long long>& order_stat(std::size_t j) const { return largest.at(j - 1); }

 private:
  static void check_counts(const std::vector<std::size_t>& c, long long boxes, long long balls) {
    long long nb = 0, mb = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      nb += static_cast<long long>(c[k]);
      mb += static_cast<long long>(k * c[k]);
    }
    if (nb != boxes || mb != balls) throw Error(ErrorCode::invalid_argument, "occupancy counts do not add up");
  }
};

// Runs fn(rng, index) for index = 0..count-1 on stream first_stream + index,
// spread over `workers` threads; results come back in stream order.
template <class Fn>
auto run_replicates(std::uint64_t seed, std::uint64_t first_stream, std::size_t count, unsigned workers, Fn fn)
    -> std::vector<decltype(fn(std::declval<Rng&>(), std::size_t{}))> {
  using T = decltype(fn(std::declval<Rng&>(), std::size_t{}));
  std::vector<std::optional<T>> slots(count);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < count; i += step) {
      Rng rng(seed, first_stream + i);
      slots[i].emplace(fn(rng, i));
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline unsigned default_workers() {
  if (const char* env = std::getenv("SIMPLYGEN_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

}  // namespace simplygen
