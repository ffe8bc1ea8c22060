#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "simplygen/error.hpp"

namespace simplygen {

using Degree = std::uint32_t;
using DegreeSeq = std::vector<Degree>;

// Ordered rooted tree stored as its depth-first (preorder) outdegree sequence.
class OrderedTree {
 public:
  OrderedTree() : degrees_{0} {}

  static OrderedTree from_degrees(DegreeSeq d) {
    validate(d);
    OrderedTree t;
    t.degrees_ = std::move(d);
    return t;
  }

  // Caller guarantees validity (samplers that construct trees by design).
  static OrderedTree trusted(DegreeSeq d) {
    OrderedTree t;
    t.degrees_ = std::move(d);
    return t;
  }

  // Throws InvalidDegreeSequence with the first 1-based index k where the
  // prefix sum drops below k, or n when the total is not n-1.
  static void validate(const DegreeSeq& d) {
    const std::size_t n = d.size();
    if (n == 0) throw InvalidDegreeSequence(0, "empty degree sequence");
    unsigned long long sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      sum += d[k - 1];
      if (k < n && sum < k) {
        throw InvalidDegreeSequence(k, "prefix sum " + std::to_string(sum) + " < " + std::to_string(k) +
                                           " at position " + std::to_string(k));
      }
    }
    if (sum != n - 1) {
      throw InvalidDegreeSequence(n, "degree sum " + std::to_string(sum) + " != n-1 = " + std::to_string(n - 1));
    }
  }

  static bool is_valid(const DegreeSeq& d) {
    const std::size_t n = d.size();
    if (n == 0) return false;
    unsigned long long sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      sum += d[k - 1];
      if (k < n && sum < k) return false;
    }
    return sum == n - 1;
  }

  const DegreeSeq& degrees() const { return degrees_; }
  std::size_t size() const { return degrees_.size(); }
  Degree root_degree() const { return degrees_.front(); }

  friend bool operator==(const OrderedTree&, const OrderedTree&) = default;
  friend auto operator<=>(const OrderedTree& a, const OrderedTree& b) { return a.degrees_ <=> b.degrees_; }

 private:
  DegreeSeq degrees_;
};

struct TreeStats {
  std::size_t size = 0;
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::size_t> level_widths;
  std::vector<std::size_t> degree_counts;  // N_d indexed by d
  std::size_t root_degree = 0;

  // j-th largest outdegree, 1-based; 0 when j exceeds the size.
  std::size_t largest(std::size_t j) const {
    std::size_t seen = 0;
    for (std::size_t d = degree_counts.size(); d-- > 0;) {
      seen += degree_counts[d];
      if (seen >= j) return d;
    }
    return 0;
  }

  std::vector<std::size_t> sorted_degrees() const {
    std::vector<std::size_t> out;
    out.reserve(size);
    for (std::size_t d = degree_counts.size(); d-- > 0;) out.insert(out.end(), degree_counts[d], d);
    return out;
  }

  std::size_t count(std::size_t d) const { return d < degree_counts.size() ? degree_counts[d] : 0; }
};

inline TreeStats stats(const OrderedTree& t) {
  const auto& d = t.degrees();
  TreeStats s;
  s.size = d.size();
  s.root_degree = d.front();
  Degree dmax = *std::max_element(d.begin(), d.end());
  s.degree_counts.assign(dmax + 1, 0);
  struct Frame {
    Degree remaining;
    std::size_t depth;
  };
  std::vector<Frame> stack;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::size_t depth = 0;
    if (i > 0) {
      depth = stack.back().depth + 1;
      if (--stack.back().remaining == 0) stack.pop_back();
    }
    if (depth >= s.level_widths.size()) s.level_widths.resize(depth + 1, 0);
    ++s.level_widths[depth];
    ++s.degree_counts[d[i]];
    if (d[i] > 0) stack.push_back({d[i], depth});
  }
  s.height = s.level_widths.size() - 1;
  s.width = *std::max_element(s.level_widths.begin(), s.level_widths.end());
  return s;
}

// Subtree sizes, indexed by preorder position.
inline std::vector<std::size_t> subtree_sizes(const OrderedTree& t) {
  const auto& d = t.degrees();
  std::vector<std::size_t> size(d.size());
  std::vector<std::size_t> stack;
  for (std::size_t i = d.size(); i-- > 0;) {
    std::size_t s = 1;
    for (Degree c = 0; c < d[i]; ++c) {
      s += stack.back();
      stack.pop_back();
    }
    size[i] = s;
    stack.push_back(s);
  }
  return size;
}

using ShapeCounts = std::map<DegreeSeq, std::size_t>;

// Counts fringe subtrees of size <= max_size, keyed by their degree sequence.
inline ShapeCounts fringe_counts(const OrderedTree& t, std::size_t max_size) {
  ShapeCounts out;
  const auto& d = t.degrees();
  const auto sizes = subtree_sizes(t);
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (sizes[j] <= max_size) {
      ++out[DegreeSeq(d.begin() + static_cast<std::ptrdiff_t>(j),
                      d.begin() + static_cast<std::ptrdiff_t>(j + sizes[j]))];
    }
  }
  return out;
}

// Nodes at depth <= m whose ancestry uses only child indices 1..m.
inline OrderedTree left_ball(const OrderedTree& t, std::size_t m) {
  const auto& d = t.degrees();
  struct Frame {
    Degree remaining;
    std::size_t depth;
    std::size_t next_index;
    bool kept;
  };
  DegreeSeq out;
  std::vector<Frame> stack;
  for (std::size_t i = 0; i < d.size(); ++i) {
    std::size_t depth = 0;
    bool kept = true;
    if (i > 0) {
      Frame& parent = stack.back();
      depth = parent.depth + 1;
      const std::size_t index = ++parent.next_index;
      kept = parent.kept && index <= m && depth <= m;
      if (--parent.remaining == 0) stack.pop_back();
    }
    if (kept) {
      Degree nd = depth < m ? static_cast<Degree>(std::min<std::size_t>(d[i], m)) : 0;
      out.push_back(nd);
    }
    if (d[i] > 0) stack.push_back({d[i], depth, 0, kept});
  }
  return OrderedTree::trusted(std::move(out));
}

inline std::string format_degrees(const DegreeSeq& d, bool run_length = false) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.size();) {
    std::size_t j = i;
    while (j < d.size() && d[j] == d[i]) ++j;
    if (i > 0) os << ' ';
    if (run_length && j - i >= 3) {
      os << (j - i) << '*' << d[i];
      i = j;
    } else {
      os << d[i];
      ++i;
    }
  }
  return os.str();
}

inline std::string to_string(const OrderedTree& t, bool run_length = false) {
  return format_degrees(t.degrees(), run_length);
}

// Parses "2 0 0" or the run-length form "1 3*0" (three zeros).
inline DegreeSeq parse_degrees(std::string_view line) {
  DegreeSeq out;
  std::istringstream is{std::string(line)};
  std::string tok;
  auto parse_num = [&](const std::string& s) -> unsigned long long {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::parse_error, "bad degree token '" + s + "'");
    }
    return std::stoull(s);
  };
  while (is >> tok) {
    if (auto star = tok.find('*'); star != std::string::npos) {
      const auto count = parse_num(tok.substr(0, star));
      const auto value = parse_num(tok.substr(star + 1));
      out.insert(out.end(), count, static_cast<Degree>(value));
    } else {
      out.push_back(static_cast<Degree>(parse_num(tok)));
    }
  }
  return out;
}

inline OrderedTree parse_tree(std::string_view line) { return OrderedTree::from_degrees(parse_degrees(line)); }

}  // namespace simplygen
