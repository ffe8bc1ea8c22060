#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "simplygen/error.hpp"
#include "simplygen/rational.hpp"
#include "simplygen/weights.hpp"

namespace simplygen {

enum class FileMode { tree, alloc };

struct WeightFile {
  WeightSpec spec = WeightSpec::uniform();
  std::optional<FileMode> mode;
};

namespace detail {

inline std::string trim_copy(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

inline std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return trim_copy(hash == std::string::npos ? std::string_view(line) : std::string_view(line).substr(0, hash));
}

}  // namespace detail

// Header lines `rho = <decimal|inf>` and `mode = tree|alloc`, then `k w_k`
// lines with w_k decimal or p/q. Unlisted k are zero; `#` starts a comment.
inline WeightFile parse_weight_file(std::istream& in, const std::string& where = "weight file") {
  std::optional<double> rho;
  std::optional<FileMode> mode;
  std::map<long long, Rational> w;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::parse_error, where + ":" + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    if (const auto eq = s.find('='); eq != std::string::npos) {
      const std::string key = detail::trim_copy(std::string_view(s).substr(0, eq));
      const std::string value = detail::trim_copy(std::string_view(s).substr(eq + 1));
      if (!w.empty()) fail("header line after the weights");
      if (key == "rho") {
        if (value == "inf" || value == "infinity") {
          rho = kInf;
        } else {
          const auto r = parse_rational(value);
          if (!r || *r < 0) fail("rho must be a nonnegative number or inf");
          rho = to_double(*r);
        }
      } else if (key == "mode") {
        if (value == "tree") mode = FileMode::tree;
        else if (value == "alloc") mode = FileMode::alloc;
        else fail("mode must be tree or alloc");
      } else {
        fail("unknown header '" + key + "'");
      }
      continue;
    }
    std::istringstream fields(s);
    std::string ks, ws, extra;
    fields >> ks >> ws;
    if (ws.empty() || (fields >> extra)) fail("expected '<k> <w_k>'");
    long long k = 0;
    try {
      std::size_t used = 0;
      k = std::stoll(ks, &used);
      if (used != ks.size()) fail("bad index '" + ks + "'");
    } catch (const std::logic_error&) {
      fail("bad index '" + ks + "'");
    }
    if (k < 0) fail("negative index");
    if (k > 10000000) fail("index too large");
    const auto r = parse_rational(ws);
    if (!r) fail("bad weight '" + ws + "'");
    if (*r < 0) fail("negative weight");
    if (w.count(k)) fail("index " + std::to_string(k) + " listed twice");
    w[k] = *r;
  }
  if (!rho) throw Error(ErrorCode::rho_required, where + ": missing 'rho = ...' header");
  if (w.empty()) throw Error(ErrorCode::empty_support, where + ": no weights");
  std::vector<Rational> seq(static_cast<std::size_t>(w.rbegin()->first + 1), Rational(0));
  for (const auto& [k, v] : w) seq[static_cast<std::size_t>(k)] = v;
  return WeightFile{WeightSpec::explicit_exact(std::move(seq), rho), mode};
}

inline WeightFile load_weight_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::invalid_argument, "cannot open weight file '" + path + "'");
  return parse_weight_file(in, path);
}

// `key = value` lines with `#` comments, for sweeps driven from a file.
inline std::map<std::string, std::string> parse_config(std::istream& in, const std::string& where = "config") {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = detail::strip_comment(line);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::parse_error, where + ":" + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = detail::trim_copy(std::string_view(s).substr(0, eq));
    if (key.empty()) throw Error(ErrorCode::parse_error, where + ":" + std::to_string(lineno) + ": empty key");
    out[key] = detail::trim_copy(std::string_view(s).substr(eq + 1));
  }
  return out;
}

}  // namespace simplygen
