#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "simplygen/error.hpp"

namespace simplygen {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// log of a positive rational without overflowing through double.
inline double log_rational(const Rational& r) {
  if (r <= 0) return r == 0 ? -INFINITY : NAN;
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  auto log_int = [](const BigInt& x) {
    const std::size_t bits = boost::multiprecision::msb(x) + 1;
    if (bits <= 1000) return std::log(x.convert_to<double>());
    const std::size_t drop = bits - 64;
    const BigInt top = x >> drop;
    return std::log(top.convert_to<double>()) + static_cast<double>(drop) * std::log(2.0);
  };
  return log_int(num) - log_int(den);
}

inline std::string to_string(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rational pow(const Rational& base, long long e) {
  if (e < 0) return Rational(1) / pow(base, -e);
  Rational out = 1;
  Rational b = base;
  while (e > 0) {
    if (e & 1) out *= b;
    b *= b;
    e >>= 1;
  }
  return out;
}

inline BigInt factorial_int(long long k) {
  BigInt out = 1;
  for (long long i = 2; i <= k; ++i) out *= i;
  return out;
}

// Accepts "p/q", integers and plain decimals such as "-0.125" or "2.5e-3".
inline std::optional<Rational> parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return std::nullopt;

  auto parse_int = [](std::string_view s) -> std::optional<BigInt> {
    bool neg = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) return std::nullopt;
    BigInt v = 0;
    for (char ch : s) {
      if (!std::isdigit(static_cast<unsigned char>(ch))) return std::nullopt;
      v = v * 10 + (ch - '0');
    }
    return neg ? BigInt(-v) : v;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto p = parse_int(trim(text.substr(0, slash)));
    auto q = parse_int(trim(text.substr(slash + 1)));
    if (!p || !q || *q == 0) return std::nullopt;
    return Rational(*p, *q);
  }

  std::string_view mantissa = text;
  long long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    auto ev = parse_int(text.substr(e + 1));
    if (!ev || boost::multiprecision::abs(*ev) > 4000) return std::nullopt;
    exponent = ev->convert_to<long long>();
  }
  bool neg = false;
  if (!mantissa.empty() && (mantissa.front() == '+' || mantissa.front() == '-')) {
    neg = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  long long frac_digits = 0;
  bool seen_point = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      digits.push_back(ch);
      if (seen_point) ++frac_digits;
    } else {
      return std::nullopt;
    }
  }
  if (digits.empty()) return std::nullopt;
  auto value = parse_int(digits);
  Rational r(*value);
  r *= pow(Rational(10), exponent - frac_digits);
  return neg ? Rational(-r) : r;
}

inline Rational require_rational(std::string_view text) {
  auto r = parse_rational(text);
  if (!r) throw Error(ErrorCode::parse_error, "not a rational number: '" + std::string(text) + "'");
  return *r;
}

}  // namespace simplygen
