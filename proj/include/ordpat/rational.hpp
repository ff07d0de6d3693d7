#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "ordpat/errors.hpp"

namespace ordpat {

/// Arbitrary precision rational used for every exact computation.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t numerator, std::int64_t denominator = 1) {
  if (denominator == 0) throw InvalidArgument("rational with zero denominator");
  return Rational(BigInt(numerator), BigInt(denominator));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// "n/d" (or just "n") with the fraction in lowest terms.
inline std::string to_string(const Rational& r) {
  std::string out = boost::multiprecision::numerator(r).str();
  const BigInt den = boost::multiprecision::denominator(r);
  if (den != 1) out += "/" + den.str();
  return out;
}

inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto parse_int = [&](std::string_view s) {
    s = trim(s);
    if (s.empty()) throw ParseError("empty integer in rational '" + std::string(text) + "'", 0);
    std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (start == s.size()) throw ParseError("bad integer '" + std::string(s) + "'", 0);
    for (std::size_t i = start; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') throw ParseError("bad integer '" + std::string(s) + "'", 0);
    }
    if (s.front() == '+') s.remove_prefix(1);
    return BigInt(std::string(s));
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  const BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'", 0);
  return Rational(parse_int(text.substr(0, slash)), den);
}

}  // namespace ordpat
