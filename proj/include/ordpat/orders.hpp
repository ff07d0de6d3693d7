#pragma once

// Random orders on the positive integers described only through their
// pattern laws P_m: interval coding, histograms, marginals, consistency and
// stationarity checks, and the Markov extension P_m -> P_{m+1}.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "ordpat/errors.hpp"
#include "ordpat/measure.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/rational.hpp"

namespace ordpat {

// ---------------------------------------------------------------------------
// Interval coding

/// I(pi) = [left, left + length); the interval touching 1 is closed.
struct OrderInterval {
  Rational left = 0;
  Rational length = 1;

  Rational right() const { return left + length; }
  bool closed_right() const { return right() == 1; }

  bool contains(const Rational& x) const {
    if (x < left) return false;
    return closed_right() ? x <= right() : x < right();
  }
};

/// r_k = #{ j < k : pi_j > pi_k } for k = 2..m (index k-2 in the result).
inline std::vector<int> inversion_digits(const Pattern& p) {
  std::vector<int> r;
  for (int k = 1; k < p.length(); ++k) {
    int c = 0;
    for (int j = 0; j < k; ++j) c += p[static_cast<std::size_t>(j)] > p[static_cast<std::size_t>(k)];
    r.push_back(c);
  }
  return r;
}

/// x(pi) = sum_k r_k / k!, length 1/m!.
inline OrderInterval interval_of(const Pattern& p) {
  OrderInterval I;
  const auto r = inversion_digits(p);
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto k = static_cast<int>(i) + 2;
    I.left += make_rational(r[i], static_cast<std::int64_t>(factorial(k)));
  }
  I.length = make_rational(1, static_cast<std::int64_t>(factorial(p.length())));
  return I;
}

inline OrderInterval interval_of(std::span<const double> window) { return interval_of(pattern_of_window(window)); }

/// The pattern in S_m whose interval contains x in [0, 1].
inline Pattern pattern_at(int m, const Rational& x) {
  if (m < 1 || m > kMaxPatternLength) throw InvalidArgument("pattern length out of range");
  if (x < 0 || x > 1) throw InvalidArgument("interval coding point must lie in [0, 1]");
  // Read off the mixed-radix digits, then insert each new position with k - r_k as its rank.
  std::vector<int> ranks{1};
  Rational rest = x;
  for (int k = 2; k <= m; ++k) {
    const Rational scaled = rest * static_cast<std::int64_t>(factorial(k));
    BigInt digit = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
    if (digit > k - 1) digit = k - 1;
    const int r = digit.convert_to<int>();
    rest -= make_rational(r, static_cast<std::int64_t>(factorial(k)));
    const int rank = k - r;
    for (int& v : ranks) {
      if (v >= rank) ++v;
    }
    ranks.push_back(rank);
  }
  return Pattern(std::span<const int>(ranks));
}

/// Piecewise constant density on [0, 1], pieces sorted by left endpoint.
struct StepFunction {
  struct Piece {
    OrderInterval interval;
    Rational height;
  };
  std::vector<Piece> pieces;

  Rational operator()(const Rational& x) const {
    for (const auto& p : pieces) {
      if (p.interval.contains(x)) return p.height;
    }
    return 0;
  }

  Rational integral() const {
    Rational s = 0;
    for (const auto& p : pieces) s += p.height * p.interval.length;
    return s;
  }

  Rational integral_over(const OrderInterval& I) const {
    Rational s = 0;
    for (const auto& p : pieces) {
      const Rational lo = std::max(p.interval.left, I.left);
      const Rational hi = std::min(p.interval.right(), I.right());
      if (hi > lo) s += p.height * (hi - lo);
    }
    return s;
  }
};

/// F_m = m! P_m(pi) on I(pi).
inline StepFunction histogram(const PatternMeasure& P) {
  StepFunction f;
  const auto scale = static_cast<std::int64_t>(factorial(P.m()));
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Pattern p = Pattern::from_index(P.m(), i);
    f.pieces.push_back({interval_of(p), P[i] * scale});
  }
  std::sort(f.pieces.begin(), f.pieces.end(),
            [](const auto& a, const auto& b) { return a.interval.left < b.interval.left; });
  return f;
}

// ---------------------------------------------------------------------------
// Marginals and checks

/// Law of the sub-pattern at the given 0-based increasing positions.
inline PatternMeasure restrict(const PatternMeasure& P, std::span<const int> positions) {
  const auto k = static_cast<int>(positions.size());
  if (k < 1 || k > P.m()) throw InvalidArgument("restriction needs 1 <= k <= m positions");
  for (std::size_t i = 1; i < positions.size(); ++i) {
    if (positions[i] <= positions[i - 1]) throw InvalidArgument("restriction positions must increase");
  }
  std::vector<Rational> out(factorial(k), Rational(0));
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P[i] == 0) continue;
    out[sub_pattern(Pattern::from_index(P.m(), i), positions).index()] += P[i];
  }
  return PatternMeasure(k, std::move(out));
}

inline PatternMeasure restrict(const PatternMeasure& P, int first, int len) {
  std::vector<int> pos(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) pos[static_cast<std::size_t>(i)] = first + i;
  return restrict(P, pos);
}

struct CheckResult {
  bool ok = true;
  Rational max_violation = 0;
  double max_violation_double() const { return to_double(max_violation); }
  explicit operator bool() const noexcept { return ok; }
};

namespace detail {

inline void track(CheckResult& r, const PatternMeasure& a, const PatternMeasure& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational diff = a[i] - b[i];
    if (diff < 0) diff = -diff;
    if (diff > r.max_violation) r.max_violation = diff;
  }
  r.ok = r.max_violation == 0;
}

}  // namespace detail

/// P_{m+1} shows P_m at its first m positions.
inline CheckResult check_consistency(const PatternMeasure& Pm, const PatternMeasure& Pm1) {
  if (Pm1.m() != Pm.m() + 1) throw WrongLength("consistency compares S_m with S_{m+1}");
  CheckResult r;
  detail::track(r, restrict(Pm1, 0, Pm.m()), Pm);
  return r;
}

/// Every contiguous sub-pattern law is the same at every offset.
inline CheckResult check_stationarity(const PatternMeasure& P) {
  CheckResult r;
  for (int k = 2; k < P.m(); ++k) {
    const PatternMeasure head = restrict(P, 0, k);
    for (int t = 1; t + k <= P.m(); ++t) detail::track(r, restrict(P, t, k), head);
    r.ok = r.max_violation == 0;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Markov extension

/// P_{m+1}(pi) = P_m(lambda) P_m(rho) / P_{m-1}(kappa), where lambda and rho show
/// the first and last m entries of pi and kappa the m-1 entries they share.
/// When pi_1 and pi_{m+1} are neighbours in rank the value is split equally
/// between pi and the pattern with those two entries swapped.
inline PatternMeasure markov_extension(const PatternMeasure& Pm) {
  const int m = Pm.m();
  if (m < 2) throw InvalidArgument("Markov extension needs m >= 2");
  if (m + 1 > 8) throw SizeLimit("exact pattern measures are limited to m <= 8");
  if (!check_stationarity(Pm)) throw NonStationaryInput("Markov extension needs a stationary P_m");
  std::vector<Rational> kappa_law{Rational(1)};
  if (m - 1 >= 2) {
    const PatternMeasure head = restrict(Pm, 0, m - 1);
    kappa_law.assign(head.probs().begin(), head.probs().end());
  }
  const std::size_t n = factorial(m + 1);
  std::vector<Rational> out(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i) {
    const Pattern pi = Pattern::from_index(m + 1, i);
    const Rational& a = Pm[sub_pattern(pi, 0, m)];
    const Rational& b = Pm[sub_pattern(pi, 1, m)];
    const Rational& c = m - 1 >= 2 ? kappa_law[sub_pattern(pi, 1, m - 1).index()] : kappa_law[0];
    const Rational num = a * b;
    if (c == 0) {
      if (num != 0) throw ZeroDenominator("pattern " + pi.to_string() + " has a positive numerator over a null sub-pattern");
      continue;
    }
    Rational v = num / c;
    const int gap = pi[0] - pi[static_cast<std::size_t>(m)];
    if (gap == 1 || gap == -1) v /= 2;
    out[i] = v;
  }
  Rational total = 0;
  for (const auto& v : out) total += v;
  if (total != 1) throw ConstraintViolation("Markov extension lost mass: total " + to_string(total));
  PatternMeasure next(m + 1, std::move(out));
  next.consistent_with_parent = check_consistency(Pm, next).ok;
  next.stationary = check_stationarity(next).ok;
  if (!next.consistent_with_parent || !next.stationary) {
    throw ConstraintViolation("Markov extension failed its own consistency or stationarity check");
  }
  return next;
}

/// Iterated extension up to S_M, M <= 8.
inline PatternMeasure extend_to(const PatternMeasure& Pm, int M) {
  if (M > 8) throw SizeLimit("extension is limited to M <= 8");
  if (M < Pm.m()) throw InvalidArgument("target length is below the input length");
  PatternMeasure P = Pm;
  while (P.m() < M) P = markov_extension(P);
  return P;
}

// ---------------------------------------------------------------------------
// Text format: "v1; m; index:numerator/denominator; ..." with zero entries omitted.

inline std::string serialize(const PatternMeasure& P) {
  std::string s = "v1; " + std::to_string(P.m());
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P[i] != 0) s += "; " + std::to_string(i) + ":" + to_string(P[i]);
  }
  return s;
}

inline PatternMeasure parse_measure(std::string_view text) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : text) {
    if (c == ';') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t' && c != '\n' && c != '\r') {
      cur += c;
    }
  }
  if (!cur.empty()) fields.push_back(cur);
  if (fields.size() < 2 || fields[0] != "v1") throw ParseError("pattern measure must start with 'v1; m'", 0);
  int m = 0;
  try {
    m = std::stoi(fields[1]);
  } catch (const std::exception&) {
    throw ParseError("bad pattern length '" + fields[1] + "'", 0);
  }
  if (m < 1 || m > 8) throw ParseError("pattern length must be in 1..8", 0);
  std::vector<Rational> probs(factorial(m), Rational(0));
  for (std::size_t f = 2; f < fields.size(); ++f) {
    if (fields[f].empty()) continue;
    const auto colon = fields[f].find(':');
    if (colon == std::string::npos) throw ParseError("entry '" + fields[f] + "' lacks ':'", 0);
    std::size_t idx = 0;
    try {
      idx = std::stoul(fields[f].substr(0, colon));
    } catch (const std::exception&) {
      throw ParseError("bad index in '" + fields[f] + "'", 0);
    }
    if (idx >= probs.size()) throw ParseError("index out of range in '" + fields[f] + "'", 0);
    probs[idx] = parse_rational(std::string_view(fields[f]).substr(colon + 1));
  }
  return PatternMeasure(m, std::move(probs));
}

}  // namespace ordpat
