#pragma once

// Exact probability measures on S_m.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ordpat/contrasts.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/rational.hpp"

namespace ordpat {

/// Probability measure on S_m with rational weights, indexed lexicographically.
class PatternMeasure {
 public:
  PatternMeasure() = default;

  PatternMeasure(int m, std::vector<Rational> probs) : m_(m), probs_(std::move(probs)) {
    if (m < 1 || m > 8) throw SizeLimit("exact pattern measures are limited to m <= 8");
    if (probs_.size() != factorial(m)) throw InvalidArgument("measure must have m! entries");
    Rational total = 0;
    for (const auto& p : probs_) {
      if (p < 0) throw ConstraintViolation("negative probability in pattern measure");
      total += p;
    }
    if (total != 1) throw ConstraintViolation("pattern measure sums to " + to_string(total) + ", not 1");
  }

  static PatternMeasure uniform(int m) {
    const auto n = static_cast<std::int64_t>(factorial(m));
    return PatternMeasure(m, std::vector<Rational>(static_cast<std::size_t>(n), make_rational(1, n)));
  }

  static PatternMeasure point_mass(const Pattern& p) {
    std::vector<Rational> probs(factorial(p.length()), Rational(0));
    probs[p.index()] = 1;
    return PatternMeasure(p.length(), std::move(probs));
  }

  int m() const noexcept { return m_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const Rational> probs() const noexcept { return probs_; }
  const Rational& operator[](std::size_t i) const { return probs_.at(i); }
  const Rational& operator[](const Pattern& p) const { return probs_.at(p.index()); }

  PatternDistribution to_distribution() const {
    std::vector<double> d(probs_.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = to_double(probs_[i]);
    // Rounded weights may miss 1 by a few ulps; the exact measure is normalized.
    double s = 0.0;
    for (double v : d) s += v;
    for (double& v : d) v /= s;
    return PatternDistribution::model(m_, std::move(d));
  }

  // equality ignores the verification flags
  friend bool operator==(const PatternMeasure& a, const PatternMeasure& b) { return a.m_ == b.m_ && a.probs_ == b.probs_; }

  // Flags set by the order-construction routines once verified.
  bool consistent_with_parent = false;
  bool stationary = false;

 private:
  int m_ = 0;
  std::vector<Rational> probs_;
};

/// Measure with dyadic weights numerator[i] / 2^exponent, usable up to m = 10.
struct DyadicMeasure {
  int m = 0;
  int exponent = 0;
  std::vector<std::uint64_t> numerators;

  Rational probability(std::size_t i) const {
    return Rational(BigInt(numerators.at(i)), BigInt(1) << exponent);
  }
  Rational probability(const Pattern& p) const { return probability(p.index()); }
  double probability_double(std::size_t i) const {
    return std::ldexp(static_cast<double>(numerators.at(i)), -exponent);
  }

  /// Sum of numerators equals 2^exponent exactly.
  bool normalized() const {
    BigInt s = 0;
    for (auto v : numerators) s += v;
    return s == (BigInt(1) << exponent);
  }

  PatternDistribution to_distribution() const {
    std::vector<double> d(numerators.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = probability_double(i);
    return PatternDistribution::model(m, std::move(d));
  }

  PatternMeasure to_measure() const {
    std::vector<Rational> r(numerators.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = probability(i);
    return PatternMeasure(m, std::move(r));
  }
};

}  // namespace ordpat
