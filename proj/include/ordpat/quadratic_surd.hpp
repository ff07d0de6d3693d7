#pragma once

#include <cmath>
#include <string>

#include "ordpat/rational.hpp"

namespace ordpat {

/// Exact element a + b sqrt(2) of Q(sqrt 2).
struct QuadraticSurd {
  Rational a = 0;
  Rational b = 0;

  QuadraticSurd() = default;
  QuadraticSurd(Rational a_, Rational b_ = 0) : a(std::move(a_)), b(std::move(b_)) {}

  static QuadraticSurd sqrt2() { return {Rational(0), Rational(1)}; }

  double to_double() const { return ordpat::to_double(a) + ordpat::to_double(b) * std::sqrt(2.0); }

  std::string str() const { return ordpat::to_string(a) + " + " + ordpat::to_string(b) + "*sqrt(2)"; }

  friend QuadraticSurd operator+(const QuadraticSurd& x, const QuadraticSurd& y) { return {x.a + y.a, x.b + y.b}; }
  friend QuadraticSurd operator-(const QuadraticSurd& x, const QuadraticSurd& y) { return {x.a - y.a, x.b - y.b}; }
  friend QuadraticSurd operator*(const QuadraticSurd& x, const QuadraticSurd& y) {
    return {x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  QuadraticSurd& operator+=(const QuadraticSurd& y) { return *this = *this + y; }
  friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;
};

}  // namespace ordpat
