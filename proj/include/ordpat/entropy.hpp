#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ordpat/contrasts.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/series.hpp"

namespace ordpat {

/// Permutation entropy in nats and the derived deviation statistics.
struct EntropyReport {
  int m = 3;
  double entropy = 0.0;           // H = -sum p log p
  double max_entropy = 0.0;       // log m!
  double deviation = 0.0;         // log m! - H
  double z = 0.0;                 // T (log m! - H)
  double taylor_deviation = 0.0;  // (m!/2) Delta^2
  std::size_t series_length = 0;  // T used for z
};

inline constexpr double kNatsToBits = 1.4426950408889634;  // 1 / log 2

/// -sum p log p with 0 log 0 = 0.
inline double permutation_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

inline double permutation_entropy(const PatternDistribution& p) { return permutation_entropy(p.probs()); }

inline double max_entropy(int m) { return std::log(static_cast<double>(factorial(m))); }

/// Second-order expansion at white noise: log m! - (m!/2) Delta^2.
inline double taylor_entropy(const PatternDistribution& p) {
  return max_entropy(p.m()) - 0.5 * static_cast<double>(p.size()) * distance_to_white_noise(p);
}

/// Report for a distribution; z uses the supplied series length.
inline EntropyReport entropy_report(const PatternDistribution& p, std::size_t series_length = 0) {
  EntropyReport r;
  r.m = p.m();
  r.entropy = permutation_entropy(p);
  r.max_entropy = max_entropy(p.m());
  // Rounding can leave H a few ulps above log m! for uniform frequencies.
  r.deviation = std::max(0.0, r.max_entropy - r.entropy);
  r.taylor_deviation = 0.5 * static_cast<double>(p.size()) * distance_to_white_noise(p);
  r.series_length = series_length;
  r.z = static_cast<double>(series_length) * r.deviation;
  return r;
}

/// Minimum series length for the entropy and contrast tests.
inline constexpr std::size_t kMinTestLength = 200;

/// Z = T (log m! - H) with T = used windows + (m-1)d, i.e. the series length
/// when no window was skipped.
inline EntropyReport z_statistic(const TimeSeries& x, const WindowSpec& w, const TieHandling& ties = {}) {
  if (x.size() < kMinTestLength) {
    throw SeriesTooShort("entropy statistic needs T >= 200, got " + std::to_string(x.size()));
  }
  const PatternCounts c = count_patterns(x.values(), w, ties);
  const PatternDistribution p = PatternDistribution::from_counts(c);
  return entropy_report(p, c.used() + w.span() - 1);
}

namespace detail {

/// Z of a tie-free sample without allocation; counts must have m! slots.
inline double z_of_values(std::span<const double> x, int m, std::size_t d, std::span<std::uint64_t> counts) {
  std::fill(counts.begin(), counts.end(), 0);
  const std::size_t span = static_cast<std::size_t>(m - 1) * d + 1;
  const std::size_t n = x.size() - span + 1;
  std::size_t used = 0;
  for (std::size_t t = 0; t < n; ++t) {
    if (auto idx = window_index(x.data() + t, m, d)) {
      ++counts[*idx];
      ++used;
    }
  }
  const double inv = 1.0 / static_cast<double>(used);
  double h = 0.0;
  for (std::uint64_t c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) * inv;
      h -= p * std::log(p);
    }
  }
  const double dev = std::max(0.0, std::log(static_cast<double>(counts.size())) - h);
  return static_cast<double>(used + span - 1) * dev;
}

}  // namespace detail

}  // namespace ordpat
