#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ordpat/errors.hpp"
#include "ordpat/pattern.hpp"

namespace ordpat {

/// Finite real-valued series. NaN and infinities are rejected on construction.
class TimeSeries {
 public:
  TimeSeries() = default;

  explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw InvalidArgument("non-finite value at position " + std::to_string(i + 1));
      }
    }
  }

  TimeSeries(std::initializer_list<double> values) : TimeSeries(std::vector<double>(values)) {}

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Samples [first, first + count).
  TimeSeries slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size()) throw InvalidArgument("slice beyond end of series");
    return TimeSeries(std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                          values_.begin() + static_cast<std::ptrdiff_t>(first + count)));
  }

  TimeSeries reversed() const { return TimeSeries(std::vector<double>(values_.rbegin(), values_.rend())); }

 private:
  std::vector<double> values_;
};

/// Pattern length m and delay d.
struct WindowSpec {
  int m = 3;
  int d = 1;

  /// Number of samples covered by one window: (m - 1) d + 1.
  std::size_t span() const noexcept { return static_cast<std::size_t>(m - 1) * static_cast<std::size_t>(d) + 1; }

  void validate() const {
    if (m < 2 || m > 6) throw InvalidArgument("pattern length m must be in 2..6, got " + std::to_string(m));
    if (d < 1) throw InvalidArgument("delay d must be >= 1, got " + std::to_string(d));
  }

  /// Windows available in a series of length T, i.e. T - (m - 1) d; throws SeriesTooShort if none.
  std::size_t window_count(std::size_t T) const {
    validate();
    if (T < span()) {
      throw SeriesTooShort("series of length " + std::to_string(T) + " is too short for m=" + std::to_string(m) +
                           ", d=" + std::to_string(d));
    }
    return T - span() + 1;
  }
};

enum class TiePolicy { skip, jitter };

struct TieHandling {
  TiePolicy policy = TiePolicy::skip;
  std::uint64_t seed = 0;
};

/// Series plus uniform noise of magnitude 1e-9 (max - min); constant series use 1e-9 max(|x|, 1).
inline std::vector<double> jittered(std::span<const double> x, std::uint64_t seed) {
  std::vector<double> out(x.begin(), x.end());
  if (out.empty()) return out;
  const auto [lo, hi] = std::minmax_element(out.begin(), out.end());
  double scale = *hi - *lo;
  if (scale == 0.0) scale = std::max(std::abs(*lo), 1.0);
  const double magnitude = 1e-9 * scale;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-magnitude, magnitude);
  for (double& v : out) v += unif(rng);
  return out;
}

namespace detail {

/// Lexicographic index of the pattern at x[0], x[d], ..., x[(m-1)d], or nullopt on a tie.
/// Digit k of the index counts later entries smaller than entry k.
inline std::optional<std::uint64_t> window_index(const double* x, int m, std::size_t d) noexcept {
  std::uint64_t idx = 0;
  for (int k = 0; k < m; ++k) {
    const double v = x[static_cast<std::size_t>(k) * d];
    int smaller = 0;
    for (int j = k + 1; j < m; ++j) {
      const double w = x[static_cast<std::size_t>(j) * d];
      if (w == v) return std::nullopt;
      smaller += w < v;
    }
    idx = idx * static_cast<std::uint64_t>(m - k) + static_cast<std::uint64_t>(smaller);
  }
  return idx;
}

/// Calls fn(t, optional index) for every 0-based window start t.
template <class Fn>
void for_each_window(std::span<const double> x, const WindowSpec& w, Fn&& fn) {
  const std::size_t n = w.window_count(x.size());
  const auto d = static_cast<std::size_t>(w.d);
  for (std::size_t t = 0; t < n; ++t) fn(t, window_index(x.data() + t, w.m, d));
}

}  // namespace detail

/// One window: 1-based start time and its pattern, or nullopt when skipped for ties.
struct WindowPattern {
  std::size_t t = 0;
  std::optional<Pattern> pattern;
};

/// One entry per start time t = 1..T-(m-1)d.
inline std::vector<WindowPattern> extract_patterns(const TimeSeries& x, const WindowSpec& w,
                                                   const TieHandling& ties = {}) {
  w.window_count(x.size());
  std::vector<double> noisy;
  std::span<const double> values = x.values();
  if (ties.policy == TiePolicy::jitter) {
    noisy = jittered(values, ties.seed);
    values = noisy;
  }
  std::vector<WindowPattern> out;
  out.reserve(x.size());
  detail::for_each_window(values, w, [&](std::size_t t, std::optional<std::uint64_t> idx) {
    WindowPattern wp{t + 1, std::nullopt};
    if (idx) wp.pattern = Pattern::from_index(w.m, *idx);
    out.push_back(wp);
  });
  return out;
}

}  // namespace ordpat
