#pragma once

// Order patterns: permutations of {1..m} in rank notation.
//
// A window (x_1, ..., x_m) shows pattern pi when x_i < x_j exactly if
// pi_i < pi_j, i.e. pi_k is the rank of x_k inside the window. Patterns are
// written left to right along the time axis, so the series (1, 2, 0) shows
// 231. The canonical integer code is the lexicographic index of the rank
// sequence (123 -> 0, 132 -> 1, ..., 321 -> 5).

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <numeric>
#include <ranges>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ordpat/errors.hpp"

namespace ordpat {

/// Longest pattern representable; series analysis itself is limited to 6.
inline constexpr int kMaxPatternLength = 12;

constexpr std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

class Pattern {
 public:
  Pattern() = default;

  Pattern(std::initializer_list<int> ranks) : Pattern(std::span<const int>(ranks.begin(), ranks.size())) {}

  explicit Pattern(std::span<const int> ranks) {
    if (ranks.size() < 1 || ranks.size() > static_cast<std::size_t>(kMaxPatternLength)) {
      throw InvalidArgument("pattern length must be in 1.." + std::to_string(kMaxPatternLength));
    }
    m_ = static_cast<std::uint8_t>(ranks.size());
    std::array<bool, kMaxPatternLength + 1> seen{};
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      const int r = ranks[k];
      if (r < 1 || r > m_ || seen[static_cast<std::size_t>(r)]) {
        throw InvalidArgument("ranks are not a permutation of 1.." + std::to_string(m_));
      }
      seen[static_cast<std::size_t>(r)] = true;
      ranks_[k] = static_cast<std::uint8_t>(r);
    }
  }

  /// Parses digit notation such as "231" (m <= 9).
  static Pattern parse(std::string_view digits) {
    std::vector<int> ranks;
    for (char c : digits) {
      if (c < '1' || c > '9') throw InvalidArgument("bad pattern literal '" + std::string(digits) + "'");
      ranks.push_back(c - '0');
    }
    return Pattern(std::span<const int>(ranks));
  }

  /// Inverse of index(): the permutation with lexicographic rank `index` in S_m.
  static Pattern from_index(int m, std::uint64_t index) {
    if (m < 1 || m > kMaxPatternLength) throw InvalidArgument("pattern length out of range");
    if (index >= factorial(m)) throw InvalidArgument("pattern index out of range");
    std::array<int, kMaxPatternLength> pool{};
    std::iota(pool.begin(), pool.begin() + m, 1);
    int remaining = m;
    std::array<int, kMaxPatternLength> ranks{};
    for (int k = 0; k < m; ++k) {
      const std::uint64_t block = factorial(m - 1 - k);
      const auto digit = static_cast<int>(index / block);
      index %= block;
      ranks[k] = pool[digit];
      std::copy(pool.begin() + digit + 1, pool.begin() + remaining, pool.begin() + digit);
      --remaining;
    }
    return Pattern(std::span<const int>(ranks.data(), static_cast<std::size_t>(m)));
  }

  int length() const noexcept { return m_; }

  /// Rank at 0-based position k.
  int operator[](std::size_t k) const noexcept { return ranks_[k]; }

  std::span<const std::uint8_t> ranks() const noexcept { return {ranks_.data(), m_}; }

  std::uint64_t index() const noexcept {
    std::uint64_t idx = 0;
    for (int k = 0; k < m_; ++k) {
      int smaller_later = 0;
      for (int j = k + 1; j < m_; ++j) smaller_later += ranks_[j] < ranks_[k];
      idx = idx * static_cast<std::uint64_t>(m_ - k) + static_cast<std::uint64_t>(smaller_later);
    }
    return idx;
  }

  std::string to_string() const {
    std::string out;
    for (int k = 0; k < m_; ++k) {
      if (m_ > 9 && k > 0) out += '-';
      out += std::to_string(ranks_[k]);
    }
    return out;
  }

  friend bool operator==(const Pattern&, const Pattern&) = default;
  friend auto operator<=>(const Pattern& a, const Pattern& b) {
    if (a.m_ != b.m_) return a.m_ <=> b.m_;
    return std::lexicographical_compare_three_way(a.ranks_.begin(), a.ranks_.begin() + a.m_, b.ranks_.begin(),
                                                  b.ranks_.begin() + b.m_);
  }

 private:
  std::array<std::uint8_t, kMaxPatternLength> ranks_{};
  std::uint8_t m_ = 0;
};

/// Pattern shown by an arbitrary sequence of comparable values.
template <std::ranges::forward_range R>
Pattern pattern_of(const R& values) {
  const auto m = static_cast<std::size_t>(std::ranges::distance(values));
  if (m < 1 || m > static_cast<std::size_t>(kMaxPatternLength)) throw InvalidArgument("window length out of range");
  std::array<int, kMaxPatternLength> ranks{};
  std::size_t k = 0;
  for (auto it = std::ranges::begin(values); it != std::ranges::end(values); ++it, ++k) {
    int rank = 0;
    for (auto jt = std::ranges::begin(values); jt != std::ranges::end(values); ++jt) {
      if (jt != it && *jt == *it) throw TieError("tied values inside a window");
      rank += !(*it < *jt);
    }
    ranks[k] = rank;
  }
  return Pattern(std::span<const int>(ranks.data(), m));
}

/// pi_k = #{ j : values_j <= values_k }; TieError on equal values.
inline Pattern pattern_of_window(std::span<const double> values) { return pattern_of(values); }

/// Time reversal: ranks read right to left.
inline Pattern reverse_pattern(const Pattern& p) {
  std::array<int, kMaxPatternLength> r{};
  const int m = p.length();
  for (int k = 0; k < m; ++k) r[k] = p[static_cast<std::size_t>(m - 1 - k)];
  return Pattern(std::span<const int>(r.data(), static_cast<std::size_t>(m)));
}

/// Functional inverse; maps this notation to the bottom-to-top reading.
inline Pattern invert_pattern(const Pattern& p) {
  std::array<int, kMaxPatternLength> r{};
  const int m = p.length();
  for (int k = 0; k < m; ++k) r[p[static_cast<std::size_t>(k)] - 1] = k + 1;
  return Pattern(std::span<const int>(r.data(), static_cast<std::size_t>(m)));
}

/// Pattern shown by the entries at the given 0-based, increasing positions.
inline Pattern sub_pattern(const Pattern& p, std::span<const int> positions) {
  std::array<int, kMaxPatternLength> vals{};
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 0 || positions[i] >= p.length()) throw InvalidArgument("sub-pattern position out of range");
    vals[i] = p[static_cast<std::size_t>(positions[i])];
  }
  return pattern_of(std::span<const int>(vals.data(), positions.size()));
}

/// Contiguous sub-pattern of `len` entries starting at 0-based `first`.
inline Pattern sub_pattern(const Pattern& p, int first, int len) {
  std::array<int, kMaxPatternLength> pos{};
  std::iota(pos.begin(), pos.begin() + len, first);
  return sub_pattern(p, std::span<const int>(pos.data(), static_cast<std::size_t>(len)));
}

/// All of S_m in lexicographic order, so all_patterns(m)[i].index() == i.
inline std::vector<Pattern> all_patterns(int m) {
  if (m < 1 || m > 10) throw SizeLimit("all_patterns is limited to m <= 10");
  std::vector<int> ranks(static_cast<std::size_t>(m));
  std::iota(ranks.begin(), ranks.end(), 1);
  std::vector<Pattern> out;
  out.reserve(factorial(m));
  do {
    out.emplace_back(std::span<const int>(ranks));
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return out;
}

}  // namespace ordpat
