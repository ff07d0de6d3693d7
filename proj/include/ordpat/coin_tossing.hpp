#pragma once

// The coin tossing order: a random total order on objects X_1, X_2, ...
// built without numeric values. Object j is compared with X_{j-1}, X_{j-2},
// ..., X_1 in that order; a fair coin decides each comparison unless the
// relation already follows from transitivity, in which case no coin is used.
// Coin c_ji = 0 means X_i < X_j. The stream is read in the order
// c21, c32, c31, c43, c42, c41, ... skipping the comparisons that are implied.
//
// The number of coins needed to produce a pattern pi has the closed form
// u(pi) = #{ (i, j) : i < j, no k in (i, j) with pi_k strictly between
// pi_i and pi_j }, and the pattern probabilities of consecutive objects are
// p_pi = 2^-u(pi).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ordpat/contrasts.hpp"
#include "ordpat/entropy.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/measure.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/pattern.hpp"

namespace ordpat {

/// Fair bits, 64 per engine call, consumed in order.
class CoinStream {
 public:
  explicit CoinStream(std::uint64_t seed) : rng_(seed) {}

  int next() {
    if (left_ == 0) {
      bits_ = rng_();
      left_ = 64;
    }
    const int c = static_cast<int>(bits_ & 1u);
    bits_ >>= 1;
    --left_;
    ++consumed_;
    return c;
  }

  std::size_t consumed() const noexcept { return consumed_; }

 private:
  std::mt19937_64 rng_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
  std::size_t consumed_ = 0;
};

/// Total order on the first n objects.
struct OrderPrefix {
  std::size_t n = 0;
  std::vector<std::size_t> ranks;  // ranks[i] = rank of X_{i+1} in 1..n
  std::size_t coins_consumed = 0;
};

/// Incremental coin tossing order. Objects are kept sorted by value, and the
/// new object's feasible slot [lo, hi] is narrowed comparison by comparison.
class CoinTossingOrder {
 public:
  /// Appends X_{n+1}, reading coins from `coin` as needed.
  template <class CoinSource>
  void add(CoinSource&& coin) {
    const std::size_t j = position_.size();
    std::size_t lo = 0, hi = j;  // slot s means s objects lie below the new one
    for (std::size_t i = j; i-- > 0 && lo < hi;) {
      const std::size_t pos = position_[i];
      if (pos < lo || pos >= hi) continue;  // fixed by transitivity
      ++coins_;
      if (coin() == 0) {
        lo = pos + 1;  // X_i < X_j
      } else {
        hi = pos;  // X_i > X_j
      }
    }
    for (auto& p : position_) {
      if (p >= lo) ++p;
    }
    position_.push_back(lo);
  }

  std::size_t size() const noexcept { return position_.size(); }
  std::size_t coins_consumed() const noexcept { return coins_; }

  /// 1-based rank of every object inserted so far.
  std::vector<std::size_t> ranks() const {
    std::vector<std::size_t> r(position_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = position_[i] + 1;
    return r;
  }

  /// 0-based sorted position of object i; comparable across objects.
  std::size_t position(std::size_t i) const { return position_.at(i); }

 private:
  std::vector<std::size_t> position_;
  std::size_t coins_ = 0;
};

inline OrderPrefix coin_tossing_prefix(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("prefix needs n >= 1");
  CoinStream coins(seed);
  CoinTossingOrder order;
  for (std::size_t k = 0; k < n; ++k) order.add([&] { return coins.next(); });
  return {n, order.ranks(), order.coins_consumed()};
}

/// Number of coin tosses that produce pi.
inline int u_energy(const Pattern& p) {
  const int m = p.length();
  int u = 0;
  for (int i = 0; i < m; ++i) {
    // Walking right from i, a pair (i, j) counts while no earlier k in between
    // has a rank strictly between pi_i and pi_j. Track the nearest ranks below
    // and above pi_i seen so far; pi_j is visible iff it lies outside them.
    int below = 0, above = m + 1;
    const int pi = p[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j) {
      const int pj = p[static_cast<std::size_t>(j)];
      if (pj < pi) {
        if (pj > below) {
          ++u;
          below = pj;
        }
      } else if (pj < above) {
        ++u;
        above = pj;
      }
      if (below == pi - 1 && above == pi + 1) break;
    }
  }
  return u;
}

/// Exact law 2^-u(pi) of m consecutive objects, m <= 10.
inline DyadicMeasure coin_tossing_distribution(int m) {
  if (m < 1 || m > 10) throw SizeLimit("exact coin tossing law is limited to m <= 10");
  DyadicMeasure q;
  q.m = m;
  q.exponent = m * (m - 1) / 2;  // u never exceeds the number of pairs
  const std::size_t n = factorial(m);
  q.numerators.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int u = u_energy(Pattern::from_index(m, i));
    q.numerators[i] = std::uint64_t{1} << (q.exponent - u);
  }
  return q;
}

/// Exact law of the stride-d sub-pattern of (m-1)d+1 consecutive objects.
inline DyadicMeasure coin_tossing_distribution_delayed_exact(int m, int d) {
  if (m < 2 || d < 1) throw InvalidArgument("need m >= 2 and d >= 1");
  const int n = (m - 1) * d + 1;
  if (n > 10) throw SizeLimit("exact delayed law needs (m-1)d+1 <= 10 objects, got " + std::to_string(n));
  DyadicMeasure q;
  q.m = m;
  q.exponent = n * (n - 1) / 2;
  q.numerators.assign(factorial(m), 0);
  std::vector<int> ranks(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) ranks[static_cast<std::size_t>(k)] = k + 1;
  std::vector<int> stride(static_cast<std::size_t>(m));
  do {
    const Pattern eta(std::span<const int>(ranks.data(), ranks.size()));
    for (int k = 0; k < m; ++k) stride[static_cast<std::size_t>(k)] = ranks[static_cast<std::size_t>(k * d)];
    const std::uint64_t sub = pattern_of(stride).index();
    q.numerators[sub] += std::uint64_t{1} << (q.exponent - u_energy(eta));
  } while (std::next_permutation(ranks.begin(), ranks.end()));
  return q;
}

struct ExactMethod {};
struct MonteCarloMethod {
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
};
using DelayedMethod = std::variant<ExactMethod, MonteCarloMethod>;

/// Law of the delay-d pattern of length m, exact or from independent prefixes.
inline PatternDistribution coin_tossing_distribution_delayed(int m, int d, const DelayedMethod& method) {
  if (std::holds_alternative<ExactMethod>(method)) return coin_tossing_distribution_delayed_exact(m, d).to_distribution();
  const auto& mc = std::get<MonteCarloMethod>(method);
  if (m < 2 || m > 10 || d < 1) throw InvalidArgument("need 2 <= m <= 10 and d >= 1");
  const std::size_t n = static_cast<std::size_t>((m - 1) * d + 1);
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(mc.samples, 256));
  auto partial = parallel_map(blocks, [&](std::size_t b) {
    std::vector<std::uint64_t> counts(factorial(m), 0);
    const std::size_t first = mc.samples * b / blocks, last = mc.samples * (b + 1) / blocks;
    std::vector<std::size_t> stride(static_cast<std::size_t>(m));
    for (std::size_t s = first; s < last; ++s) {
      CoinStream coins(derive_seed(mc.seed, s));
      CoinTossingOrder order;
      for (std::size_t k = 0; k < n; ++k) order.add([&] { return coins.next(); });
      for (int k = 0; k < m; ++k) stride[static_cast<std::size_t>(k)] = order.position(static_cast<std::size_t>(k * d));
      ++counts[pattern_of(stride).index()];
    }
    return counts;
  });
  PatternCounts total;
  total.m = m;
  total.d = d;
  total.counts.assign(factorial(m), 0);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < part.size(); ++i) total.counts[i] += part[i];
  }
  total.windows = mc.samples;
  return PatternDistribution::from_counts(total);
}

/// Both sides of H(Q) = M_Q(u) log 2 for the coin tossing law Q on S_m.
struct GibbsReport {
  int m = 0;
  double entropy = 0.0;      // H(Q)
  double mean_energy = 0.0;  // M_Q(u)
  double energy_nats() const noexcept { return mean_energy * std::log(2.0); }
};

inline GibbsReport gibbs_check(int m) {
  const DyadicMeasure q = coin_tossing_distribution(m);
  GibbsReport r;
  r.m = m;
  for (std::size_t i = 0; i < q.numerators.size(); ++i) {
    const double p = q.probability_double(i);
    r.entropy -= p * std::log(p);
    r.mean_energy += p * static_cast<double>(u_energy(Pattern::from_index(m, i)));
  }
  return r;
}

/// H(Q') and M_{Q'}(u) log 2 for an arbitrary law Q'; the first never exceeds the second.
inline std::pair<double, double> gibbs_sides(const PatternDistribution& q) {
  double mean_u = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    mean_u += q[i] * static_cast<double>(u_energy(Pattern::from_index(q.m(), i)));
  }
  return {permutation_entropy(q), mean_u * std::log(2.0)};
}

}  // namespace ordpat
