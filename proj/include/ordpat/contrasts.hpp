#pragma once

// Pattern frequencies and the four length-3 pattern contrasts.
//
// Probability vectors are indexed lexicographically, which for m = 3 gives
// the order 123, 132, 213, 231, 312, 321. The contrasts are the inner
// products of p with
//
//   beta  = ( 1,    0,    0,    0,    0,   -1  )   up-down balance
//   tau   = ( 2/3, -1/3, -1/3, -1/3, -1/3,  2/3)   persistence
//   gamma = ( 0,   -1,    1,    1,   -1,    0  )   rotational asymmetry
//   delta = ( 0,    1,    1,   -1,   -1,    0  )   up-down scaling
//
// which together with c1 = (1,...,1) and c2 = (0,-1,1,-1,1,0) form an
// orthogonal basis of R^6. Hence 4|p - q|^2 splits into
// 3 dtau^2 + 2 dbeta^2 + dgamma^2 + ddelta^2 whenever p and q both satisfy
// sum p = 1 and <p, c2> = 0.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ordpat/errors.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/pattern.hpp"
#include "ordpat/rational.hpp"
#include "ordpat/series.hpp"

namespace ordpat {

/// Raw pattern counts of one series at one (m, d).
struct PatternCounts {
  int m = 3;
  int d = 1;
  std::vector<std::uint64_t> counts;  // m! entries, lexicographic
  std::size_t windows = 0;            // T - (m-1)d
  std::size_t skipped = 0;            // windows dropped because of ties

  std::size_t used() const noexcept { return windows - skipped; }
};

/// Counts patterns; tied windows are skipped (or removed by jitter first).
inline PatternCounts count_patterns(std::span<const double> x, const WindowSpec& w, const TieHandling& ties = {}) {
  PatternCounts c;
  c.m = w.m;
  c.d = w.d;
  c.windows = w.window_count(x.size());
  c.counts.assign(factorial(w.m), 0);
  std::vector<double> noisy;
  if (ties.policy == TiePolicy::jitter) {
    noisy = jittered(x, ties.seed);
    x = noisy;
  }
  detail::for_each_window(x, w, [&](std::size_t, std::optional<std::uint64_t> idx) {
    if (idx) {
      ++c.counts[*idx];
    } else {
      ++c.skipped;
    }
  });
  return c;
}

enum class DistributionKind { empirical, model };

/// Probability vector over S_m.
class PatternDistribution {
 public:
  PatternDistribution() = default;

  /// Model distribution; must sum to 1 within 1e-12.
  static PatternDistribution model(int m, std::vector<double> probs) {
    PatternDistribution p(m, std::move(probs), DistributionKind::model, 0);
    p.check_normalized();
    return p;
  }

  /// Relative frequencies over the windows that were not skipped.
  static PatternDistribution from_counts(const PatternCounts& c) {
    if (c.used() == 0) throw AllWindowsTied("every window contains tied values");
    std::vector<double> probs(c.counts.size());
    const auto n = static_cast<double>(c.used());
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = static_cast<double>(c.counts[i]) / n;
    return PatternDistribution(c.m, std::move(probs), DistributionKind::empirical, c.used());
  }

  static PatternDistribution uniform(int m) {
    const std::size_t n = factorial(m);
    return model(m, std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  int m() const noexcept { return m_; }
  DistributionKind kind() const noexcept { return kind_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const noexcept { return probs_[i]; }
  double operator[](const Pattern& p) const { return probs_.at(p.index()); }

  /// Number of windows behind an empirical distribution, 0 for models.
  std::size_t effective_windows() const noexcept { return windows_; }

  void check_normalized(double tol = 1e-12) const {
    double s = 0.0;
    for (double v : probs_) {
      if (!(v >= 0.0)) throw ConstraintViolation("negative or NaN pattern probability");
      s += v;
    }
    if (std::abs(s - 1.0) > tol) throw ConstraintViolation("pattern probabilities sum to " + std::to_string(s));
  }

  /// Element-wise mixture lambda p + (1 - lambda) q.
  friend PatternDistribution mix(double lambda, const PatternDistribution& p, const PatternDistribution& q) {
    if (p.m_ != q.m_) throw WrongLength("mixing distributions of different length");
    std::vector<double> r(p.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = lambda * p.probs_[i] + (1.0 - lambda) * q.probs_[i];
    return PatternDistribution(p.m_, std::move(r), DistributionKind::model, 0);
  }

 private:
  PatternDistribution(int m, std::vector<double> probs, DistributionKind kind, std::size_t windows)
      : m_(m), probs_(std::move(probs)), kind_(kind), windows_(windows) {
    if (m < 1 || m > 10) throw InvalidArgument("distribution length out of range");
    if (probs_.size() != factorial(m)) throw InvalidArgument("distribution must have m! entries");
  }

  int m_ = 0;
  std::vector<double> probs_;
  DistributionKind kind_ = DistributionKind::model;
  std::size_t windows_ = 0;
};

inline PatternDistribution pattern_frequencies(const TimeSeries& x, const WindowSpec& w, const TieHandling& ties = {}) {
  return PatternDistribution::from_counts(count_patterns(x.values(), w, ties));
}

/// Squared distance to white noise, sum (p_pi - 1/m!)^2.
inline double distance_to_white_noise(const PatternDistribution& p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double s = 0.0;
  for (double v : p.probs()) s += (v - u) * (v - u);
  return s;
}

/// p213 + p312 - p231 - p132; zero for order-stationary models.
inline double extremum_balance(const PatternDistribution& p) {
  if (p.m() != 3) throw WrongLength("extremum balance needs m = 3");
  return p[2] + p[4] - p[3] - p[1];
}

struct ContrastVector {
  double beta = 0.0;
  double tau = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double alpha = 2.0 / 3.0;  // turning rate 2/3 - tau
  double delta2 = 0.0;       // distance to white noise
};

inline ContrastVector contrast_vector(const PatternDistribution& p) {
  if (p.m() != 3) throw WrongLength("pattern contrasts are defined for m = 3, got m = " + std::to_string(p.m()));
  const double p123 = p[0], p132 = p[1], p213 = p[2], p231 = p[3], p312 = p[4], p321 = p[5];
  ContrastVector c;
  c.beta = p123 - p321;
  c.tau = p123 + p321 - 1.0 / 3.0;
  c.gamma = p213 + p231 - p132 - p312;
  c.delta = p132 + p213 - p231 - p312;
  c.alpha = 2.0 / 3.0 - c.tau;
  c.delta2 = distance_to_white_noise(p);
  return c;
}

/// Contrasts as exact ratios of counts.
struct ExactContrastVector {
  Rational beta, tau, gamma, delta, alpha, delta2;
};

inline ExactContrastVector exact_contrast_vector(const PatternCounts& c) {
  if (c.m != 3) throw WrongLength("pattern contrasts are defined for m = 3");
  if (c.used() == 0) throw AllWindowsTied("every window contains tied values");
  const auto n = static_cast<std::int64_t>(c.used());
  auto p = [&](std::size_t i) { return make_rational(static_cast<std::int64_t>(c.counts[i]), n); };
  ExactContrastVector e;
  e.beta = p(0) - p(5);
  e.tau = p(0) + p(5) - make_rational(1, 3);
  e.gamma = p(2) + p(3) - p(1) - p(4);
  e.delta = p(1) + p(2) - p(3) - p(4);
  e.alpha = make_rational(2, 3) - e.tau;
  e.delta2 = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    const Rational dev = p(i) - make_rational(1, 6);
    e.delta2 += dev * dev;
  }
  return e;
}

/// Components of 4|p - q|^2 along the four contrast directions.
struct PythagorasDecomposition {
  double total = 0.0;  // 4 |p - q|^2
  double tau_part = 0.0;
  double beta_part = 0.0;
  double gamma_part = 0.0;
  double delta_part = 0.0;

  double component_sum() const noexcept { return tau_part + beta_part + gamma_part + delta_part; }
};

namespace detail {

inline void require_constraints(const PatternDistribution& p, const char* name) {
  if (p.m() != 3) throw WrongLength(std::string(name) + " must have m = 3");
  double s = 0.0;
  for (double v : p.probs()) s += v;
  const double tol =
      p.kind() == DistributionKind::empirical ? 1.0 / static_cast<double>(p.effective_windows()) + 1e-12 : 1e-12;
  if (std::abs(s - 1.0) > 1e-12) throw ConstraintViolation(std::string(name) + " is not normalized");
  if (std::abs(extremum_balance(p)) > tol) {
    throw ConstraintViolation(std::string(name) + " violates p213 + p312 = p231 + p132");
  }
}

}  // namespace detail

inline PythagorasDecomposition pythagoras_check(const PatternDistribution& p, const PatternDistribution& reference) {
  detail::require_constraints(p, "distribution");
  detail::require_constraints(reference, "reference");
  const ContrastVector a = contrast_vector(p);
  const ContrastVector b = contrast_vector(reference);
  PythagorasDecomposition r;
  for (std::size_t i = 0; i < 6; ++i) r.total += (p[i] - reference[i]) * (p[i] - reference[i]);
  r.total *= 4.0;
  r.tau_part = 3.0 * (a.tau - b.tau) * (a.tau - b.tau);
  r.beta_part = 2.0 * (a.beta - b.beta) * (a.beta - b.beta);
  r.gamma_part = (a.gamma - b.gamma) * (a.gamma - b.gamma);
  r.delta_part = (a.delta - b.delta) * (a.delta - b.delta);
  return r;
}

/// Shares of 4 Delta^2 carried by each contrast; they sum to 1.
struct RelativeContributions {
  double beta = 0.0;
  double tau = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
};

inline RelativeContributions relative_contributions(const PatternDistribution& p) {
  const ContrastVector c = contrast_vector(p);
  const double parts = 3.0 * c.tau * c.tau + 2.0 * c.beta * c.beta + c.gamma * c.gamma + c.delta * c.delta;
  if (c.delta2 == 0.0 || parts == 0.0) throw DegenerateAtWhiteNoise("relative contributions undefined at white noise");
  // Normalized by the component sum, which equals 4 Delta^2 under the constraints.
  return {2.0 * c.beta * c.beta / parts, 3.0 * c.tau * c.tau / parts, c.gamma * c.gamma / parts,
          c.delta * c.delta / parts};
}

/// beta4 = p1234 - p4321 and tau4 = p1234 + p4321 - 1/12.
struct Length4Contrasts {
  double beta4 = 0.0;
  double tau4 = 0.0;
};

inline Length4Contrasts length4_contrasts(const PatternDistribution& p) {
  if (p.m() != 4) throw WrongLength("beta4/tau4 need m = 4");
  const double inc = p[0], dec = p[23];
  return {inc - dec, inc + dec - 1.0 / 12.0};
}

// ---------------------------------------------------------------------------
// Time-resolved statistics

struct SlidingOptions {
  std::size_t epoch_len = 1000;
  std::size_t hop = 1000;
  std::size_t smoothing_len = 1;
};

struct EpochContrast {
  std::size_t epoch = 0;  // 0-based epoch number
  std::size_t start = 0;  // 0-based first sample
  std::size_t windows = 0;
  std::size_t skipped = 0;
  bool missing = false;  // more than half of the windows were tied
  std::optional<ContrastVector> contrasts;
  double smoothed_alpha = std::nan("");  // NaN when no valid epoch is in reach
  bool edge_truncated = false;           // moving average clipped at a boundary
};

/// Per-epoch contrasts and a centered moving average of alpha over smoothing_len epochs.
inline std::vector<EpochContrast> sliding_contrast(const TimeSeries& x, const WindowSpec& w,
                                                   const SlidingOptions& opt, const TieHandling& ties = {}) {
  w.validate();
  if (w.m != 3) throw WrongLength("sliding contrasts need m = 3");
  if (opt.epoch_len < 200) throw InvalidArgument("epoch length must be at least 200 samples");
  if (opt.hop < 1) throw InvalidArgument("hop must be >= 1");
  if (opt.smoothing_len < 1) throw InvalidArgument("smoothing length must be >= 1");
  if (x.size() < opt.epoch_len) throw SeriesTooShort("series shorter than one epoch");
  w.window_count(opt.epoch_len);

  std::vector<double> noisy;
  std::span<const double> values = x.values();
  if (ties.policy == TiePolicy::jitter) {
    noisy = jittered(values, ties.seed);
    values = noisy;
  }
  const std::size_t n_epochs = (x.size() - opt.epoch_len) / opt.hop + 1;
  auto out = parallel_map(n_epochs, [&](std::size_t k) {
    EpochContrast e;
    e.epoch = k;
    e.start = k * opt.hop;
    const PatternCounts c = count_patterns(values.subspan(e.start, opt.epoch_len), w);
    e.windows = c.windows;
    e.skipped = c.skipped;
    e.missing = 2 * c.skipped > c.windows;
    if (!e.missing) e.contrasts = contrast_vector(PatternDistribution::from_counts(c));
    return e;
  });

  const std::size_t L = opt.smoothing_len;
  // Even lengths lean one epoch into the past.
  const std::size_t back = L / 2;
  const std::size_t ahead = L - 1 - back;
  for (std::size_t k = 0; k < n_epochs; ++k) {
    const std::size_t lo = k >= back ? k - back : 0;
    const std::size_t hi = std::min(n_epochs - 1, k + ahead);
    out[k].edge_truncated = (k < back) || (k + ahead > n_epochs - 1);
    double sum = 0.0;
    std::size_t cnt = 0;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (out[j].contrasts) {
        sum += out[j].contrasts->alpha;
        ++cnt;
      }
    }
    if (cnt > 0) out[k].smoothed_alpha = sum / static_cast<double>(cnt);
  }
  return out;
}

struct DelayContrast {
  int d = 1;
  std::size_t windows = 0;
  std::size_t skipped = 0;
  ContrastVector contrasts;
  std::optional<Length4Contrasts> length4;  // present when m = 4
};

/// Contrasts for d = 1..d_max. m = 3 gives the four contrasts; m = 4 adds beta4/tau4.
inline std::vector<DelayContrast> contrast_vs_delay(const TimeSeries& x, int m, int d_max,
                                                    const TieHandling& ties = {}) {
  if (m != 3 && m != 4) throw WrongLength("delay sweep supports m = 3 or m = 4");
  if (d_max < 1) throw InvalidArgument("d_max must be >= 1");
  WindowSpec{m, d_max}.window_count(x.size());
  std::vector<double> noisy;
  std::span<const double> values = x.values();
  if (ties.policy == TiePolicy::jitter) {
    noisy = jittered(values, ties.seed);
    values = noisy;
  }
  return parallel_map(static_cast<std::size_t>(d_max), [&](std::size_t i) {
    DelayContrast row;
    row.d = static_cast<int>(i) + 1;
    const PatternCounts c3 = count_patterns(values, WindowSpec{3, row.d});
    row.windows = c3.windows;
    row.skipped = c3.skipped;
    row.contrasts = contrast_vector(PatternDistribution::from_counts(c3));
    if (m == 4) row.length4 = length4_contrasts(PatternDistribution::from_counts(count_patterns(values, {4, row.d})));
    return row;
  });
}

}  // namespace ordpat
