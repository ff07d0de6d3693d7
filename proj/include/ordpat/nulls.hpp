#pragma once

// Null-hypothesis machinery for serial dependence testing: exact asymptotic
// covariance of the m = 3 pattern frequencies, contrast moments and
// eigen-structure, quantiles of Z = T (log m! - H), and the tests built on them.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ordpat/contrasts.hpp"
#include "ordpat/entropy.hpp"
#include "ordpat/errors.hpp"
#include "ordpat/parallel.hpp"
#include "ordpat/processes.hpp"
#include "ordpat/quadratic_surd.hpp"
#include "ordpat/rational.hpp"
#include "ordpat/series.hpp"

namespace ordpat {

// ---------------------------------------------------------------------------
// Covariance matrices

enum class NullHypothesis { iid, symmetric_random_walk };

inline std::string_view to_string(NullHypothesis h) {
  return h == NullHypothesis::iid ? "iid" : "symmetric_random_walk";
}

using IntMatrix6 = std::array<std::array<int, 6>, 6>;
using RationalVector6 = std::array<Rational, 6>;

/// T-scaled covariance of the six m = 3 frequencies: T Sigma = numerators / scale.
/// Rows and columns are ordered 123, 132, 213, 231, 312, 321.
struct NullModel {
  NullHypothesis name = NullHypothesis::iid;
  IntMatrix6 numerators{};
  int scale = 1;

  Rational sigma(std::size_t i, std::size_t j) const { return make_rational(numerators[i][j], scale); }

  Eigen::Matrix<double, 6, 6> sigma_matrix() const {
    Eigen::Matrix<double, 6, 6> s;
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) s(i, j) = static_cast<double>(numerators[i][j]) / scale;
    }
    return s;
  }
};

inline NullModel null_covariance(NullHypothesis h) {
  if (h == NullHypothesis::iid) {
    return {h,
            {{{46, -23, -23, 7, 7, -14},
              {-23, 28, 10, -20, -2, 7},
              {-23, 10, 28, -2, -20, 7},
              {7, -20, -2, 28, 10, -23},
              {7, -2, -20, 10, 28, -23},
              {-14, 7, 7, -23, -23, 46}}},
            360};
  }
  return {h,
          {{{60, -6, -6, -6, -6, -36},
            {-6, 15, 7, -9, -1, -6},
            {-6, 7, 15, -1, -9, -6},
            {-6, -9, -1, 15, 7, -6},
            {-6, -1, -9, 7, 15, -6},
            {-36, -6, -6, -6, -6, 60}}},
          192};
}

enum class Contrast { beta, tau, gamma, delta, tau4, beta4 };

inline std::string_view to_string(Contrast c) {
  switch (c) {
    case Contrast::beta: return "beta";
    case Contrast::tau: return "tau";
    case Contrast::gamma: return "gamma";
    case Contrast::delta: return "delta";
    case Contrast::tau4: return "tau4";
    case Contrast::beta4: return "beta4";
  }
  return "?";
}

inline Contrast parse_contrast(std::string_view s) {
  for (Contrast c : {Contrast::beta, Contrast::tau, Contrast::gamma, Contrast::delta, Contrast::tau4, Contrast::beta4}) {
    if (to_string(c) == s) return c;
  }
  throw InvalidArgument("unknown contrast '" + std::string(s) + "'");
}

/// Coefficient vector of a length-3 contrast.
inline RationalVector6 contrast_direction(Contrast c) {
  const Rational z = 0, one = 1, m1 = -1, a = make_rational(2, 3), b = make_rational(-1, 3);
  switch (c) {
    case Contrast::beta: return {one, z, z, z, z, m1};
    case Contrast::tau: return {a, b, b, b, b, a};
    case Contrast::gamma: return {z, m1, one, one, m1, z};
    case Contrast::delta: return {z, one, one, m1, m1, z};
    default: throw WrongLength("contrast direction exists only for beta, tau, gamma, delta");
  }
}

/// Normalization constraint vector (1, ..., 1).
inline RationalVector6 constraint_sum() { return {1, 1, 1, 1, 1, 1}; }
/// Local extremum balance (0, -1, 1, -1, 1, 0).
inline RationalVector6 constraint_balance() { return {0, -1, 1, -1, 1, 0}; }

/// x (T Sigma) y^T.
inline Rational quadratic_form(const NullModel& model, const RationalVector6& x, const RationalVector6& y) {
  Rational s = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t j = 0; j < 6; ++j) s += x[i] * model.numerators[i][j] * y[j];
  }
  return s / model.scale;
}

/// (T Sigma) x^T as a vector.
template <class Scalar>
std::array<Scalar, 6> apply_sigma(const NullModel& model, const std::array<Scalar, 6>& x) {
  std::array<Scalar, 6> out{};
  for (std::size_t i = 0; i < 6; ++i) {
    Scalar s{};
    for (std::size_t j = 0; j < 6; ++j) s += Scalar(Rational(model.numerators[i][j])) * x[j];
    out[i] = s * Scalar(make_rational(1, model.scale));
  }
  return out;
}

/// T Var and T Cov of (beta, tau, gamma, delta).
struct ContrastMoments {
  NullHypothesis name = NullHypothesis::iid;
  std::array<std::array<Rational, 4>, 4> cov{};  // order beta, tau, gamma, delta

  static std::size_t slot(Contrast c) {
    switch (c) {
      case Contrast::beta: return 0;
      case Contrast::tau: return 1;
      case Contrast::gamma: return 2;
      case Contrast::delta: return 3;
      default: throw WrongLength("moments cover beta, tau, gamma, delta only");
    }
  }

  const Rational& variance(Contrast c) const { return cov[slot(c)][slot(c)]; }
  const Rational& covariance(Contrast a, Contrast b) const { return cov[slot(a)][slot(b)]; }
  double correlation(Contrast a, Contrast b) const {
    return to_double(covariance(a, b)) / std::sqrt(to_double(variance(a)) * to_double(variance(b)));
  }
};

inline ContrastMoments contrast_moments(const NullModel& model) {
  constexpr std::array<Contrast, 4> order{Contrast::beta, Contrast::tau, Contrast::gamma, Contrast::delta};
  ContrastMoments m;
  m.name = model.name;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      m.cov[i][j] = quadratic_form(model, contrast_direction(order[i]), contrast_direction(order[j]));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Eigen-structure

/// Closed-form eigenpair of T Sigma, checked in exact arithmetic.
struct ClosedFormEigenpair {
  std::string label;
  QuadraticSurd value;
  std::array<QuadraticSurd, 6> vector;
  bool verified = false;  // (T Sigma) v == value * v exactly
};

struct EigenStructure {
  NullHypothesis name = NullHypothesis::iid;
  std::array<double, 6> numeric_values{};  // ascending, from a symmetric eigensolver
  Eigen::Matrix<double, 6, 6> numeric_vectors;  // unit columns matching numeric_values
  std::vector<ClosedFormEigenpair> closed_form;
};

inline bool is_exact_eigenpair(const NullModel& model, const std::array<QuadraticSurd, 6>& v,
                               const QuadraticSurd& lambda) {
  const auto sv = apply_sigma(model, v);
  for (std::size_t i = 0; i < 6; ++i) {
    if (!(sv[i] == lambda * v[i])) return false;
  }
  return true;
}

inline EigenStructure eigen_structure(const NullModel& model) {
  EigenStructure e;
  e.name = model.name;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>> solver(model.sigma_matrix());
  for (int i = 0; i < 6; ++i) e.numeric_values[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  e.numeric_vectors = solver.eigenvectors();

  auto lift = [](const RationalVector6& r) {
    std::array<QuadraticSurd, 6> out;
    for (std::size_t i = 0; i < 6; ++i) out[i] = QuadraticSurd(r[i]);
    return out;
  };
  auto add = [&](std::string label, QuadraticSurd lambda, std::array<QuadraticSurd, 6> v) {
    ClosedFormEigenpair p{std::move(label), lambda, v, false};
    p.verified = is_exact_eigenpair(model, p.vector, p.value);
    e.closed_form.push_back(std::move(p));
  };

  add("c1", QuadraticSurd(0), lift(constraint_sum()));
  add("c2", QuadraticSurd(0), lift(constraint_balance()));
  if (model.name == NullHypothesis::symmetric_random_walk) {
    add("beta", make_rational(1, 2), lift(contrast_direction(Contrast::beta)));
    add("tau", make_rational(3, 16), lift(contrast_direction(Contrast::tau)));
    add("gamma", make_rational(1, 12), lift(contrast_direction(Contrast::gamma)));
    add("delta", make_rational(1, 6), lift(contrast_direction(Contrast::delta)));
  } else {
    add("tau", make_rational(2, 15), lift(contrast_direction(Contrast::tau)));
    add("gamma", make_rational(1, 10), lift(contrast_direction(Contrast::gamma)));
    // -beta/2 +- (sqrt 2 / 4) delta, eigenvalues (2 +- sqrt 2) / 12.
    const auto beta = lift(contrast_direction(Contrast::beta));
    const auto delta = lift(contrast_direction(Contrast::delta));
    for (int sign : {+1, -1}) {
      std::array<QuadraticSurd, 6> v;
      for (std::size_t i = 0; i < 6; ++i) {
        v[i] = QuadraticSurd(make_rational(-1, 2)) * beta[i] +
               QuadraticSurd(Rational(0), make_rational(sign, 4)) * delta[i];
      }
      add(sign > 0 ? "-beta/2+delta/(2sqrt2)" : "-beta/2-delta/(2sqrt2)",
          QuadraticSurd(make_rational(2, 12), make_rational(sign, 12)), v);
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Quantiles of Z

enum class QuantileProvenance { published, simulated, formula };

inline std::string_view to_string(QuantileProvenance p) {
  switch (p) {
    case QuantileProvenance::published: return "published";
    case QuantileProvenance::simulated: return "simulated";
    case QuantileProvenance::formula: return "formula";
  }
  return "?";
}

/// Critical values z with P(Z <= z) = level under the i.i.d. null.
///
/// Tail probabilities between tabulated levels follow a log-linear curve
/// through the points (z, 1 - level) starting at (0, 1); beyond the last
/// level the last segment is extended. p_value() and critical() are inverse
/// to each other, so a test decision never disagrees with its p-value.
struct QuantileTable {
  int m = 3;
  std::size_t T = 0;
  std::vector<std::pair<double, double>> points;  // (level, z), ascending
  QuantileProvenance provenance = QuantileProvenance::published;
  std::uint64_t seed = 0;
  std::size_t n_reps = 0;

  std::string provenance_label() const {
    if (provenance == QuantileProvenance::simulated) {
      return "simulated(seed=" + std::to_string(seed) + ",n_reps=" + std::to_string(n_reps) + ")";
    }
    return std::string(to_string(provenance));
  }

  double p_value(double z) const {
    if (provenance == QuantileProvenance::formula) return std::min(1.0, std::exp(-2.0 * z / 3.0));
    if (z <= 0.0) return 1.0;
    const auto nodes = curve();
    std::size_t k = 1;
    while (k + 1 < nodes.size() && z > nodes[k].first) ++k;
    const auto [z0, l0] = nodes[k - 1];
    const auto [z1, l1] = nodes[k];
    return std::min(1.0, std::exp(l0 + (l1 - l0) * (z - z0) / (z1 - z0)));
  }

  double critical(double level) const {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must be in (0, 1)");
    if (provenance == QuantileProvenance::formula) return -1.5 * std::log(1.0 - level);
    for (const auto& [l, z] : points) {
      if (l == level) return z;
    }
    const double target = std::log(1.0 - level);
    const auto nodes = curve();
    std::size_t k = 1;
    while (k + 1 < nodes.size() && target < nodes[k].second) ++k;
    const auto [z0, l0] = nodes[k - 1];
    const auto [z1, l1] = nodes[k];
    return z0 + (target - l0) * (z1 - z0) / (l1 - l0);
  }

 private:
  // (z, log tail) nodes, starting at (0, 0).
  std::vector<std::pair<double, double>> curve() const {
    if (points.empty()) throw InvalidArgument("empty quantile table");
    std::vector<std::pair<double, double>> nodes{{0.0, 0.0}};
    for (const auto& [level, z] : points) {
      if (z > nodes.back().first) nodes.emplace_back(z, std::log(1.0 - level));
    }
    return nodes;
  }
};

/// Tail formula for m = 3: p = exp(-2z/3).
inline QuantileTable formula_quantile_table(std::size_t T = 0) {
  QuantileTable t;
  t.m = 3;
  t.T = T;
  t.provenance = QuantileProvenance::formula;
  for (double level : {0.95, 0.99, 0.999}) t.points.emplace_back(level, -1.5 * std::log(1.0 - level));
  return t;
}

namespace detail {

struct PublishedRow {
  double inv_T;  // 0 for the extrapolated limit
  std::array<double, 3> z;
};

inline const std::vector<PublishedRow>& published_rows(int m) {
  static const std::vector<PublishedRow> m3{
      {1.0 / 800, {4.46, 6.81, 10.36}}, {1.0 / 400, {4.47, 6.82, 10.37}}, {1.0 / 200, {4.49, 6.91, 10.39}}};
  static const std::vector<PublishedRow> m4{{0.0, {17.22, 21.55, 27.48}},
                                        {1.0 / 800, {17.29, 21.63, 27.56}},
                                        {1.0 / 400, {17.39, 21.75, 27.69}},
                                        {1.0 / 200, {17.64, 22.06, 28.08}},
                                        {1.0 / 100, {18.40, 22.89, 28.88}}};
  if (m == 3) return m3;
  if (m == 4) return m4;
  throw InvalidArgument("no built-in quantiles for m = " + std::to_string(m) + "; simulate them with `ordpat quantiles`");
}

}  // namespace detail

/// Published 95/99/99.9% critical values, linearly interpolated in 1/T and clamped
/// to the tabulated range.
inline QuantileTable published_quantile_table(int m, std::size_t T) {
  const auto& rows = detail::published_rows(m);
  const double x = T == 0 ? 0.0 : 1.0 / static_cast<double>(T);
  std::array<double, 3> z{};
  if (x <= rows.front().inv_T) {
    z = rows.front().z;
  } else if (x >= rows.back().inv_T) {
    z = rows.back().z;
  } else {
    std::size_t k = 1;
    while (x > rows[k].inv_T) ++k;
    const double w = (x - rows[k - 1].inv_T) / (rows[k].inv_T - rows[k - 1].inv_T);
    for (std::size_t i = 0; i < 3; ++i) z[i] = rows[k - 1].z[i] + w * (rows[k].z[i] - rows[k - 1].z[i]);
  }
  QuantileTable t;
  t.m = m;
  t.T = T;
  t.provenance = QuantileProvenance::published;
  t.points = {{0.95, z[0]}, {0.99, z[1]}, {0.999, z[2]}};
  return t;
}

/// Z of n_reps i.i.d. normal series of length T; replicate i uses derive_seed(seed, i).
inline std::vector<double> simulate_z(int m, std::size_t T, std::size_t n_reps, std::uint64_t seed) {
  WindowSpec{m, 1}.window_count(T);
  return parallel_map(n_reps, [&](std::size_t i) {
    thread_local std::vector<double> x;
    thread_local std::vector<std::uint64_t> counts;
    x.resize(T);
    counts.resize(factorial(m));
    NoiseSource noise(Noise::normal, derive_seed(seed, i));
    noise.fill(x);
    return detail::z_of_values(x, m, 1, counts);
  });
}

/// Sample quantile with linear interpolation between order statistics (R type 7).
inline double sample_quantile(std::span<const double> sorted, double level) {
  if (sorted.empty()) throw InvalidArgument("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * level;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline const std::vector<double>& default_simulated_levels() {
  static const std::vector<double> levels{0.5, 0.75, 0.9, 0.95, 0.975, 0.99, 0.995, 0.999};
  return levels;
}

/// Empirical quantiles of Z under the i.i.d. null, deterministic in seed.
inline QuantileTable simulate_quantiles(int m, std::size_t T, std::size_t n_reps, std::uint64_t seed,
                                        std::span<const double> levels = default_simulated_levels()) {
  if (n_reps < 10'000) throw InvalidArgument("quantile simulation needs at least 10000 replicates");
  std::vector<double> z = simulate_z(m, T, n_reps, seed);
  std::sort(z.begin(), z.end());
  QuantileTable t;
  t.m = m;
  t.T = T;
  t.provenance = QuantileProvenance::simulated;
  t.seed = seed;
  t.n_reps = n_reps;
  std::vector<double> sorted_levels(levels.begin(), levels.end());
  std::sort(sorted_levels.begin(), sorted_levels.end());
  for (double level : sorted_levels) t.points.emplace_back(level, sample_quantile(z, level));
  return t;
}

// ---------------------------------------------------------------------------
// Tests

enum class Direction { accepted, larger, smaller };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::accepted: return "accepted";
    case Direction::larger: return "larger";
    case Direction::smaller: return "smaller";
  }
  return "?";
}

struct TestReport {
  std::string statistic;  // "H3", "H4", "beta", ..., "beta4"
  int m = 3;
  int d = 1;
  std::size_t series_length = 0;
  double value = 0.0;        // Z for entropy tests, the contrast otherwise
  double null_mean = 0.0;    // contrasts only
  double null_scale = 0.0;   // sqrt(Var / T), contrasts only
  double critical = 0.0;     // Z quantile (entropy) or normal quantile (contrasts)
  double p_value = 1.0;
  double level = 0.95;
  bool rejected = false;
  Direction direction = Direction::accepted;
  std::string provenance;
};

namespace detail {

inline void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0, 1)");
}

/// Upper standard normal quantile by bisection on erfc.
inline double normal_upper_quantile(double tail) {
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(mid / std::sqrt(2.0)) > tail) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Entropy serial dependence test: rejects i.i.d. when Z is improbably large.
inline TestReport entropy_test(const TimeSeries& x, int m, int d, double level, const QuantileTable& quantiles,
                               const TieHandling& ties = {}) {
  detail::check_level(level);
  if (quantiles.m != m) throw WrongLength("quantile table is for m = " + std::to_string(quantiles.m));
  const EntropyReport z = z_statistic(x, WindowSpec{m, d}, ties);
  TestReport r;
  r.statistic = "H" + std::to_string(m);
  r.m = m;
  r.d = d;
  r.series_length = z.series_length;
  r.value = z.z;
  r.null_mean = std::nan("");
  r.null_scale = std::nan("");
  r.critical = quantiles.critical(level);
  r.p_value = quantiles.p_value(z.z);
  r.level = level;
  r.rejected = r.p_value <= 1.0 - level;
  r.direction = r.rejected ? Direction::larger : Direction::accepted;
  r.provenance = quantiles.provenance_label();
  return r;
}

/// T Var of a contrast under the i.i.d. null.
inline Rational iid_contrast_variance(Contrast c) {
  switch (c) {
    case Contrast::tau4: return make_rational(2 * 199 - 2 * 17, 4032);  // 182/2016
    case Contrast::beta4: return make_rational(2 * 199 + 2 * 17, 4032);  // 3/28
    default: return contrast_moments(null_covariance(NullHypothesis::iid)).variance(c);
  }
}

/// Two-sided normal test of one contrast against the i.i.d. null.
inline TestReport contrast_test(const TimeSeries& x, Contrast contrast, int d, double level,
                                const TieHandling& ties = {}) {
  detail::check_level(level);
  if (x.size() < kMinTestLength) throw SeriesTooShort("contrast test needs T >= 200, got " + std::to_string(x.size()));
  const bool length4 = contrast == Contrast::tau4 || contrast == Contrast::beta4;
  const WindowSpec w{length4 ? 4 : 3, d};
  const PatternCounts counts = count_patterns(x.values(), w, ties);
  const PatternDistribution p = PatternDistribution::from_counts(counts);
  double value = 0.0;
  if (length4) {
    const Length4Contrasts c4 = length4_contrasts(p);
    value = contrast == Contrast::tau4 ? c4.tau4 : c4.beta4;
  } else {
    const ContrastVector c = contrast_vector(p);
    switch (contrast) {
      case Contrast::beta: value = c.beta; break;
      case Contrast::tau: value = c.tau; break;
      case Contrast::gamma: value = c.gamma; break;
      default: value = c.delta; break;
    }
  }
  TestReport r;
  r.statistic = std::string(to_string(contrast));
  r.m = w.m;
  r.d = d;
  r.series_length = counts.used() + w.span() - 1;
  r.value = value;
  r.null_mean = 0.0;
  r.null_scale = std::sqrt(to_double(iid_contrast_variance(contrast)) / static_cast<double>(r.series_length));
  const double zscore = value / r.null_scale;
  r.critical = detail::normal_upper_quantile(0.5 * (1.0 - level));
  r.p_value = std::erfc(std::abs(zscore) / std::sqrt(2.0));
  r.level = level;
  r.rejected = r.p_value <= 1.0 - level;
  r.direction = !r.rejected ? Direction::accepted : (value > 0.0 ? Direction::larger : Direction::smaller);
  r.provenance = "normal";
  return r;
}

/// Resolves the quantile table used for an entropy test of length m on a series of length T.
using QuantileProvider = std::function<QuantileTable(int m, std::size_t T)>;

/// exp(-2z/3) for m = 3, published table for m = 4.
inline QuantileTable default_quantiles(int m, std::size_t T) {
  if (m == 3) return formula_quantile_table(T);
  return published_quantile_table(m, T);
}

struct BatchOptions {
  std::vector<int> entropy_lengths{3, 4};
  std::vector<Contrast> contrasts{Contrast::tau, Contrast::beta, Contrast::gamma,
                                  Contrast::delta, Contrast::tau4, Contrast::beta4};
  int d_max = 1;
  double level = 0.95;
  QuantileProvider quantiles = default_quantiles;
  TieHandling ties{};
};

/// Share of cells per statistic that accepted i.i.d. or rejected to either side.
struct BatchSummary {
  std::string statistic;
  double level = 0.95;
  std::size_t cells = 0;  // evaluated cells
  std::size_t accepted = 0;
  std::size_t larger = 0;
  std::size_t smaller = 0;
  std::size_t missing = 0;  // series too short or fully tied
  std::string provenance;

  double percent(std::size_t k) const { return cells == 0 ? std::nan("") : 100.0 * static_cast<double>(k) / cells; }
};

struct BatchCell {
  std::size_t epoch = 0;
  std::optional<TestReport> report;  // nullopt when missing
  std::string statistic;
  int d = 1;
};

struct BatchResult {
  std::vector<BatchCell> cells;
  std::vector<BatchSummary> summary;
};

/// Runs every statistic at every delay 1..d_max on every epoch.
inline BatchResult batch_test(std::span<const TimeSeries> epochs, const BatchOptions& opt) {
  detail::check_level(opt.level);
  if (opt.d_max < 1) throw InvalidArgument("d_max must be >= 1");
  struct Job {
    bool entropy;
    int m;
    Contrast contrast;
    std::string label;
  };
  std::vector<Job> jobs;
  for (int m : opt.entropy_lengths) jobs.push_back({true, m, Contrast::tau, "H" + std::to_string(m)});
  for (Contrast c : opt.contrasts) jobs.push_back({false, 0, c, std::string(to_string(c))});

  const std::size_t per_epoch = jobs.size() * static_cast<std::size_t>(opt.d_max);
  auto cells = parallel_map(epochs.size() * per_epoch, [&](std::size_t k) {
    const std::size_t e = k / per_epoch;
    const std::size_t rest = k % per_epoch;
    const int d = static_cast<int>(rest / jobs.size()) + 1;
    const Job& job = jobs[rest % jobs.size()];
    BatchCell cell;
    cell.epoch = e;
    cell.statistic = job.label;
    cell.d = d;
    try {
      if (job.entropy) {
        cell.report = entropy_test(epochs[e], job.m, d, opt.level, opt.quantiles(job.m, epochs[e].size()), opt.ties);
      } else {
        cell.report = contrast_test(epochs[e], job.contrast, d, opt.level, opt.ties);
      }
    } catch (const SeriesTooShort&) {
    } catch (const AllWindowsTied&) {
    }
    return cell;
  });

  BatchResult result;
  for (const Job& job : jobs) {
    BatchSummary s;
    s.statistic = job.label;
    s.level = opt.level;
    for (const BatchCell& c : cells) {
      if (c.statistic != job.label) continue;
      if (!c.report) {
        ++s.missing;
        continue;
      }
      ++s.cells;
      switch (c.report->direction) {
        case Direction::accepted: ++s.accepted; break;
        case Direction::larger: ++s.larger; break;
        case Direction::smaller: ++s.smaller; break;
      }
      if (s.provenance.empty()) s.provenance = c.report->provenance;
    }
    result.summary.push_back(std::move(s));
  }
  result.cells = std::move(cells);
  return result;
}

inline BatchResult batch_test(const TimeSeries& x, const BatchOptions& opt) {
  return batch_test(std::span<const TimeSeries>(&x, 1), opt);
}

}  // namespace ordpat
