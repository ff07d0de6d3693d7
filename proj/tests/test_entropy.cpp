#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ordpat/ordpat.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace ordpat;

namespace {

TEST(Entropy, KnownValues) {
  EXPECT_NEAR(permutation_entropy(PatternDistribution::uniform(3)), std::log(6.0), 1e-15);
  EXPECT_NEAR(max_entropy(3), 1.7918, 5e-5);
  const auto rw = PatternDistribution::model(3, {0.25, 0.125, 0.125, 0.125, 0.125, 0.25});
  EXPECT_NEAR(permutation_entropy(rw), 2.5 * std::log(2.0), 1e-15);
  const auto alt = PatternDistribution::model(3, {0, 0.5, 0, 0, 0.5, 0});
  EXPECT_NEAR(permutation_entropy(alt), std::log(2.0), 1e-15);
}

TEST(Entropy, Taylor) {
  const auto rw = PatternDistribution::model(3, {0.25, 0.125, 0.125, 0.125, 0.125, 0.25});
  EXPECT_NEAR(taylor_entropy(rw), std::log(6.0) - 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(taylor_entropy(rw), 1.7293, 5e-5);
  EXPECT_NEAR(permutation_entropy(rw) - taylor_entropy(rw), 2.5 * std::log(2.0) - std::log(6.0) + 1.0 / 16.0, 1e-15);
  for (int m = 3; m <= 6; ++m) EXPECT_EQ(taylor_entropy(PatternDistribution::uniform(m)), max_entropy(m));
}

TEST(Entropy, TaylorRemainder) {
  std::mt19937_64 rng(2);
  for (int m = 3; m <= 5; ++m) {
    const auto n = factorial(m);
    for (int rep = 0; rep < 200; ++rep) {
      std::vector<double> p(n, 1.0 / static_cast<double>(n));
      const auto dir = gen::simplex_point(rng, n);
      const double eps = std::uniform_real_distribution<double>(0.0, 0.05)(rng) / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) p[i] += eps * (dir[i] * static_cast<double>(n) - 1.0);
      const auto d = PatternDistribution::model(m, p);
      const double D2 = distance_to_white_noise(d);
      if (D2 > 1e-3) continue;
      // cubic term is n^2/6 sum eps^3, bounded by n^2/6 D2^(3/2)
      EXPECT_LE(std::abs(permutation_entropy(d) - taylor_entropy(d)),
                static_cast<double>(n * n) * std::pow(D2, 1.5) + 1e-15);
    }
  }
}

TEST(Entropy, SymmetricAndMaximalAtUniform) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 200; ++rep) {
    auto p = gen::simplex_point(rng, 24);
    const double h = permutation_entropy(PatternDistribution::model(4, p));
    std::shuffle(p.begin(), p.end(), rng);
    EXPECT_NEAR(permutation_entropy(PatternDistribution::model(4, p)), h, 1e-13);
    EXPECT_LT(h, max_entropy(4));
  }
}

TEST(Entropy, ReportFields) {
  const auto r = entropy_report(PatternDistribution::uniform(4), 500);
  EXPECT_EQ(r.z, 0.0);
  EXPECT_EQ(r.deviation, 0.0);
  EXPECT_NEAR(r.max_entropy, std::log(24.0), 1e-15);
}

TEST(ZStatistic, UsesSeriesLength) {
  const TimeSeries x = generate({ProcessKind::white_noise, Noise::normal, 0.5, 3}, 400);
  const auto r = z_statistic(x, {3, 1});
  EXPECT_EQ(r.series_length, 400u);
  const auto p = pattern_frequencies(x, {3, 1});
  EXPECT_NEAR(r.z, 400.0 * (std::log(6.0) - permutation_entropy(p)), 1e-12);
  std::vector<std::uint64_t> buf(6);
  EXPECT_NEAR(detail::z_of_values(x.values(), 3, 1, buf), r.z, 1e-12);
}

TEST(ZStatistic, PerfectlyUniformCounts) {
  PatternCounts c;
  c.m = 3;
  c.counts.assign(6, 50);
  c.windows = 300;
  EXPECT_NEAR(entropy_report(PatternDistribution::from_counts(c), 302).z, 0.0, 1e-12);
}

TEST(ZStatistic, TooShort) {
  const TimeSeries x = generate({ProcessKind::white_noise, Noise::normal, 0.5, 3}, 199);
  EXPECT_THROW(z_statistic(x, {3, 1}), SeriesTooShort);
}

TEST(ZStatistic, MeanUnderNull) {
  // Z is close to 3 T |p - p0|^2, whose mean tends to 3 trace(T Sigma)
  const auto sigma = oracle::iid_covariance3();
  double trace = 0.0;
  for (std::size_t i = 0; i < 6; ++i) trace += ordpat::to_double(sigma[i][i]);
  const auto z = simulate_z(3, 400, 20'000, 5);
  double mean = 0.0;
  for (double v : z) mean += v / static_cast<double>(z.size());
  EXPECT_NEAR(mean, 3.0 * trace, 0.05);
}

}  // namespace
