// Reproduction harness: computed value, published value, tolerance, verdict.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "cli.hpp"

namespace ordpat::cli {

namespace {

struct Sheet {
  std::string name;
  Reproduction r;

  explicit Sheet(std::string n) : name(std::move(n)) {
    r.table.columns = {"table", "cell", "computed", "published", "tolerance", "status"};
  }

  void near(const std::string& cell, double computed, double published, double tol) {
    const bool ok = std::abs(computed - published) <= tol;
    r.passed = r.passed && ok;
    r.table.add({name, cell, computed, published, tol, std::string(ok ? "PASS" : "FAIL")});
  }

  void exact(const std::string& cell, const std::string& computed, const std::string& published) {
    const bool ok = computed == published;
    r.passed = r.passed && ok;
    r.table.add({name, cell, computed, published, std::string("exact"), std::string(ok ? "PASS" : "FAIL")});
  }
};

constexpr std::array<const char*, 6> kNames3{"123", "132", "213", "231", "312", "321"};

Reproduction brown3(const RunConfig& cfg) {
  Sheet s("brown3");
  const std::size_t T = cfg.T ? cfg.T : 1'000'000;
  const TimeSeries x = generate({ProcessKind::symmetric_random_walk, Noise::normal, 0.5, cfg.seed}, T);
  const PatternDistribution p = pattern_frequencies(x, WindowSpec{3, 1});
  const std::array<double, 6> expect{0.25, 0.125, 0.125, 0.125, 0.125, 0.25};
  for (std::size_t i = 0; i < 6; ++i) s.near(std::string("p") + kNames3[i], p[i], expect[i], 0.002);
  return s.r;
}

Reproduction arpat(const RunConfig& cfg) {
  Sheet s("arpat");
  const std::size_t T = cfg.T ? cfg.T : 1'000'000;
  struct Row {
    Noise noise;
    std::array<double, 4> published;  // beta, tau, gamma, delta
  };
  const std::array<Row, 5> rows{{{Noise::normal, {0.0, 0.086, 0.0, 0.0}},
                                 {Noise::uniform, {0.0, 0.083, 0.042, 0.0}},
                                 {Noise::bernoulli, {0.0, 1.0 / 6.0, 1.0 / 6.0, 0.0}},
                                 {Noise::triangular, {-0.074, 0.088, 0.026, 0.048}},
                                 {Noise::exponential, {0.161, 0.107, 0.002, -0.095}}}};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const ContrastVector c = ar1_contrasts(rows[k].noise, T, derive_seed(cfg.seed, k));
    const std::string n(to_string(rows[k].noise));
    s.near(n + ".beta", c.beta, rows[k].published[0], 0.005);
    s.near(n + ".tau", c.tau, rows[k].published[1], 0.005);
    s.near(n + ".gamma", c.gamma, rows[k].published[2], 0.005);
    s.near(n + ".delta", c.delta, rows[k].published[3], 0.005);
  }
  return s.r;
}

Reproduction tailq(const RunConfig& cfg) {
  Sheet s("tailq");
  const std::size_t T = cfg.T ? cfg.T : 400;
  const std::size_t reps = cfg.reps ? cfg.reps : 100'000;
  const std::array<double, 3> levels{0.95, 0.99, 0.999};
  for (int m : {3, 4}) {
    const QuantileTable sim = simulate_quantiles(m, T, reps, derive_seed(cfg.seed, static_cast<std::uint64_t>(m)), levels);
    const QuantileTable published = published_quantile_table(m, T);
    const std::array<double, 3> tol = m == 3 ? std::array<double, 3>{0.1, 0.2, 0.5} : std::array<double, 3>{0.2, 0.3, 0.6};
    for (std::size_t i = 0; i < 3; ++i) {
      s.near("m" + std::to_string(m) + ".q" + format_double(levels[i]), sim.points[i].second, published.points[i].second,
             tol[i]);
    }
  }
  // Tail of Z for m = 3 against exp(-2z/3) on z in [2, 8].
  std::vector<double> z = simulate_z(3, T, reps, derive_seed(cfg.seed, 3));
  std::sort(z.begin(), z.end());
  double worst = 0.0;
  for (int k = 0; k <= 60; ++k) {
    const double zz = 2.0 + 0.1 * k;
    const auto above = static_cast<double>(z.end() - std::lower_bound(z.begin(), z.end(), zz));
    worst = std::max(worst, std::abs(above / static_cast<double>(z.size()) - std::exp(-2.0 * zz / 3.0)));
  }
  s.near("m3.tail.max_abs_diff", worst, 0.0, 0.003);
  return s.r;
}

Reproduction tabi(const RunConfig& cfg) {
  Sheet s("tabi");
  const std::size_t reps = cfg.reps ? cfg.reps : 100'000;
  const std::array<std::size_t, 4> Ts{100, 200, 400, 800};
  const std::array<double, 4> published_mean{0.320, 0.254, 0.224, 0.209};
  const std::array<double, 4> published_sd{0.0974, 0.0648, 0.0437, 0.0304};
  std::array<double, 4> mean{}, sd{};
  for (std::size_t k = 0; k < Ts.size(); ++k) {
    const std::size_t T = Ts[k];
    const std::uint64_t master = derive_seed(cfg.seed, T);
    const auto dev = parallel_map(reps, [&](std::size_t i) {
      thread_local std::vector<double> x;
      x.resize(T);
      generate_into({ProcessKind::symmetric_random_walk, Noise::normal, 0.5, derive_seed(master, i)}, x);
      const PatternCounts c = count_patterns(x, WindowSpec{4, 1});
      return entropy_report(PatternDistribution::from_counts(c)).deviation;
    });
    double sum = 0.0, sq = 0.0;
    for (double v : dev) sum += v;
    mean[k] = sum / static_cast<double>(reps);
    for (double v : dev) sq += (v - mean[k]) * (v - mean[k]);
    sd[k] = std::sqrt(sq / static_cast<double>(reps - 1));
    s.near("mean.T" + std::to_string(T), mean[k], published_mean[k], 0.005);
    s.near("sd.T" + std::to_string(T), sd[k], published_sd[k], 0.005);
  }
  // Bias against the published limit 0.194, and the published sigma ratios.
  const std::array<double, 4> published_bias{0.126, 0.060, 0.030, 0.015};
  const std::array<double, 3> published_sd_ratio{1.50, 1.48, 1.44};
  for (std::size_t k = 0; k < Ts.size(); ++k) {
    s.near("bias.T" + std::to_string(Ts[k]), mean[k] - 0.194, published_bias[k], 0.005);
  }
  for (std::size_t k = 0; k + 1 < Ts.size(); ++k) {
    s.near("bias_ratio.T" + std::to_string(Ts[k]), (mean[k] - 0.194) / (mean[k + 1] - 0.194), 2.0, 0.15);
    s.near("sd_ratio.T" + std::to_string(Ts[k]), sd[k] / sd[k + 1], published_sd_ratio[k], 0.1);
  }
  return s.r;
}

Reproduction coin(const RunConfig&) {
  Sheet s("coin");
  for (int m = 2; m <= 7; ++m) {
    const DyadicMeasure q = coin_tossing_distribution(m);
    Rational total = 0;
    for (std::size_t i = 0; i < q.numerators.size(); ++i) total += q.probability(i);
    s.exact("sum.m" + std::to_string(m), to_string(total), "1");
    s.exact("p_increasing.m" + std::to_string(m), to_string(q.probability(0)),
            to_string(Rational(1) / (BigInt(1) << (m - 1))));
  }
  const DyadicMeasure q3 = coin_tossing_distribution(3);
  const std::array<const char*, 6> law{"1/4", "1/8", "1/8", "1/8", "1/8", "1/4"};
  for (std::size_t i = 0; i < 6; ++i) s.exact(std::string("p") + kNames3[i], to_string(q3.probability(i)), law[i]);
  const Pattern p1324 = Pattern::parse("1324");
  s.exact("P1324(1)", to_string(coin_tossing_distribution(4).probability(p1324)), "1/32");
  s.near("P1324(2)", coin_tossing_distribution_delayed_exact(4, 2).probability_double(p1324.index()), 0.0342, 0.0005);
  s.near("P1324(3)", coin_tossing_distribution_delayed_exact(4, 3).probability_double(p1324.index()), 0.0349, 0.0005);
  for (int m = 3; m <= 7; ++m) {
    const GibbsReport g = gibbs_check(m);
    s.near("gibbs.m" + std::to_string(m), g.entropy - g.energy_nats(), 0.0, 1e-12);
  }
  return s.r;
}

}  // namespace

Reproduction cmd_reproduce(const RunConfig& cfg) {
  if (cfg.table == "brown3") return brown3(cfg);
  if (cfg.table == "arpat") return arpat(cfg);
  if (cfg.table == "tailq") return tailq(cfg);
  if (cfg.table == "tabi") return tabi(cfg);
  if (cfg.table == "coin") return coin(cfg);
  throw UnknownTable("unknown table '" + cfg.table + "' (arpat, tailq, tabi, brown3, coin)");
}

}  // namespace ordpat::cli
