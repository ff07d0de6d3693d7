#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace ordpat::cli {

namespace {

std::string csv_field(const Table::Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
    std::string operator()(double v) const { return std::isfinite(v) ? format_double(v) : ""; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

nlohmann::ordered_json json_field(const Table::Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return v;
    }
    nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

Table::Cell num(double v) { return v; }
Table::Cell count(std::size_t v) { return static_cast<std::int64_t>(v); }
Table::Cell maybe(const std::optional<ContrastVector>& c, double ContrastVector::*field) {
  if (!c) return std::monostate{};
  return (*c).*field;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

void write_table(const Table& t, Format f, std::ostream& out) {
  if (f == Format::csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << '\n';
    }
    return;
  }
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_field(row[i]);
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

TimeSeries read_series(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  bool content = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    // last field
    const auto cut = s.find_last_of(",; \t");
    std::string_view field = trim(cut == std::string_view::npos ? s : s.substr(cut + 1));
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    const bool parsed = ec == std::errc() && ptr == field.data() + field.size() && !field.empty();
    if (!parsed) {
      if (!content) {
        content = true;  // header
        continue;
      }
      throw ParseError("not a number: '" + std::string(field) + "'", lineno);
    }
    content = true;
    if (!std::isfinite(v)) throw ParseError("non-finite value '" + std::string(field) + "'", lineno);
    values.push_back(v);
  }
  if (values.empty()) throw ParseError("no numeric data", 0);
  return TimeSeries(std::move(values));
}

TimeSeries read_series_file(const std::string& path) {
  if (path == "-") return read_series(std::cin);
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open input file '" + path + "'");
  return read_series(in);
}

// ---------------------------------------------------------------------------

Table cmd_freq(const RunConfig& cfg, const TimeSeries& x) {
  const int m = cfg.m.value_or(3);
  const int d_first = cfg.d_max ? 1 : cfg.d;
  const int d_last = cfg.d_max ? *cfg.d_max : cfg.d;
  Table t;
  t.columns = {"d", "pattern", "index", "count", "windows", "skipped", "probability"};
  for (int d = d_first; d <= d_last; ++d) {
    const PatternCounts c = count_patterns(x.values(), WindowSpec{m, d}, cfg.tie_handling());
    if (c.used() == 0) throw AllWindowsTied("every window contains tied values at d = " + std::to_string(d));
    const auto n = static_cast<std::int64_t>(c.used());
    for (std::size_t i = 0; i < c.counts.size(); ++i) {
      Table::Cell p = static_cast<double>(c.counts[i]) / static_cast<double>(n);
      if (cfg.exact) p = to_string(make_rational(static_cast<std::int64_t>(c.counts[i]), n));
      t.add({std::int64_t{d}, Pattern::from_index(m, i).to_string(), count(i), count(c.counts[i]), count(c.windows),
             count(c.skipped), p});
    }
  }
  return t;
}

Table cmd_contrasts(const RunConfig& cfg, const TimeSeries& x) {
  const int m = cfg.m.value_or(3);
  const int d_max = cfg.d_max.value_or(cfg.d);
  Table t;
  t.columns = {"d", "windows", "skipped", "beta", "tau", "gamma", "delta", "alpha", "delta2"};
  if (m == 4) {
    t.columns.push_back("tau4");
    t.columns.push_back("beta4");
  }
  if (cfg.exact) {
    if (m != 3) throw WrongLength("exact contrasts are available for m = 3");
    WindowSpec{3, d_max}.window_count(x.size());
    for (int d = 1; d <= d_max; ++d) {
      const PatternCounts c = count_patterns(x.values(), WindowSpec{3, d}, cfg.tie_handling());
      const ExactContrastVector e = exact_contrast_vector(c);
      t.add({std::int64_t{d}, count(c.windows), count(c.skipped), to_string(e.beta), to_string(e.tau),
             to_string(e.gamma), to_string(e.delta), to_string(e.alpha), to_string(e.delta2)});
    }
    return t;
  }
  for (const DelayContrast& r : contrast_vs_delay(x, m, d_max, cfg.tie_handling())) {
    std::vector<Table::Cell> row{std::int64_t{r.d}, count(r.windows), count(r.skipped), r.contrasts.beta,
                                 r.contrasts.tau,   r.contrasts.gamma, r.contrasts.delta, r.contrasts.alpha,
                                 r.contrasts.delta2};
    if (r.length4) {
      row.push_back(r.length4->tau4);
      row.push_back(r.length4->beta4);
    }
    t.add(std::move(row));
  }
  return t;
}

Table cmd_track(const RunConfig& cfg, const TimeSeries& x) {
  SlidingOptions opt;
  opt.epoch_len = cfg.epoch ? cfg.epoch : 1000;
  opt.hop = cfg.hop ? cfg.hop : opt.epoch_len;
  opt.smoothing_len = cfg.smooth;
  Table t;
  t.columns = {"epoch", "start", "windows", "skipped", "missing", "alpha", "tau", "beta",
               "gamma", "delta", "smoothed_alpha", "edge_truncated"};
  for (const EpochContrast& e : sliding_contrast(x, WindowSpec{cfg.m.value_or(3), cfg.d}, opt, cfg.tie_handling())) {
    t.add({count(e.epoch), count(e.start), count(e.windows), count(e.skipped), e.missing,
           maybe(e.contrasts, &ContrastVector::alpha), maybe(e.contrasts, &ContrastVector::tau),
           maybe(e.contrasts, &ContrastVector::beta), maybe(e.contrasts, &ContrastVector::gamma),
           maybe(e.contrasts, &ContrastVector::delta), num(e.smoothed_alpha), e.edge_truncated});
  }
  return t;
}

Table cmd_test(const RunConfig& cfg, const TimeSeries& x) {
  std::vector<TimeSeries> epochs;
  if (cfg.epoch == 0) {
    epochs.push_back(x);
  } else {
    const std::size_t hop = cfg.hop ? cfg.hop : cfg.epoch;
    for (std::size_t s = 0; s + cfg.epoch <= x.size(); s += hop) epochs.push_back(x.slice(s, cfg.epoch));
    if (epochs.empty()) throw SeriesTooShort("series is shorter than one epoch");
  }
  BatchOptions opt;
  if (cfg.m) opt.entropy_lengths = {*cfg.m};
  opt.d_max = cfg.d_max.value_or(cfg.d);
  opt.level = cfg.level;
  opt.ties = cfg.tie_handling();
  const QuantileCache cache = QuantileCache::load(default_cache_path());
  opt.quantiles = [cache](int m, std::size_t T) {
    if (auto t = cache.find(m, T)) return *t;
    return default_quantiles(m, T);
  };
  const BatchResult r = batch_test(epochs, opt);

  Table t;
  if (cfg.summary) {
    t.columns = {"statistic", "level", "cells", "missing", "accepted_pct", "larger_pct", "smaller_pct", "provenance"};
    for (const BatchSummary& s : r.summary) {
      t.add({s.statistic, s.level, count(s.cells), count(s.missing), s.percent(s.accepted), s.percent(s.larger),
             s.percent(s.smaller), s.provenance});
    }
    return t;
  }
  t.columns = {"epoch", "d", "statistic", "T", "value", "null_scale", "critical", "p_value",
               "level", "decision", "direction", "provenance"};
  for (const BatchCell& c : r.cells) {
    if (!c.report) {
      t.add({count(c.epoch), std::int64_t{c.d}, c.statistic, std::monostate{}, std::monostate{}, std::monostate{},
             std::monostate{}, std::monostate{}, cfg.level, std::string("missing"), std::monostate{},
             std::monostate{}});
      continue;
    }
    const TestReport& rep = *c.report;
    t.add({count(c.epoch), std::int64_t{c.d}, c.statistic, count(rep.series_length), rep.value, num(rep.null_scale),
           rep.critical, rep.p_value, rep.level, std::string(rep.rejected ? "reject" : "accept"),
           std::string(to_string(rep.direction)), rep.provenance});
  }
  return t;
}

Table cmd_simulate(const RunConfig& cfg) {
  if (cfg.T == 0) throw InvalidArgument("simulate needs --T");
  ProcessSpec spec{parse_process_kind(cfg.process), parse_noise(cfg.noise), cfg.phi, cfg.seed};
  const TimeSeries x = generate(spec, cfg.T);
  Table t;
  t.columns = {"t", "value"};
  for (std::size_t i = 0; i < x.size(); ++i) t.add({count(i + 1), x[i]});
  return t;
}

Table cmd_quantiles(const RunConfig& cfg, const std::filesystem::path& cache_path) {
  const int m = cfg.m.value_or(4);
  const std::size_t T = cfg.T ? cfg.T : 400;
  const std::size_t reps = cfg.reps ? cfg.reps : 100'000;
  QuantileCache cache = QuantileCache::load(cache_path);
  std::string source = "cached";
  auto table = cache.find(m, T);
  if (!table || table->seed != cfg.seed || table->n_reps != reps) {
    table = simulate_quantiles(m, T, reps, cfg.seed);
    cache.upsert(*table);
    cache.save(cache_path);
    source = "simulated";
  }
  Table t;
  t.columns = {"m", "T", "level", "z", "seed", "n_reps", "source"};
  for (const auto& [level, z] : table->points) {
    t.add({std::int64_t{m}, count(T), level, z, count(table->seed), count(table->n_reps), source});
  }
  return t;
}

// ---------------------------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Ordinal pattern analysis of time series", "ordpat"};
  app.require_subcommand(1);

  std::string format = "csv", ties = "skip";
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", cfg.out, "Output file (default stdout)");
    sub->add_option("--seed", cfg.seed, "Random seed");
  };
  auto input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Input CSV, one numeric column ('-' for stdin)")->required();
    sub->add_option("--ties", ties, "Tie policy")->check(CLI::IsMember({"skip", "jitter"}));
  };

  auto* freq = app.add_subcommand("freq", "Pattern frequencies");
  input(freq);
  common(freq);
  freq->add_option("--m", cfg.m, "Pattern length");
  freq->add_option("--d", cfg.d, "Delay");
  freq->add_option("--dmax", cfg.d_max, "Sweep delays 1..dmax");
  freq->add_flag("--exact", cfg.exact, "Exact rational frequencies");

  auto* contrasts = app.add_subcommand("contrasts", "Contrasts against the delay");
  input(contrasts);
  common(contrasts);
  contrasts->add_option("--m", cfg.m, "3, or 4 to add tau4/beta4");
  contrasts->add_option("--d", cfg.d, "Single delay");
  contrasts->add_option("--dmax", cfg.d_max, "Sweep delays 1..dmax");
  contrasts->add_flag("--exact", cfg.exact, "Exact rational contrasts");

  auto* track = app.add_subcommand("track", "Sliding-window contrasts");
  input(track);
  common(track);
  track->add_option("--d", cfg.d, "Delay");
  track->add_option("--epoch", cfg.epoch, "Epoch length in samples (default 1000)");
  track->add_option("--hop", cfg.hop, "Hop in samples (default epoch)");
  track->add_option("--smooth", cfg.smooth, "Moving average length in epochs");

  auto* test = app.add_subcommand("test", "Serial dependence tests");
  input(test);
  common(test);
  test->add_option("--m", cfg.m, "Entropy test length (default 3 and 4)");
  test->add_option("--d", cfg.d, "Single delay");
  test->add_option("--dmax", cfg.d_max, "Delays 1..dmax");
  test->add_option("--epoch", cfg.epoch, "Split into epochs of this length");
  test->add_option("--hop", cfg.hop, "Epoch hop (default epoch)");
  test->add_option("--level", cfg.level, "Test level");
  test->add_flag("--summary", cfg.summary, "Accepted/larger/smaller percentages only");

  auto* simulate = app.add_subcommand("simulate", "Generate a series");
  common(simulate);
  simulate->add_option("--process", cfg.process, "white_noise | random_walk | gbm | ar1");
  simulate->add_option("--noise", cfg.noise, "normal | uniform | bernoulli | triangular | exponential");
  simulate->add_option("--T", cfg.T, "Length")->required();
  simulate->add_option("--phi", cfg.phi, "AR(1) coefficient");

  auto* quantiles = app.add_subcommand("quantiles", "Simulate Z quantiles into the cache");
  common(quantiles);
  quantiles->add_option("--m", cfg.m, "Pattern length (default 4)");
  quantiles->add_option("--T", cfg.T, "Series length (default 400)");
  quantiles->add_option("--reps", cfg.reps, "Replicates (default 100000)");

  auto* reproduce = app.add_subcommand("reproduce", "Compare computed values with published ones");
  common(reproduce);
  reproduce->add_option("--table", cfg.table, "arpat | tailq | tabi | brown3 | coin")->required();
  reproduce->add_option("--reps", cfg.reps, "Replicates");
  reproduce->add_option("--T", cfg.T, "Series length");

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? Format::json : Format::csv;
  cfg.ties = ties == "jitter" ? TiePolicy::jitter : TiePolicy::skip;

  try {
    Table table;
    int code = kOk;
    if (cfg.command == "simulate") {
      table = cmd_simulate(cfg);
    } else if (cfg.command == "quantiles") {
      table = cmd_quantiles(cfg, default_cache_path());
    } else if (cfg.command == "reproduce") {
      Reproduction r = cmd_reproduce(cfg);
      table = std::move(r.table);
      if (!r.passed) code = kReproductionFail;
    } else {
      const TimeSeries x = read_series_file(cfg.input);
      if (cfg.command == "freq") table = cmd_freq(cfg, x);
      if (cfg.command == "contrasts") table = cmd_contrasts(cfg, x);
      if (cfg.command == "track") table = cmd_track(cfg, x);
      if (cfg.command == "test") table = cmd_test(cfg, x);
    }
    if (cfg.out.empty()) {
      write_table(table, cfg.format, out);
    } else {
      std::ofstream f(cfg.out, std::ios::trunc);
      if (!f) throw InvalidArgument("cannot write '" + cfg.out + "'");
      write_table(table, cfg.format, f);
    }
    return code;
  } catch (const ParseError& e) {
    err << "ordpat: input error: " << e.what() << '\n';
    return kInputError;
  } catch (const UnknownTable& e) {
    err << "ordpat: " << e.what() << '\n';
    return kInputError;
  } catch (const SeriesTooShort& e) {
    err << "ordpat: precondition: " << e.what() << '\n';
    return kPrecondition;
  } catch (const WrongLength& e) {
    err << "ordpat: precondition: " << e.what() << '\n';
    return kPrecondition;
  } catch (const SizeLimit& e) {
    err << "ordpat: precondition: " << e.what() << '\n';
    return kPrecondition;
  } catch (const InvalidArgument& e) {
    err << "ordpat: input error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    err << "ordpat: precondition: " << e.what() << '\n';
    return kPrecondition;
  }
}

}  // namespace ordpat::cli
