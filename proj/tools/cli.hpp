#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ordpat/ordpat.hpp"

namespace ordpat::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kPrecondition = 3, kReproductionFail = 4 };

enum class Format { csv, json };

struct RunConfig {
  std::string command;
  std::string input;  // "-" reads stdin
  std::string out;    // empty writes stdout
  std::optional<int> m;
  int d = 1;
  std::optional<int> d_max;
  std::size_t epoch = 0;
  std::size_t hop = 0;
  std::size_t smooth = 1;
  TiePolicy ties = TiePolicy::skip;
  std::uint64_t seed = 1;
  double level = 0.95;
  Format format = Format::csv;
  bool exact = false;
  bool summary = false;
  std::string table;
  std::size_t reps = 0;  // 0 picks the command default
  std::size_t T = 0;
  std::string process = "white_noise";
  std::string noise = "normal";
  double phi = 0.5;

  TieHandling tie_handling() const { return {ties, seed}; }
};

/// Long-format output; JSON rows mirror the CSV columns.
struct Table {
  using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

void write_table(const Table& t, Format f, std::ostream& out);

/// One numeric value per line, taken from the last comma/semicolon/whitespace
/// field. A leading non-numeric line is a header.
TimeSeries read_series(std::istream& in);
TimeSeries read_series_file(const std::string& path);

Table cmd_freq(const RunConfig& cfg, const TimeSeries& x);
Table cmd_contrasts(const RunConfig& cfg, const TimeSeries& x);
Table cmd_track(const RunConfig& cfg, const TimeSeries& x);
Table cmd_test(const RunConfig& cfg, const TimeSeries& x);
Table cmd_simulate(const RunConfig& cfg);
Table cmd_quantiles(const RunConfig& cfg, const std::filesystem::path& cache_path);

struct Reproduction {
  Table table;  // table, cell, computed, published, tolerance, status
  bool passed = true;
};
Reproduction cmd_reproduce(const RunConfig& cfg);

/// Full command line, argv[0] included.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ordpat::cli
