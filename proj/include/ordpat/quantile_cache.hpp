#pragma once

// On-disk cache of simulated Z quantiles.
//
//   # ordpat-quantiles v1
//   m T level z seed n_reps
//   4 400 0.95 17.41 1 100000
//
// One row per (m, T, level); rows are kept sorted so rewrites are stable.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

#include "ordpat/errors.hpp"
#include "ordpat/nulls.hpp"

namespace ordpat {

inline constexpr std::string_view kQuantileCacheHeader = "# ordpat-quantiles v1";

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

class QuantileCache {
 public:
  struct Row {
    double z = 0.0;
    std::uint64_t seed = 0;
    std::size_t n_reps = 0;
  };

  /// Missing file gives an empty cache.
  static QuantileCache load(const std::filesystem::path& path) {
    QuantileCache c;
    std::ifstream in(path);
    if (!in) return c;
    std::string line;
    std::size_t lineno = 0;
    bool header = false, columns = false;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!header) {
        if (line != kQuantileCacheHeader) throw ParseError("not an ordpat quantile cache (bad header)", lineno);
        header = true;
        continue;
      }
      if (!columns) {
        if (line != "m T level z seed n_reps") throw ParseError("unexpected column line", lineno);
        columns = true;
        continue;
      }
      std::istringstream ss(line);
      int m = 0;
      std::size_t T = 0, n = 0;
      double level = 0, z = 0;
      std::uint64_t seed = 0;
      if (!(ss >> m >> T >> level >> z >> seed >> n)) throw ParseError("malformed cache row", lineno);
      c.rows_[{m, T, level}] = Row{z, seed, n};
    }
    return c;
  }

  void save(const std::filesystem::path& path) const {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write quantile cache " + path.string());
    out << kQuantileCacheHeader << "\nm T level z seed n_reps\n";
    for (const auto& [key, row] : rows_) {
      const auto& [m, T, level] = key;
      out << m << ' ' << T << ' ' << format_double(level) << ' ' << format_double(row.z) << ' ' << row.seed << ' '
          << row.n_reps << '\n';
    }
  }

  /// Replaces every row of (m, T) with the table's points.
  void upsert(const QuantileTable& t) {
    if (t.provenance != QuantileProvenance::simulated) throw InvalidArgument("only simulated tables are cached");
    for (auto it = rows_.begin(); it != rows_.end();) {
      if (std::get<0>(it->first) == t.m && std::get<1>(it->first) == t.T) {
        it = rows_.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& [level, z] : t.points) rows_[{t.m, t.T, level}] = Row{z, t.seed, t.n_reps};
  }

  std::optional<QuantileTable> find(int m, std::size_t T) const {
    QuantileTable t;
    t.m = m;
    t.T = T;
    t.provenance = QuantileProvenance::simulated;
    for (const auto& [key, row] : rows_) {
      if (std::get<0>(key) != m || std::get<1>(key) != T) continue;
      t.points.emplace_back(std::get<2>(key), row.z);
      t.seed = row.seed;
      t.n_reps = row.n_reps;
    }
    if (t.points.empty()) return std::nullopt;
    return t;
  }

  std::size_t size() const noexcept { return rows_.size(); }

 private:
  std::map<std::tuple<int, std::size_t, double>, Row> rows_;
};

/// $ORDPAT_CACHE_DIR/quantiles.txt, or ./.ordpat-cache/quantiles.txt.
inline std::filesystem::path default_cache_path() {
  const char* dir = std::getenv("ORDPAT_CACHE_DIR");
  std::filesystem::path base = dir && *dir ? std::filesystem::path(dir) : std::filesystem::path(".ordpat-cache");
  return base / "quantiles.txt";
}

}  // namespace ordpat
