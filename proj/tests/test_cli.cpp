#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "ordpat/ordpat.hpp"

using namespace ordpat;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "ordpat");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("ordpat_cli_" + name);
  std::ofstream(p) << body;
  return p.string();
}

std::string series_file(const std::string& name, const TimeSeries& x) {
  std::ostringstream s;
  s.precision(17);
  s << "value\n";
  for (double v : x.values()) s << v << '\n';
  return write_temp(name, s.str());
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

TEST(ReadSeries, FormatsAndErrors) {
  std::istringstream a("# comment\nt,x\n0,1.5\n1,2\n\n2,-3\n");
  const auto x = cli::read_series(a);
  ASSERT_EQ(x.size(), 3u);
  EXPECT_EQ(x.values()[2], -3.0);
  std::istringstream b("1\n2\nnan\n");
  try {
    cli::read_series(b);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream c("");
  EXPECT_THROW(cli::read_series(c), ParseError);
}

TEST(Cli, FreqExampleSeries) {
  const auto f = write_temp("example.csv", "1\n2\n0\n1.5\n-1\n3\n");
  const auto r = call({"freq", "--input", f, "--m", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls[0], "d,pattern,index,count,windows,skipped,probability");
  bool seen = false;
  for (const auto& l : ls) {
    if (l.rfind("1,231,", 0) == 0) {
      EXPECT_EQ(l, "1,231,3,2,4,0,0.5");
      seen = true;
    }
  }
  EXPECT_TRUE(seen);
  const auto ex = call({"freq", "--input", f, "--m", "3", "--exact"});
  EXPECT_NE(ex.out.find("1,231,3,2,4,0,1/2"), std::string::npos);
}

TEST(Cli, InputErrorsExitTwo) {
  const auto empty = call({"freq", "--input", write_temp("empty.csv", "")});
  EXPECT_EQ(empty.code, 2);
  const auto bad = call({"freq", "--input", write_temp("nan.csv", "1\n2\n3\nNaN\n5\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("line 4"), std::string::npos) << bad.err;
  EXPECT_EQ(call({"freq", "--input", "/nonexistent/file.csv"}).code, 2);
  EXPECT_EQ(call({"freq"}).code, 2);
  EXPECT_EQ(call({"reproduce", "--table", "nope"}).code, 2);
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST(Cli, TooShortExitsThree) {
  const auto r = call({"freq", "--input", write_temp("two.csv", "1\n2\n"), "--m", "3"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("precondition"), std::string::npos);
  EXPECT_EQ(call({"test", "--input", write_temp("two.csv", "1\n2\n"), "--epoch", "500"}).code, 3);
}

TEST(Cli, ShortTestCellsAreMissing) {
  const auto f = series_file("short.csv", generate({ProcessKind::white_noise, Noise::normal, 0.5, 1}, 150));
  const auto r = call({"test", "--input", f, "--m", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find(",missing,"), std::string::npos);
}

TEST(Cli, ContrastsDelaySweep) {
  const auto f = series_file("rw.csv", generate({ProcessKind::symmetric_random_walk, Noise::normal, 0.5, 2}, 20'000));
  const auto r = call({"contrasts", "--input", f, "--dmax", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 6u);
  EXPECT_EQ(ls[0].rfind("d,windows,skipped,beta,tau,gamma,delta,alpha,delta2", 0), 0u);
  for (std::size_t i = 1; i < ls.size(); ++i) EXPECT_EQ(ls[i].rfind(std::to_string(i) + ",", 0), 0u);
}

TEST(Cli, TrackFollowsRegimeShift) {
  const auto a = generate({ProcessKind::white_noise, Noise::normal, 0.5, 3}, 20'000);
  const auto b = generate({ProcessKind::symmetric_random_walk, Noise::normal, 0.5, 4}, 20'000);
  std::vector<double> v(a.values().begin(), a.values().end());
  v.insert(v.end(), b.values().begin(), b.values().end());
  const auto f = series_file("shift.csv", TimeSeries(v));
  const auto r = call({"track", "--input", f, "--epoch", "2000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j.size(), 20u);
  EXPECT_NEAR(j[2]["alpha"].get<double>(), 2.0 / 3.0, 0.04);
  EXPECT_NEAR(j[17]["alpha"].get<double>(), 0.5, 0.04);
}

TEST(Cli, TestReportsProvenance) {
  const auto f = series_file("iid.csv", generate({ProcessKind::white_noise, Noise::normal, 0.5, 5}, 1000));
  const auto r = call({"test", "--input", f, "--m", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("provenance"), std::string::npos);
  EXPECT_NE(r.out.find(",published"), std::string::npos);
  const auto s = call({"test", "--input", f, "--dmax", "3", "--summary"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(lines(s.out)[0], "statistic,level,cells,missing,accepted_pct,larger_pct,smaller_pct,provenance");
}

TEST(Cli, SimulateIsDeterministic) {
  const auto a = call({"simulate", "--process", "ar1", "--noise", "uniform", "--T", "500", "--seed", "9"});
  const auto b = call({"simulate", "--process", "ar1", "--noise", "uniform", "--T", "500", "--seed", "9"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 501u);
  EXPECT_EQ(call({"simulate", "--process", "bogus", "--T", "5"}).code, 2);
}

TEST(Cli, OutputIsByteIdentical) {
  const auto f = series_file("det.csv", generate({ProcessKind::ar1, Noise::normal, 0.5, 6}, 3000));
  const auto a = call({"test", "--input", f, "--dmax", "2"});
  const auto b = call({"test", "--input", f, "--dmax", "2"});
  EXPECT_EQ(a.out, b.out);
  const auto o = std::filesystem::temp_directory_path() / "ordpat_cli_out.csv";
  EXPECT_EQ(call({"freq", "--input", f, "--m", "4", "--out", o.string()}).code, 0);
  std::ifstream in(o);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), call({"freq", "--input", f, "--m", "4"}).out);
}

TEST(Cli, ReproduceCoin) {
  const auto r = call({"reproduce", "--table", "coin"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, QuantilesUseCache) {
  const auto dir = std::filesystem::temp_directory_path() / "ordpat_cli_cache";
  std::filesystem::remove_all(dir);
  setenv("ORDPAT_CACHE_DIR", dir.c_str(), 1);
  const auto a = call({"quantiles", "--m", "3", "--T", "200", "--reps", "10000", "--seed", "4"});
  const auto b = call({"quantiles", "--m", "3", "--T", "200", "--reps", "10000", "--seed", "4"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.out.find("simulated"), std::string::npos);
  EXPECT_NE(b.out.find("cached"), std::string::npos);
  const auto f = series_file("iid200.csv", generate({ProcessKind::white_noise, Noise::normal, 0.5, 7}, 200));
  const auto t = call({"test", "--input", f, "--m", "3"});
  EXPECT_NE(t.out.find("simulated(seed=4"), std::string::npos) << t.out;
  unsetenv("ORDPAT_CACHE_DIR");
  std::filesystem::remove_all(dir);
}

}  // namespace
