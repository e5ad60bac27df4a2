#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "qnoise/repro.hpp"

using namespace qnoise;

TEST(Csv, TwelveSignificantDigitsLocaleFree) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(format_double(123456789.123456789), "123456789.123");
  EXPECT_EQ(format_double(2.5e-20), "2.5e-20");
  EXPECT_EQ(format_double(0.0), "0");
}

TEST(Csv, ParseRejectsGarbage) {
  EXPECT_DOUBLE_EQ(parse_double("0.25"), 0.25);
  EXPECT_DOUBLE_EQ(parse_double(" -1e-3 "), -1e-3);
  EXPECT_THROW(parse_double("0,25"), DomainError);
  EXPECT_THROW(parse_double(""), DomainError);
  EXPECT_THROW(parse_double("1.0x"), DomainError);
}

TEST(Csv, MetadataHeaderRowsAndQuoting) {
  CsvTable t({"a", "b,c"});
  t.add_metadata("seed", "7");
  t.add_row({1.5, std::string("x\"y")});
  EXPECT_EQ(t.str(), "# seed: 7\na,\"b,c\"\n1.5,\"x\"\"y\"\n");
  EXPECT_THROW(t.add_row({1.0}), DomainError);
}

TEST(Grid, RangeAndListForms) {
  EXPECT_EQ(parse_grid("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_grid("0.6,0.9"), (std::vector<double>{0.6, 0.9}));
  EXPECT_THROW(parse_grid(""), DomainError);
  EXPECT_THROW(parse_grid("0:1"), DomainError);
  EXPECT_THROW(parse_grid("0:1:2.5"), DomainError);
}

TEST(GroverScan, TwoQubitFirstIterationColumn) {
  const auto t = cmd_grover_scan(2, 0, {0.6, 0.8, 1.0}, 3);
  const auto lambda = t.curve.column("lambda");
  const auto m = t.curve.column("m");
  const auto p = t.curve.column("P");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (m[i] == 1) EXPECT_NEAR(p[i], lambda[i] * lambda[i], 1e-12);
  const auto norm = t.normalized.column("P_norm");
  EXPECT_NEAR(norm[0], 0.36, 1e-12);
}

TEST(GroverScan, FourQubitsPeakAtThree) {
  const auto t = cmd_grover_scan(4, 5, {1.0}, 6);
  const auto p = t.curve.column("P");
  EXPECT_EQ(std::max_element(p.begin(), p.end()) - p.begin(), 3);
}

TEST(GroverScan, EmptyGridIsUsageError) { EXPECT_THROW(cmd_grover_scan(2, 0, {}, 3), DomainError); }

TEST(AverageRun, SwapLeavesRulerColumnUnchanged) {
  AverageRunRequest r;
  r.values = {-0.775, 0.25, 0.675};
  r.variant = Variant::ruler;
  r.lambda_grid = uniform_grid(0.0, 1.0, 11);
  r.swap = true;
  const auto t = cmd_average_run(r);
  ASSERT_TRUE(t.swapped.has_value());
  const auto a = t.main.column("D"), b = t.swapped->column("D");
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-12);
  EXPECT_LE(std::abs(a.front()), 1e-9);
  EXPECT_LE(std::abs(a.back()), 1e-9);
}

TEST(AverageRun, SampledOutputIsReproducible) {
  AverageRunRequest r;
  r.values = {0.3, -0.2};
  r.theta = 0.2;
  r.lambda_grid = {0.7, 0.9};
  r.sampled = true;
  r.alpha = 500;
  r.seed = 11;
  EXPECT_EQ(cmd_average_run(r).main.str(), cmd_average_run(r).main.str());
  const std::string s = cmd_average_run(r).main.str();
  EXPECT_NE(s.find("# seed: 11"), std::string::npos);
  EXPECT_NE(s.find("# version: "), std::string::npos);
}

TEST(ToleranceScan, ZeroAtFullPurity) {
  const CsvTable t = cmd_tolerance_scan(3, 4, {0.5, 1.0});
  const auto tau = t.column("tau"), d = t.column("max_abs_D");
  for (std::size_t i = 0; i < d.size(); ++i)
    if (tau[i] == 1.0) EXPECT_EQ(d[i], 0.0);
  EXPECT_THROW(cmd_tolerance_scan(2, 4, {0.5}), DomainError);
}

TEST(NegativityTable, ModesAndValues) {
  const CsvTable traced = cmd_negativity_scan("traced-ruler", {0.0, 0.5, 1.0});
  for (double v : traced.column("negativity")) EXPECT_LT(v, 1e-10);
  const CsvTable full = cmd_negativity_scan("nontraced", {0.0, 1.0});
  const auto tau = full.column("tau"), neg = full.column("negativity");
  for (std::size_t i = 0; i < neg.size(); ++i) EXPECT_NEAR(neg[i], tau[i] == 1.0 ? 0.5 : 0.0, 1e-10);
  EXPECT_THROW(cmd_negativity_scan("bogus", {0.5}), DomainError);
}

namespace {

int run_tool(const std::string& args) {
  const std::string cmd = std::string(QNOISE_REPRO_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_tool("grover-scan --n 2 --lambda-grid 0.9,1"), 0);
  EXPECT_EQ(run_tool("grover-scan --n 2 --lambda-grid ''"), 2);
  EXPECT_EQ(run_tool("average-run --values 2.0,0.1"), 2);
  EXPECT_EQ(run_tool("no-such-command"), 2);
  EXPECT_EQ(run_tool("tolerance-scan --n-min 9"), 2);
  EXPECT_EQ(run_tool("acceptance --criterion 3"), 0);
}

TEST(Cli, WritesCsvAndPlotScriptByteIdentically) {
  const auto dir = std::filesystem::temp_directory_path() / "qnoise_cli_test";
  std::filesystem::create_directories(dir);
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  const std::string args = "average-run --variant ruler --lambda-grid 0:1:5 --swap --mode sampled --alpha 200 --seed 3 --out ";
  ASSERT_EQ(run_tool(args + a), 0);
  ASSERT_EQ(run_tool(args + b), 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_TRUE(std::filesystem::exists(dir / "a.gp"));
  EXPECT_TRUE(std::filesystem::exists(dir / "a_swap.csv"));
  EXPECT_NE(slurp(dir / "a.gp").find("a.csv"), std::string::npos);
  std::filesystem::remove_all(dir);
}
