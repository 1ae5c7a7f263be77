#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "soliton");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = soliton::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Result& r) { return nlohmann::json::parse(r.out); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("soliton_cli_test_" + name);
}

}  // namespace

TEST(Cli, ClassifyCigar) {
  const auto r = run({"classify", "--lambda", "0", "--mu", "-1", "--a0", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["family"], "G1_CIGAR");
  EXPECT_EQ(json_of(r)["topology"], "R2");
}

TEST(Cli, CatalogG6ConeAngle) {
  const auto r = run({"catalog", "--family", "g6", "--nu", "3.14159"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["family"], "G6");
  EXPECT_EQ(j["geometry"]["outer_end"]["kind"], "CONE_END");
  EXPECT_NEAR(j["geometry"]["outer_end"]["angle"].get<double>(), std::numbers::pi, 1e-5);
}

TEST(Cli, CatalogListHasThirteenRows) {
  const auto r = run({"catalog", "--list"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r).size(), 13u);
  const auto csv = run({"catalog", "--list", "--format", "csv"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(first_line(csv.out),
            "family,topology,curvature_sign,complete,inner_end,outer_end,nu_lo,nu_hi");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 14);
}

TEST(Cli, CsvHeaders) {
  const auto prof = run({"integrate", "--lambda", "0", "--mu", "-1", "--a0", "1", "--window", "0",
                         "0.2", "--samples", "3", "--format", "csv"});
  ASSERT_EQ(prof.code, 0) << prof.err;
  EXPECT_EQ(first_line(prof.out), "t,a,dadt");
  EXPECT_EQ(std::count(prof.out.begin(), prof.out.end(), '\n'), 4);

  const auto met = run({"metric", "--family", "g1", "--nu", "1", "--format", "csv"});
  ASSERT_EQ(met.code, 0) << met.err;
  EXPECT_EQ(first_line(met.out), "r,b,db_dr,K");

  const auto ver = run({"verify", "--family", "g1", "--nu", "1", "--format", "csv"});
  ASSERT_EQ(ver.code, 0) << ver.err;
  EXPECT_EQ(first_line(ver.out), "key,value");
}

TEST(Cli, UsageErrorsExitOne) {
  const auto missing = run({"integrate", "--lambda", "1", "--mu", "0.25"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("Usage"), std::string::npos) << missing.err;

  EXPECT_EQ(run({"classify", "--lambda", "nan", "--mu", "1", "--a0", "1"}).code, 1);
  EXPECT_EQ(run({"classify", "--lambda", "inf", "--mu", "1", "--a0", "1"}).code, 1);
  EXPECT_EQ(run({"classify", "--lambda", "1", "--mu", "1", "--a0", "1", "--bogus"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"catalog", "--family", "g13", "--nu", "1"}).code, 1);
  EXPECT_EQ(run({"catalog", "--family", "g6", "--nu", "7"}).code, 1);

  const auto mu_zero = run({"integrate", "--lambda", "1", "--mu", "0", "--a0", "1"});
  EXPECT_EQ(mu_zero.code, 1);
  EXPECT_NE(mu_zero.err.find("MU_ZERO"), std::string::npos) << mu_zero.err;
}

TEST(Cli, NumericalFailuresExitTwo) {
  const auto step = run({"integrate", "--lambda", "1", "--mu", "0.25", "--a0", "1", "--tol",
                         "1e-300"});
  EXPECT_EQ(step.code, 2);
  EXPECT_NE(step.err.find("STEP_FAILURE"), std::string::npos) << step.err;

  // anchor time chosen so that the blow-up time T0 is zero up to rounding
  const double t_ref = -soliton::detail::time_to_blow_up(soliton::make_params(-1.0, 1.0), 1.0);
  std::ostringstream t0;
  t0.precision(17);
  t0 << t_ref;
  const auto classify = run({"classify", "--lambda", "-1", "--mu", "1", "--a0", "1", "--t0",
                             t0.str()});
  ASSERT_EQ(classify.code, 0) << classify.err;
  EXPECT_EQ(json_of(classify)["family"], "UNRESOLVED_T0_SIGN");
  const auto report = run({"report", "--lambda", "-1", "--mu", "1", "--a0", "1", "--t0", t0.str()});
  EXPECT_EQ(report.code, 2);
  EXPECT_NE(report.err.find("UNRESOLVED_END"), std::string::npos) << report.err;
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const auto path = temp_file("config.ini");
  {
    std::ofstream f(path);
    f << "# cigar\nlambda = 0\nmu = -1\na0 = 1\n";
  }
  const auto base = run({"classify", "--config", path.string()});
  ASSERT_EQ(base.code, 0) << base.err;
  EXPECT_EQ(json_of(base)["family"], "G1_CIGAR");
  const auto over = run({"classify", "--config", path.string(), "--mu", "1"});
  ASSERT_EQ(over.code, 0) << over.err;
  EXPECT_EQ(json_of(over)["family"], "G2_EXPLODING");
  EXPECT_EQ(run({"classify", "--config", (path.string() + ".missing")}).code, 1);
  std::filesystem::remove(path);
}

TEST(Cli, OutFile) {
  const auto path = temp_file("metric.csv");
  const auto r = run({"metric", "--family", "g1", "--nu", "1", "--r-range", "0", "1", "--samples",
                      "11", "--format", "csv", "--out", path.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "r,b,db_dr,K");
  int rows = 0;
  for (std::string line; std::getline(f, line);) ++rows;
  EXPECT_EQ(rows, 11);
  std::filesystem::remove(path);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args{"energy", "--family", "g6", "--nu", "2"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}
