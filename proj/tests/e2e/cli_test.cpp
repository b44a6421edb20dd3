#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "qlest/cli.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kRoot = QLEST_E2E_DIR;

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "qlest");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qlest::cli::dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string fixture(const std::string& name) { return (kRoot / "fixtures" / name).string(); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "qlest_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

// QLEST_UPDATE_GOLDEN=1 rewrites the golden file instead of comparing.
void expect_golden(const std::string& actual, const std::string& name) {
  const fs::path path = kRoot / "golden" / name;
  if (std::getenv("QLEST_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  ASSERT_TRUE(fs::exists(path)) << path;
  EXPECT_EQ(actual, slurp(path)) << name;
}

TEST(Cli, NoArgumentsPrintsUsage) {
  const CliRun r = run({});
  EXPECT_EQ(r.code, qlest::cli::kExitInvalid);
  EXPECT_NE((r.out + r.err).find("verify-identities"), std::string::npos);
}

TEST(Cli, UnknownSubcommand) { EXPECT_EQ(run({"frobnicate"}).code, qlest::cli::kExitInvalid); }

TEST(Cli, VerifyIdentities) {
  const fs::path out = scratch("identities.csv");
  const CliRun r = run({"verify-identities", "--r-max", "8", "--out", out.string()});
  EXPECT_EQ(r.code, qlest::cli::kExitOk);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  expect_golden(slurp(out), "verify_identities_r8.csv");
}

TEST(Cli, VerifyIdentitiesRejectsNegativeBound) {
  EXPECT_EQ(run({"verify-identities", "--r-max", "-1"}).code, qlest::cli::kExitInvalid);
}

TEST(Cli, PmfExact) {
  const CliRun r = run({"pmf", "--l", "3", "--m", "2", "--t", "2", "--r-red", "5", "--exact"});
  EXPECT_EQ(r.code, qlest::cli::kExitOk);
  expect_golden(r.out, "pmf_exact.csv");
}

TEST(Cli, PmfNoTime) {
  const CliRun r = run({"pmf", "--l", "3", "--m", "2", "--no-time", "--cmax", "10"});
  EXPECT_EQ(r.code, qlest::cli::kExitOk);
  expect_golden(r.out, "pmf_notime.csv");
}

TEST(Cli, PmfInvalidObservation) {
  const CliRun r = run({"pmf", "--l", "5", "--m", "2", "--t", "2", "--r-red", "5"});
  EXPECT_EQ(r.code, qlest::cli::kExitInvalid);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, EstimateWorkedExample) {
  const CliRun r = run({"estimate", "--l", "4", "--m", "2", "--t", "20", "--red", "45"});
  EXPECT_EQ(r.code, qlest::cli::kExitOk);
  EXPECT_NE(r.out.find("7.571429"), std::string::npos);
  expect_golden(r.out, "estimate_worked.csv");
}

TEST(Cli, EstimateWithoutProbesNeedsHistory) {
  const CliRun r = run({"estimate", "--l", "0", "--m", "0", "--t", "0", "--red", "45", "--estimator", "EST1"});
  EXPECT_EQ(r.code, qlest::cli::kExitOk);
  EXPECT_NE(r.out.find("NA"), std::string::npos);
  const CliRun h = run({"estimate", "--l", "0", "--m", "0", "--t", "0", "--red", "45", "--estimator", "EST1",
                     "--hist-l", "2", "--hist-m", "1", "--hist-t", "10"});
  EXPECT_NE(h.out.find("1.388889"), std::string::npos);
}

TEST(Cli, SimulateIsSeeded) {
  const CliRun a = run({"simulate", "--cycles", "20", "--p", "0.2", "--red", "35", "--seed", "7"});
  const CliRun b = run({"simulate", "--cycles", "20", "--p", "0.2", "--red", "35", "--seed", "7"});
  EXPECT_EQ(a.code, qlest::cli::kExitOk);
  EXPECT_EQ(a.out, b.out);
  expect_golden(a.out, "simulate_seed7.csv");
}

TEST(Cli, SimulateSeedFromConfigFile) {
  const CliRun a = run({"--config", fixture("qlest.ini"), "simulate", "--cycles", "10"});
  const CliRun b = run({"simulate", "--cycles", "10", "--seed", "99"});
  EXPECT_EQ(a.code, qlest::cli::kExitOk);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, EvaluateGoldenReports) {
  const fs::path csv = scratch("report.csv");
  const fs::path json = scratch("report.json");
  const fs::path series = scratch("series.csv");
  const CliRun r = run({"evaluate", "--input", fixture("records.csv"), "--seeds", "50", "--seed", "5", "--out",
                     csv.string(), "--plot-data", series.string()});
  EXPECT_EQ(r.code, qlest::cli::kExitOk) << r.err;
  expect_golden(slurp(csv), "evaluate_report.csv");
  expect_golden(slurp(series), "evaluate_series.csv");

  const CliRun j = run({"evaluate", "--input", fixture("records.csv"), "--seeds", "50", "--seed", "5", "--out",
                     json.string(), "--format", "json", "--threads", "1"});
  EXPECT_EQ(j.code, qlest::cli::kExitOk) << j.err;
  expect_golden(slurp(json), "evaluate_report.json");
}

TEST(Cli, EvaluateRejectsBadInput) {
  const CliRun r = run({"evaluate", "--input", fixture("bad_probes.csv"), "--seeds", "2"});
  EXPECT_EQ(r.code, qlest::cli::kExitInvalid);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
  EXPECT_EQ(run({"evaluate", "--input", fixture("missing.csv")}).code, qlest::cli::kExitInvalid);
}

}  // namespace
