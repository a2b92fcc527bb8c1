#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "npdg/cli.hpp"

namespace npdg {
namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(NPDG_TEST_DATA) + "/" + name; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("npdg_cli_" + name)).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TEST(Cli, ValidateExitCodes) {
  EXPECT_EQ(run({"validate", data("scalar_pair.json")}).code, kExitOk);
  const CliRun bad = run({"validate", data("indefinite_penalty.json")});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_NE(bad.out.find("R^{11} not positive definite"), std::string::npos) << bad.out;
  const CliRun json = run({"validate", data("indefinite_penalty.json"), "--json"});
  EXPECT_NE(json.out.find("\"ok\": false"), std::string::npos) << json.out;
  EXPECT_EQ(run({"validate", data("missing.json")}).code, kExitValidation);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"validate", data("scalar_pair.json"), "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", data("scalar_pair.json"), "--points", "1"}).code, kExitUsage);
  const CliRun help = run({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("sweep"), std::string::npos);
}

TEST(Cli, SolveReportsBothProblems) {
  const CliRun r = run({"solve", data("scalar_pair.json")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("nash iterations="), std::string::npos);
  EXPECT_NE(r.out.find("potential iterations="), std::string::npos);
  const CliRun bare = run({"solve", data("no_potential.json")});
  EXPECT_EQ(bare.code, kExitOk) << bare.err;
  EXPECT_EQ(bare.out.find("potential iterations="), std::string::npos);
}

TEST(Cli, SolverFailureExitCode) {
  const CliRun r = run({"solve", data("unstabilizable.json")});
  EXPECT_EQ(r.code, kExitSolver) << r.out << r.err;
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, DistanceNeedsPotential) {
  EXPECT_EQ(run({"distance", data("no_potential.json")}).code, kExitValidation);
  const CliRun r = run({"distance", data("scalar_pair.json")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("delta_star 1.297565e-01"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("is_exact false"), std::string::npos);
  const CliRun chain = run({"distance", data("scalar_pair.json"), "--chain"});
  EXPECT_NE(chain.out.find("kappa_used 1.00000099"), std::string::npos) << chain.out;
  EXPECT_NE(chain.out.find("chain_value 3.670"), std::string::npos) << chain.out;
  const CliRun exact = run({"distance", data("decoupled_pair.json")});
  EXPECT_NE(exact.out.find("is_exact true"), std::string::npos) << exact.out;
}

TEST(Cli, VerifyScalarPair) {
  const std::string csv = temp_path("verify.csv");
  const CliRun r = run({"verify", data("scalar_pair.json"), "--t-end", "1", "--points", "101", "--x0",
                     "1", "--csv", csv});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("holds=true"), std::string::npos);
  EXPECT_NE(r.out.find("max_error=0.0744535"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("at t=0.78"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("margin_end=0.04771833"), std::string::npos) << r.out;
  const std::string text = read_file(csv);
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,error,bound,margin");
  std::filesystem::remove(csv);
}

TEST(Cli, VerifyPieces) {
  const CliRun r = run({"verify", data("scalar_pair.json"), "--t-end", "4", "--points", "401",
                     "--x0", "1", "--pieces", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("k,t_start,t_end,delta_k"), std::string::npos);
  EXPECT_NE(r.out.find("monotone_decreasing=true"), std::string::npos);
  EXPECT_EQ(run({"verify", data("scalar_pair.json"), "--x0", "1,2"}).code, kExitValidation);
}

TEST(Cli, SimulateCsv) {
  const CliRun r = run({"simulate", data("decoupled_pair.json"), "--points", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,x_nash_1,x_nash_2,x_pot_1,x_pot_2,error");
}

TEST(Cli, GenerateIsDeterministicAndLoadable) {
  const CliRun a = run({"generate", "--delta", "0.1", "--seed", "42", "--players", "3"});
  const CliRun b = run({"generate", "--delta", "0.1", "--seed", "42", "--players", "3"});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const std::string path = temp_path("generated.json");
  ASSERT_EQ(run({"generate", "--delta", "0.1", "--seed", "42", "--players", "3", "-o", path}).code,
            kExitOk);
  EXPECT_EQ(read_file(path), a.out);
  EXPECT_EQ(run({"validate", path}).code, kExitOk);
  EXPECT_EQ(run({"verify", path}).code, kExitOk);
  std::filesystem::remove(path);
}

TEST(Cli, SweepAndSeedEnvironment) {
  const std::vector<std::string> args{"sweep", "--grid", "0,0.01,0.1", "--points", "21"};
  ::unsetenv("NPDG_SEED");
  const CliRun base = run(args);
  ASSERT_EQ(base.code, kExitOk) << base.err;
  EXPECT_NE(base.out.find("delta_in,delta_star,max_error,bound_at_max,holds"), std::string::npos);
  EXPECT_NE(base.out.find("failed=false"), std::string::npos);

  std::vector<std::string> seeded = args;
  seeded.insert(seeded.end(), {"--seed", "7"});
  ::setenv("NPDG_SEED", "7", 1);
  const CliRun from_env = run(args);
  ::unsetenv("NPDG_SEED");
  EXPECT_EQ(from_env.out, run(seeded).out);
  EXPECT_NE(from_env.out, base.out);
  EXPECT_EQ(run({"sweep", "--grid", "0.1,0.01"}).code, kExitValidation);
  EXPECT_EQ(run({"sweep", "--grid", "log:1e-3:1e-1"}).code, kExitValidation);
}

}  // namespace
}  // namespace npdg
