#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "geninv/matrix_io.hpp"

using namespace geninv;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

std::string data(const std::string& name) { return std::string(GENINV_TEST_DATA) + "/" + name; }

// Runs the CLI with `args`; stderr is discarded. `env` is prepended verbatim.
CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "'" + GENINV_CLI_PATH + "' " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

ComplexMatrix float_output(const CliRun& r, MatrixFormat f = MatrixFormat::kCsv) {
  return float_of(parse_matrix(r.out, f));
}

const std::string kPair = data("A.csv") + " " + data("W.csv");

}  // namespace

TEST(Cli, ExactWqbtOnExamplePair) {
  const CliRun r = run("wqbt --q 2 " + kPair + " --exact");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1/2,0,0\n1/2,0,0\n0,0,0\n0,0,0\n");
}

TEST(Cli, QbtZeroIsPinv) {
  for (const char* file : {"square.csv", "jordan3.csv", "fractions.csv"}) {
    const CliRun q0 = run("qbt --q 0 " + data(file));
    const CliRun p = run("pinv " + data(file));
    ASSERT_EQ(q0.code, 0) << file;
    ASSERT_EQ(p.code, 0) << file;
    EXPECT_EQ(q0.out, p.out) << file;
  }
}

TEST(Cli, WqbtAboveKIsWeightedCoreEP) {
  const CliRun q5 = run("wqbt --q 5 " + kPair);
  const CliRun cep = run("wcore-ep " + kPair);
  ASSERT_EQ(q5.code, 0);
  ASSERT_EQ(cep.code, 0);
  EXPECT_LE(relative_distance(float_output(q5), float_output(cep)), 1e-12);
  const CliRun exact5 = run("wqbt --q 5 " + kPair + " --exact");
  const CliRun exact_cep = run("wcore-ep " + kPair + " --exact");
  EXPECT_EQ(exact5.out, exact_cep.out);
  EXPECT_EQ(exact5.out, "1,0,0\n0,0,0\n0,0,0\n0,0,0\n");
}

TEST(Cli, FloatOutputMatchesExactOutput) {
  for (const std::string kind : {"wbt", "wdrazin", "wqbt --q 1", "wqbt --q 3"}) {
    const CliRun f = run(kind + " " + kPair);
    const CliRun e = run(kind + " " + kPair + " --exact");
    ASSERT_EQ(f.code, 0) << kind;
    ASSERT_EQ(e.code, 0) << kind;
    EXPECT_LE(relative_distance(float_output(f), float_output(e)), 1e-12) << kind;
  }
}

TEST(Cli, JsonInputGivesJsonOutput) {
  const CliRun r = run("wqbt --q 2 " + data("A.json") + " " + data("W.json") + " --verify");
  ASSERT_EQ(r.code, 0);
  const nlohmann::json doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["rows"], 4);
  EXPECT_EQ(doc["cols"], 3);
  EXPECT_TRUE(doc["residuals"].is_object());
  EXPECT_NEAR(doc["data"][0][0].get<double>(), 0.5, 1e-14);
}

TEST(Cli, VerifyAppendsResiduals) {
  const CliRun r = run("drazin " + data("square.csv") + " --verify");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# residual"), std::string::npos);
}

TEST(Cli, FractionsUseExactPath) {
  const CliRun r = run("pinv " + data("fractions.csv") + " --exact");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2,0\n0,3\n");
}

TEST(Cli, DecomposeReportsBlocksAndResiduals) {
  const CliRun w = run("decompose weighted-core-ep " + kPair);
  ASSERT_EQ(w.code, 0);
  EXPECT_NE(w.out.find("# t = 1"), std::string::npos);
  EXPECT_NE(w.out.find("# A3 "), std::string::npos);
  const std::size_t at = w.out.find("# residual reconstruction = ");
  ASSERT_NE(at, std::string::npos);
  EXPECT_LE(std::stod(w.out.substr(at + 28)), 1e-10);

  const CliRun c = run("decompose core-ep " + data("square.csv"));
  ASSERT_EQ(c.code, 0);
  EXPECT_NE(c.out.find("# r = 2"), std::string::npos);

  const CliRun j = run("decompose weighted-core-ep " + data("A.json") + " " + data("W.json"));
  ASSERT_EQ(j.code, 0);
  const nlohmann::json doc = nlohmann::json::parse(j.out);
  EXPECT_EQ(doc["t"], 1);
  EXPECT_TRUE(doc["blocks"].contains("W3"));
}

TEST(Cli, DecomposeIdentityIsTrivial) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "geninv_cli_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "identity.csv").string();
  std::ofstream(path) << "1,0\n0,1\n";
  const CliRun r = run("decompose core-ep " + path);
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("# r = 2"), std::string::npos);
  EXPECT_NE(r.out.find("# index = 0"), std::string::npos);
  EXPECT_NE(r.out.find("# N 0x0"), std::string::npos);
}

TEST(Cli, VerifyExamplesAndCorpus) {
  const CliRun examples = run("verify paper");
  EXPECT_EQ(examples.code, 0);
  EXPECT_EQ(examples.out.find("FAIL"), std::string::npos);
  const std::filesystem::path json = std::filesystem::temp_directory_path() / "geninv_cli_report.json";
  const CliRun corpus = run("verify corpus --seed 1 --count 6 --json " + json.string());
  EXPECT_EQ(corpus.code, 0);
  std::ifstream in(json);
  const nlohmann::json doc = nlohmann::json::parse(in);
  EXPECT_EQ(doc["corpus_seed"], 1);
  EXPECT_EQ(doc["passed"], true);
  const CliRun all = run("verify all --count 3");
  EXPECT_EQ(all.code, 0);
  EXPECT_NE(all.out.find("paper.wqbt_q2"), std::string::npos);
  EXPECT_NE(all.out.find("reduction.q0"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("nonsense " + data("A.csv")).code, 2);
  EXPECT_EQ(run("qbt " + data("A.csv")).code, 2);             // --q missing
  EXPECT_EQ(run("wqbt --q 1 " + data("A.csv")).code, 2);      // W missing
  EXPECT_EQ(run("qbt --q -1 " + data("square.csv")).code, 2);
  EXPECT_EQ(run("decompose weighted-core-ep " + data("A.csv")).code, 2);
  EXPECT_EQ(run("verify everything").code, 2);
}

TEST(Cli, ParseErrorsExitThree) {
  EXPECT_EQ(run("pinv " + data("bad_entry.csv")).code, 3);
  EXPECT_EQ(run("pinv " + data("ragged.csv")).code, 3);
  EXPECT_EQ(run("pinv " + data("does_not_exist.csv")).code, 3);
}

TEST(Cli, DomainErrorsExitFour) {
  EXPECT_EQ(run("wqbt --q 1 " + data("A.csv") + " " + data("W_zero.csv")).code, 4);
  EXPECT_EQ(run("wbt " + data("A.csv") + " " + data("A.csv")).code, 4);  // shape
  EXPECT_EQ(run("group " + data("jordan3.csv")).code, 4);
  EXPECT_EQ(run("group " + data("jordan3.csv") + " --exact").code, 4);
  EXPECT_EQ(run("drazin " + data("A.csv")).code, 4);  // not square
}

TEST(Cli, VerificationFailureExitsFive) {
  // A residual threshold no float result can meet.
  EXPECT_EQ(run("pinv " + data("square.csv") + " --verify --tol 1e-300").code, 5);
  EXPECT_EQ(run("pinv " + data("square.csv") + " --verify").code, 0);
}

TEST(Cli, EnvironmentTolerance) {
  const std::string cmd = "pinv " + data("square.csv") + " --verify";
  EXPECT_EQ(run(cmd, "GENINV_TOL=1e-300").code, 5);
  EXPECT_EQ(run(cmd, "GENINV_TOL=1e-6").code, 0);
  // --tol wins over the environment.
  EXPECT_EQ(run(cmd + " --tol 1e-6", "GENINV_TOL=1e-300").code, 0);
  EXPECT_EQ(run(cmd, "GENINV_TOL=abc").code, 4);
}
