#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "smoothcvx/verify.hpp"

using namespace smoothcvx;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(SMOOTHCVX_TEST_TMPDIR) + "/" + name; }

std::string field(const std::string& line, const std::string& key) {
  const auto p = line.find(key + "=");
  if (p == std::string::npos) return {};
  const auto start = p + key.size() + 1;
  return line.substr(start, line.find_first_of(" \n", start) - start);
}

}  // namespace

TEST(Cli, HuberEnvelopeSupError) {
  const Outcome r = run({"envelope", "--kind", "moreau", "--lambda", "0.5", "--fn", "abs(1;0)", "--domain",
                     R"({"kind":"whole","dim":1})", "--grid", "101"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x1,f,moreau,diff");
  EXPECT_NEAR(std::stod(field(r.err, "sup_error")), 0.25, 1e-6);
}

TEST(Cli, SmoothWritesCsvAndPlotScript) {
  const std::string path = tmp("cli_smooth.csv");
  std::filesystem::remove(path);
  std::filesystem::remove(path + ".gp");
  const Outcome r = run({"smooth", "--fn", "sqnorm()", "--domain", R"({"kind":"ball","center":[0,0],"radius":2})", "--eps",
                     "0.1", "--grid", "15", "--out", path});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(std::filesystem::exists(path + ".gp"));
  std::ifstream gp(path + ".gp");
  std::stringstream script;
  script << gp.rdbuf();
  EXPECT_NE(script.str().find("cli_smooth.csv"), std::string::npos);

  std::ifstream in(path);
  const GridTable t = read_grid_csv(in);
  EXPECT_EQ(t.header, (std::vector<std::string>{"x1", "x2", "f", "g", "diff"}));
  const GridSummary s = summarize_grid(t);
  // Re-reading the CSV reproduces the printed summary exactly.
  EXPECT_EQ(format_real(s.sup_diff), field(r.out, "sup_error"));
  EXPECT_EQ(format_real(s.min_diff), field(r.out, "min_diff"));
  EXPECT_EQ(std::to_string(s.points), field(r.out, "points"));
  EXPECT_GT(s.sup_diff, 0.0);
  EXPECT_LE(s.sup_diff, 0.2 + 1e-7);
  EXPECT_NE(r.out.find(" pass"), std::string::npos);
}

TEST(Cli, CsvIsDeterministic) {
  const std::vector<std::string> args = {"smooth", "--corpus-name", "max3", "--grid", "21"};
  const Outcome a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, SmoothMaxTable) {
  const Outcome r = run({"smoothmax", "--eps", "0.2", "--grid", "11"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "x1,x2,f,M,diff");
  EXPECT_NEAR(std::stod(field(r.err, "max_excess")), 0.2 * 5 / 32, 1e-15);
}

TEST(Cli, VerifyExitCodes) {
  const Outcome ok = run({"verify", "--suite", "lemma21", "--seed", "42"});
  EXPECT_EQ(ok.code, 0) << ok.err;
  const Report rep = Report::from_json(ok.out);
  EXPECT_EQ(rep.suite, "lemma21");
  EXPECT_EQ(rep.seed, 42u);
  EXPECT_TRUE(rep.pass());

  const std::string path = tmp("cli_report.json");
  const Outcome to_file = run({"verify", "--suite", "corpus-demo", "--seed", "1", "--out", path});
  EXPECT_EQ(to_file.code, 0);
  EXPECT_NE(to_file.out.find("suite=corpus-demo"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(path));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"verify"}).code, cli::kUsage);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, cli::kUsage);
  EXPECT_EQ(run({"smooth", "--fn", "sqnorm(", "--domain", R"({"kind":"whole","dim":1})"}).code, cli::kUsage);
  EXPECT_EQ(run({"smooth", "--fn", "pow(norm(), 0.5)", "--domain", R"({"kind":"whole","dim":1})"}).code, cli::kUsage);
  EXPECT_EQ(run({"smooth", "--fn", "sqnorm()", "--domain", R"({"kind":"ball"})"}).code, cli::kUsage);
  EXPECT_EQ(run({"smooth", "--corpus-name", "abs", "--eps", "-1"}).code, cli::kUsage);
  EXPECT_EQ(run({"envelope", "--corpus-name", "abs", "--kind", "other"}).code, cli::kUsage);
  EXPECT_EQ(run({"envelope", "--corpus-name", "abs", "--kind", "moreau", "--lambda", "0"}).code, cli::kUsage);
  const Outcome bad = run({"smooth", "--fn", "sqnorm(", "--domain", R"({"kind":"whole","dim":1})"});
  EXPECT_NE(bad.err.find("error:"), std::string::npos);
}

TEST(Cli, StratumOverflowIsACheckFailure) {
  const Outcome r = run({"smooth", "--corpus-name", "blowup-disk", "--max-stratum", "2", "--grid", "11"});
  EXPECT_EQ(r.code, cli::kCheckFailed);
  EXPECT_NE(r.err.find("max-stratum"), std::string::npos);
}

TEST(Cli, CorpusListing) {
  const Outcome r = run({"corpus"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("blowup-disk"), std::string::npos);
  EXPECT_NE(r.out.find("series6"), std::string::npos);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }
