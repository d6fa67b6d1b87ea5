#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "stconv/cli.hpp"

using namespace stconv;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json result_of(const Result& r) { return Json::parse(r.out)["result"]; }

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }

 private:
  const char* name_;
};

}  // namespace

TEST(Cli, DensityOfPrimes) {
  auto r = run({"density", "--set", "primes"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = result_of(r);
  EXPECT_EQ(j["count"], 78498);
  EXPECT_EQ(j["final_ratio"].get<double>(), 0.078498);
  EXPECT_EQ(j["analytic_density"], "zero");
  EXPECT_EQ(j["verdict"]["decision"], "inconclusive");
  EXPECT_EQ(Json::parse(r.out)["config"]["horizon"], 1'000'000);
}

TEST(Cli, ConvergeHarmonicToOrigin) {
  auto r = run({"converge", "--sequence", "harmonic", "--candidate", "sparse{}", "--eps", "0.5,0.1", "--expect", "refuted"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = result_of(r);
  EXPECT_EQ(j["decision"], "refuted");
  EXPECT_EQ(j["epsilon_grid"], Json::array({0.5, 0.1}));
  EXPECT_EQ(j["witness"], 10);
}

TEST(Cli, ExpectationMismatchExitsOne) {
  auto r = run({"bounded", "--sequence", "ramp", "--horizon", "1000", "--expect", "confirmed"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("expectation failed"), std::string::npos);
  EXPECT_EQ(run({"classify", "--operator", "diag(inv)", "--property", "st_bounded", "--horizon", "1000", "--expect",
                 "confirmed"})
                .code,
            0);
}

TEST(Cli, BadInputExitsTwo) {
  EXPECT_EQ(run({"density", "--set", "cubes"}).code, 2);
  EXPECT_EQ(run({"density"}).code, 2);
  EXPECT_EQ(run({"converge", "--sequence", "ramp", "--eps", "0.1,-1"}).code, 2);
  EXPECT_EQ(run({"converge", "--sequence", "ramp", "--candidate", "dense[0,0]"}).code, 2);
  EXPECT_EQ(run({"classify", "--operator", "diag(inv)", "--property", "compact"}).code, 2);
  EXPECT_EQ(run({"classify", "--operator", "diag(inv)", "--property", "st_bounded", "--corpus", "tiny"}).code, 2);
  EXPECT_EQ(run({"suite", "--check", "no_such_check"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  auto r = run({"converge", "--sequence", "spike(primes,cube)"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("position 13"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("classify"), std::string::npos);
}

TEST(Cli, HorizonFromEnvironment) {
  {
    ScopedEnv env(cli::kHorizonEnv, "5000");
    auto r = run({"density", "--set", "multiples(2)"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["config"]["horizon"], 5000);
    EXPECT_EQ(result_of(r)["count"], 2500);
    // An explicit flag wins.
    auto f = run({"density", "--set", "multiples(2)", "--horizon", "100"});
    EXPECT_EQ(result_of(f)["count"], 50);
  }
  {
    ScopedEnv env(cli::kHorizonEnv, "lots");
    EXPECT_EQ(run({"density", "--set", "primes"}).code, 2);
  }
}

TEST(Cli, ClassifyAndSuiteReports) {
  auto r = run({"classify", "--operator", "diag(prime_scale)", "--property", "st_bounded", "--horizon", "10000",
                "--expect", "refuted"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = result_of(r);
  EXPECT_EQ(j["outcome"], "refuted");
  EXPECT_EQ(j["witnesses"][0]["sequence"], "prime_coords");

  auto s = run({"suite", "--check", "bounded_inclusion", "--check", "finite_rank_bounded"});
  ASSERT_EQ(s.code, 0) << s.err;
  auto checks = result_of(s);
  ASSERT_EQ(checks.size(), 2u);
  for (const auto& c : checks) EXPECT_EQ(c["status"], "pass");
}

TEST(Cli, DenseCorpusSelection) {
  auto r = run({"classify", "--operator", "matrix[[1,2],[0,1]]", "--property", "st_continuous", "--corpus", "dense(2)",
                "--horizon", "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(result_of(r)["corpus_size"], 7);
  EXPECT_EQ(run({"classify", "--operator", "matrix[[1,2],[0,1]]", "--property", "st_continuous", "--corpus", "sparse",
                 "--horizon", "2000"})
                .code,
            2);
}
