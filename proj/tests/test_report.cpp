#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "stconv/cli.hpp"
#include "stconv/report.hpp"

using namespace stconv;

namespace {

std::string run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  EXPECT_EQ(rc, 0) << err.str();
  return out.str();
}

// Compares against tests/golden/<name>. Set STCONV_UPDATE_GOLDEN=1 to rewrite.
void expect_golden(const std::string& name, const std::string& actual) {
  const std::string path = std::string(STCONV_GOLDEN_DIR) + "/" + name;
  if (const char* up = std::getenv("STCONV_UPDATE_GOLDEN"); up && std::string(up) == "1") {
    std::ofstream(path, std::ios::binary) << actual;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << "missing golden file " << path;
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), actual) << name;
}

std::vector<std::string> keys(const Json& j) {
  std::vector<std::string> out;
  for (auto it = j.begin(); it != j.end(); ++it) out.push_back(it.key());
  return out;
}

}  // namespace

TEST(Golden, DensityReport) {
  expect_golden("density_squares.json", run_cli({"density", "--set", "squares", "--horizon", "10000"}));
}

TEST(Golden, ConvergeReport) {
  expect_golden("converge_null.json",
                run_cli({"converge", "--sequence", "null(dense[1])", "--candidate", "dense[0]", "--horizon", "1000"}));
}

TEST(Golden, BoundedCsv) {
  expect_golden("bounded_spikes.csv",
                run_cli({"bounded", "--sequence", "spike(squares,n)", "--horizon", "1000", "--output", "csv"}));
}

TEST(Golden, ClassifyReport) {
  expect_golden("classify_prime_diagonal.json", run_cli({"classify", "--operator", "diag(prime_scale)", "--property",
                                                         "st_bounded", "--horizon", "10000"}));
}

TEST(Schema, VerdictFields) {
  auto conv = verdict_json(st_converges(ramp_sequence(), SpaceElement::dense({0}), {0.5}, {1000, 0.01, Schedule::geometric(10)}));
  EXPECT_EQ(keys(conv), (std::vector<std::string>{"kind", "sequence", "decision", "horizon", "tolerance", "epsilon_grid",
                                                  "limit", "per_epsilon", "witness"}));
  EXPECT_EQ(keys(conv["per_epsilon"][0]), (std::vector<std::string>{"epsilon", "final_ratio", "decision", "witness"}));
  EXPECT_EQ(conv["witness"], 10);

  auto bnd = verdict_json(st_bounded(ramp_sequence(), {1, 2}, {1000, 0.01, Schedule::geometric(10)}));
  EXPECT_TRUE(bnd.contains("bound"));
  EXPECT_TRUE(bnd.contains("probes_tried"));
  auto cau = verdict_json(st_cauchy(alternating_sequence(), {0.5}, {1000, 0.01, Schedule::geometric(10)}));
  // Every anchor refutes, so the last one is reported.
  EXPECT_EQ(cau["anchors"], Json::array({100}));
}

TEST(Schema, EnvelopeAndCsv) {
  auto doc = Json::parse(run_cli({"cauchy", "--sequence", "alternating", "--horizon", "1000"}));
  EXPECT_EQ(keys(doc), (std::vector<std::string>{"config", "result"}));
  EXPECT_EQ(doc["config"]["command"], "cauchy");
  EXPECT_EQ(doc["config"]["horizon"], 1000);
  EXPECT_EQ(doc["result"]["kind"], "cauchy");

  auto csv = run_cli({"converge", "--sequence", "ramp", "--candidate", "dense[0]", "--eps", "0.5,1", "--horizon", "100",
                      "--output", "csv"});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epsilon,checkpoint,count,ratio");
  EXPECT_NE(csv.find("0.5,100,100,1\n"), std::string::npos);
}

TEST(Report, ByteIdenticalAcrossRuns) {
  std::vector<std::string> args{"classify", "--operator", "transform(prime_scale_by_position)", "--property",
                                "st_continuous", "--horizon", "5000"};
  EXPECT_EQ(run_cli(args), run_cli(args));
}
