#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "condensate/cli.hpp"

using namespace condensate;
namespace fs = std::filesystem;

namespace {

const std::string kFixtures = CONDENSATE_FIXTURES;

struct CliRun {
  int code;
  Json report;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "condensate");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  Json j = out.str().empty() ? Json(nullptr) : Json::parse(out.str(), nullptr, false);
  return {code, j, err.str()};
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

}  // namespace

TEST(Cli, CheckPassingAlgebra) {
  const CliRun r = run({"check", fixture("q_z2.algebra.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report["op"], "check_condensation_algebra");
  EXPECT_TRUE(r.report["verdict"].get<bool>());
  EXPECT_TRUE(r.report["witness"].is_null());
  EXPECT_FALSE(r.report["paper_ref"].get<std::string>().empty());
  for (const auto& c : r.report["details"]["checks"]) EXPECT_TRUE(c["pass"].get<bool>());
}

TEST(Cli, CheckUnscaledMatrixAlgebra) {
  const CliRun r = run({"check", fixture("m2_unscaled.algebra.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.report["verdict"].get<bool>());
  EXPECT_EQ(r.report["witness"]["check"], "specialness");
  EXPECT_EQ(r.report["witness"]["note"], "m∘Δ = 2·id");
}

TEST(Cli, CheckScaledCoactionBimodule) {
  const CliRun r = run({"check", fixture("z2_scaled_coaction.bimodule.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.report["op"], "check_condensation_bimodule");
  EXPECT_EQ(r.report["witness"]["note"], "lact∘lcoact = 2·id");
}

TEST(Cli, CheckMalformedAndMissingFiles) {
  EXPECT_EQ(run({"check", fixture("malformed.algebra.json")}).code, 2);
  EXPECT_EQ(run({"check", fixture("absent.algebra.json")}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Cli, ChainS3Periodic) {
  const CliRun r = run({"chain", "--algebra", fixture("q_s3.algebra.json"), "--length", "2", "--periodic"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report["details"]["ground_dim"], 3);
  EXPECT_EQ(r.report["details"]["predicted_ground_dim"], 3);
  EXPECT_EQ(r.report["details"]["ground_basis"]["cols"], 3);
}

TEST(Cli, ChainNoBasisAndCap) {
  const CliRun r = run({"chain", "--algebra", fixture("q_z2.algebra.json"), "--length", "3", "--no-basis"});
  EXPECT_EQ(r.code, 0);
  EXPECT_FALSE(r.report["details"].contains("ground_basis"));
  EXPECT_EQ(r.report["details"]["ground_dim"], 2);
  const CliRun capped = run({"chain", "--algebra", fixture("m3.algebra.json"), "--length", "3", "--cap", "100"});
  EXPECT_EQ(capped.code, 3);
  EXPECT_EQ(capped.report["error"]["required"], 729);
}

TEST(Cli, ChainCapFromEnvironment) {
  ::setenv("CONDENSATE_DIM_CAP", "16", 1);
  const CliRun r = run({"chain", "--algebra", fixture("q_z2.algebra.json"), "--length", "5"});
  ::unsetenv("CONDENSATE_DIM_CAP");
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, ChainOnFailingAlgebraIsAMathFailure) {
  EXPECT_EQ(run({"chain", "--algebra", fixture("m2_unscaled.algebra.json")}).code, 1);
}

TEST(Cli, SplitEpsilon) {
  const CliRun r = run({"split", fixture("m2_row_column.epsilon.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report["details"]["rank"], 1);
  const CliRun alt = run({"split", fixture("m2_row_column.epsilon.json"), "--order", "3"});
  EXPECT_EQ(alt.code, 0);
  EXPECT_EQ(alt.report["details"]["rank"], 1);
}

TEST(Cli, SplitNonIdempotent) {
  const fs::path tmp = fs::temp_directory_path() / "condensate_cli_nonidempotent.json";
  write_json_file(tmp, Json{{"rows", 2}, {"cols", 2}, {"entries", {"1", "1", "0", "1"}}});
  const CliRun r = run({"split", tmp.string()});
  fs::remove(tmp);
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.report["verdict"].get<bool>());
}

TEST(Cli, TensorRowColumn) {
  const CliRun r = run({"tensor", fixture("m2_row.bimodule.json"), fixture("m2_column.bimodule.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.report["details"]["rank_epsilon"], 1);
  EXPECT_EQ(r.report["details"]["coequalizer_dim"], 1);
  EXPECT_EQ(r.report["details"]["bimodule"]["dim"], 1);
}

TEST(Cli, TensorMismatchedMiddleIsMalformed) {
  EXPECT_EQ(run({"tensor", fixture("m2_row.bimodule.json"), fixture("m2_row.bimodule.json")}).code, 2);
}

TEST(Cli, Unitalize) {
  const CliRun r = run({"unitalize", fixture("span.algebra.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.report["details"]["witness_verified"].get<bool>());
  EXPECT_FALSE(r.report["details"].contains("isomorphic_to_input"));
  const CliRun z2 = run({"unitalize", fixture("q_z2.algebra.json")});
  EXPECT_TRUE(z2.report["details"]["isomorphic_to_input"].get<bool>());
}

TEST(Cli, Morita) {
  const CliRun yes = run({"morita", fixture("m2.algebra.json"), fixture("q.algebra.json")});
  EXPECT_EQ(yes.code, 0);
  EXPECT_TRUE(yes.report["details"]["witness_verified"].get<bool>());
  EXPECT_TRUE(yes.report["witness"].contains("iso1"));
  const CliRun no = run({"morita", fixture("q_z2.algebra.json"), fixture("q.algebra.json")});
  EXPECT_EQ(no.code, 1);
  EXPECT_FALSE(no.report["verdict"].get<bool>());
}

TEST(Cli, Dual) {
  const CliRun b = run({"dual", fixture("m2_column.bimodule.json")});
  EXPECT_EQ(b.code, 0);
  EXPECT_TRUE(b.report["details"]["zigzag_first"].get<bool>());
  EXPECT_EQ(b.report["witness"]["dual"]["dim"], 2);
  const CliRun a = run({"dual", fixture("q_z2.algebra.json")});
  EXPECT_EQ(a.code, 0);
  EXPECT_TRUE(a.report["details"]["snake_op"].get<bool>());
}

TEST(Cli, BatteryMissingFixtureDirectory) {
  EXPECT_EQ(run({"battery", "--fixtures", "/nonexistent/fixtures"}).code, 2);
}

TEST(Cli, BatteryFilterRunsOnlyChainCriteria) {
  const CliRun r = run({"battery", "--fixtures", kFixtures, "--filter", "hamiltonian", "--threads", "2"});
  EXPECT_EQ(r.code, 0);
  ASSERT_EQ(r.report["criteria"].size(), 1u);
  EXPECT_EQ(r.report["criteria"][0]["id"], 8);
  EXPECT_TRUE(r.report["pass"].get<bool>());
  EXPECT_NE(r.err.find("hamiltonian"), std::string::npos);
}

TEST(Cli, BatteryItemsAreSortedByName) {
  const CliRun r = run({"battery", "--fixtures", kFixtures, "--filter", "axioms"});
  ASSERT_EQ(r.report["criteria"].size(), 1u);
  std::vector<std::string> names;
  for (const auto& it : r.report["criteria"][0]["items"]) names.push_back(it["name"]);
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
}
