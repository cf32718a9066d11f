#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "cli_cases.hpp"
#include "coverflow_cli.hpp"

using namespace coverflow;
using io::Json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "coverflow");
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(const std::vector<std::string>& args) {
  auto r = run(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

class CliFiles : public ::testing::Test {
protected:
  void SetUp() override { cli_cases::prepare_files(dir_); }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_ = cli_cases::scratch_dir("test_cli");
};

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"sample-cover", "--d", "2"}).code, cli::kUsage);
  EXPECT_EQ(run({"sample-cover", "--G", "Z2", "--d", "zero"}).code, cli::kUsage);
  EXPECT_EQ(run({"--format", "xml", "sample-cover", "--G", "Z2", "--d", "2"}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, ErrorKindsMapToExitCodes) {
  EXPECT_EQ(run({"sample-cover", "--G", "(1 5)", "--d", "2"}).code, cli::kParse);
  EXPECT_EQ(run({"ladder-act", "--hom", "{\"support\":[0]}"}).code, cli::kParse);
  EXPECT_EQ(run({"simulate-skew", "--degree", "3", "--psi", R"j({"d":2,"assignments":{}})j"}).code, cli::kPrecondition);
  EXPECT_EQ(run({"devious-build", "--G", "S3", "--H", "(1 2 3)", "--d", "3"}).code, cli::kInfeasible);
  EXPECT_EQ(run({"p-ready-build", "--L1", "1", "--L2", "1", "--H1", "S3", "--H2", "trivial", "--G", "S3", "--d", "3"}).code,
            cli::kInfeasible);
  EXPECT_EQ(run({"coding-walk", "--endpoint", "commutator", "--steps", "400", "--max-bits", "128"}).code, cli::kUndecidable);
  EXPECT_EQ(run({"classify", "--walk", "/nonexistent/walk.csv", "--hom", "{\"support\":[1]}"}).code, cli::kIo);
  EXPECT_EQ(run({"--format", "csv", "ladder-limit", "--hom", "{\"support\":[1]}"}).code, cli::kPrecondition);
}

TEST(Cli, Envelope) {
  auto j = run_json({"--seed", "9", "ladder-act", "--hom", "{\"support\":[1]}", "--gen", "tau"});
  EXPECT_EQ(j["tool_version"], kToolVersion);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["subcommand"], "ladder-act");
  EXPECT_EQ(j["config"]["gen"], "tau");
  EXPECT_EQ(j["result"]["output"]["support"], Json::array({-1}));
  EXPECT_EQ(j["result"]["proximity"], 1);
}

TEST(Cli, SampleCoverMonteCarlo) {
  auto j = run_json({"--seed", "4", "sample-cover", "--G", "Z2", "--d", "2", "--k", "3", "--samples", "20000"});
  const auto& mc = j["result"]["monte_carlo"];
  EXPECT_EQ(mc["probability"]["exact"], "1/8");
  EXPECT_LT(std::abs(mc["z_score"].get<double>()), 3.0);
}

TEST(Cli, SimulateSkewCertificate) {
  auto j = run_json({"simulate-skew", "--degree", "2", "--psi", R"j({"d":2,"assignments":{}})j", "--iters", "1000"});
  EXPECT_EQ(j["result"]["verdict"]["structural"], "NON-ERGODIC CERTIFICATE (2 fiber blocks)");
  auto k = run_json({"simulate-skew", "--degree", "2", "--psi", R"j({"d":2,"assignments":{"1":"(1 2)"}})j", "--iters", "4096"});
  EXPECT_EQ(k["result"]["verdict"]["structural"], "NO CERTIFICATE (fibers connected)");
  auto csv = run({"--format", "csv", "simulate-skew", "--degree", "2", "--psi", R"j({"d":2,"assignments":{}})j", "--iters", "64"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_NE(csv.out.find("cylinder,fiber,count\n"), std::string::npos);
}

TEST(Cli, LadderCommands) {
  auto z = run_json({"--horizon", "6", "z-solve", "--f", "1"});
  EXPECT_TRUE(z["result"]["verified"].get<bool>());
  auto lim = run_json({"--horizon", "6", "ladder-limit", "--hom", z["result"]["h"].dump()});
  EXPECT_EQ(lim["result"]["verdict"]["kind"], "ConvergesCertified");
  auto back = run_json({"ladder-limit", "--hom", "{\"support\":[-1]}"});
  EXPECT_EQ(back["result"]["verdict"]["kind"], "ProximityReturnedToOne");
}

TEST(Cli, ChamanaraPipeline) {
  auto built = run_json({"devious-build", "--G", "S2", "--d", "2", "--prefix", "(1 2)"});
  EXPECT_TRUE(built["result"]["connected"].get<bool>());
  EXPECT_FALSE(built["result"]["devious"].is_null());
  auto cls = run_json({"chamanara-classify", "--gseq", built["result"]["gsequence"].dump(), "--k", "2"});
  EXPECT_FALSE(cls["result"]["devious"].is_null());
  EXPECT_EQ(cls["result"]["skew_model"]["fiber_blocks"].size(), 2u);
}

TEST_F(CliFiles, WalkPipeline) {
  auto pow3 = (dir_ / "pow3.csv").string();
  auto r = run({"--out", pow3, "coding-walk", "--synthetic", "pow:3", "--levels", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = run_json({"classify", "--walk", pow3, "--hom", "{\"support\":[2,-3]}"});
  EXPECT_EQ(j["result"]["branch"], "b");
  EXPECT_EQ(j["result"]["v_exact"], 3);
  auto s = run_json({"ms-series", "--walk", pow3});
  EXPECT_EQ(s["result"]["trend"], "DIVERGENT-TREND");

  auto lin = (dir_ / "lin.json").string();
  ASSERT_EQ(run({"--out", lin, "--format", "json", "coding-walk", "--synthetic", "linear", "--steps", "60"}).code, 0);
  auto c = run_json({"classify", "--walk", lin, "--hom", "{\"support\":[-1]}"});
  EXPECT_EQ(c["result"]["branch"], "c");
  EXPECT_EQ(c["result"]["verdict"], "Ergodic_c");
}

TEST_F(CliFiles, EverySubcommandIsDeterministic) {
  for (const auto& args : cli_cases::all(dir_)) {
    auto a = run(args), b = run(args);
    std::string joined;
    for (const auto& x : args) joined += x + " ";
    EXPECT_EQ(a.code, 0) << joined << a.err;
    EXPECT_EQ(a.out, b.out) << joined;
    EXPECT_FALSE(a.out.empty()) << joined;
  }
}

TEST(Cli, BinaryExitCodes) {
  auto status = [](const std::string& args) {
    std::string cmd = std::string(COVERFLOW_BIN) + " " + args + " >/dev/null 2>&1";
    int s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("ladder-act --hom '{\"support\":[1]}'"), 0);
  EXPECT_EQ(status("nonsense"), 2);
  EXPECT_EQ(status("ladder-act --hom '{\"support\":'"), 3);
  EXPECT_EQ(status("classify --walk /nonexistent --hom '{\"support\":[1]}'"), 7);
}
