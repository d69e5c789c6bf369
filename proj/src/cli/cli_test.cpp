#include "nwn/cli.hpp"

#include <gtest/gtest.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlohmann/json.hpp"

using namespace nwn;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args, bool styled = false) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err, styled);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& f) { return std::string(NWN_GOLDEN_DIR) + "/" + f; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / ("nwn_cli_test_" + std::to_string(getpid()));
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string tmp(const std::string& f) const { return (dir / f).string(); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, ValidateExitCodes) {
  EXPECT_EQ(run({"validate", golden("fig2.nwn")}).code, kExitOk);
  std::ofstream(tmp("bad.nwn")) << "nwn 1 pn\nPLACES\np\nARCS\np -> u\n";
  auto r = run({"validate", tmp("bad.nwn"), "--json", tmp("bad.json")});
  EXPECT_EQ(r.code, kExitNegative);
  auto j = nlohmann::json::parse(slurp(tmp("bad.json")));
  EXPECT_EQ(j["valid"], false);
  EXPECT_EQ(j["error"]["code"], "ResolutionError");
  EXPECT_EQ(j["error"]["line"], 5);
  EXPECT_EQ(run({"validate", tmp("missing.nwn")}).code, kExitUsage);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"cover", golden("fig1.nwn"), "--max-depth", "0"}).code, kExitUsage);
  EXPECT_EQ(run({"cover", golden("fig1.nwn"), "--lossy"}).code, kExitUsage);
  EXPECT_EQ(run({"crosscheck", "--kind", "nope"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST_F(Cli, LossyCoverWritesReplayableWitness) {
  auto r = run({"cover", "--lossy", golden("fig11.nwn"), "--target", golden("fig11_target.nwn"), "--max-depth", "50",
                "-o", tmp("w.txt")});
  EXPECT_EQ(r.code, kExitOk) << r.out << r.err;
  ASSERT_TRUE(fs::exists(tmp("w.txt")));
  auto s = run({"simulate", "--lossy", golden("fig11.nwn"), tmp("w.txt"), "-o", tmp("final.nwn")});
  EXPECT_EQ(s.code, kExitOk) << s.out << s.err;
  auto c = run({"cover", tmp("final.nwn"), "--target", golden("fig11_target.nwn"), "--max-depth", "1"});
  EXPECT_EQ(c.code, kExitOk);
  EXPECT_NE(c.out.find("depth 0"), std::string::npos);
}

TEST_F(Cli, CoverNegativeAndInconclusive) {
  EXPECT_EQ(run({"cover", golden("fig11.nwn"), "--target", golden("fig11_target.nwn")}).code, kExitNegative);
  EXPECT_EQ(run({"cover", golden("fig2.nwn"), "--max-states", "2"}).code, kExitInconclusive);
}

TEST_F(Cli, SimulateRejectsDisabledStep) {
  std::ofstream(tmp("t.txt")) << "# one bogus step\nt x1=[9 9 9 9 9]\n";
  auto r = run({"simulate", golden("fig4.nwn"), tmp("t.txt")});
  EXPECT_EQ(r.code, kExitNegative);
  EXPECT_NE(r.out.find("step 0 not enabled"), std::string::npos);
}

TEST_F(Cli, StagedSimulationShowsIntermediateConfigurations) {
  ASSERT_EQ(run({"cover", golden("fig4.nwn"), "-o", tmp("w.txt")}).code, kExitOk);
  auto r = run({"simulate", "--staged", golden("fig4.nwn"), tmp("w.txt")});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("stage1 {[p1 p2:2 p3], [p1:2 p2 p5], [p1:3 p2 p4]}"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("stage2 {[p2 p4], [p1 p2:2 p3 p4], [p1:2 p3:3 p5]}"), std::string::npos) << r.out;
}

TEST_F(Cli, TranslateThenCrosscheck) {
  EXPECT_EQ(run({"translate", "--kind", "ceos2cnupn", golden("fig8.nwn"), "-o", tmp("out.nwn")}).code, kExitOk);
  EXPECT_EQ(run({"validate", tmp("out.nwn")}).code, kExitOk);
  EXPECT_EQ(run({"crosscheck", "--kind", "ceos2cnupn", golden("fig8.nwn")}).code, kExitOk);
  auto p = run({"translate", "--kind", "ceos2cnupn", golden("fig8.nwn"), "--provenance", "-o", tmp("o2.nwn")});
  EXPECT_NE(p.out.find("@gen/that/N/merge\ttransition\te-merging\tthat"), std::string::npos);
}

TEST_F(Cli, ReportsAreDeterministic) {
  for (const char* kind : {"pn2cnupn", "closure"}) {
    ASSERT_NE(run({"crosscheck", "--kind", kind, "--seed", "4", "--count", "3", "--json", tmp("a.json")}).code,
              kExitUsage);
    run({"crosscheck", "--kind", kind, "--seed", "4", "--count", "3", "--json", tmp("b.json"), "--jobs", "2"});
    EXPECT_EQ(slurp(tmp("a.json")), slurp(tmp("b.json"))) << kind;
  }
  EXPECT_EQ(run({"gen", "--kind", "eos", "--seed", "9"}).out, run({"gen", "--kind", "eos", "--seed", "9"}).out);
  EXPECT_NE(run({"gen", "--kind", "eos", "--seed", "9"}).out, run({"gen", "--kind", "eos", "--seed", "10"}).out);
}

TEST_F(Cli, ColorFollowsEnvironment) {
  setenv("NWN_COLOR", "0", 1);
  EXPECT_EQ(run({"validate", golden("fig1.nwn")}, true).out.find('\033'), std::string::npos);
  unsetenv("NWN_COLOR");
  EXPECT_NE(run({"validate", golden("fig1.nwn")}, true).out.find('\033'), std::string::npos);
  EXPECT_EQ(run({"validate", golden("fig1.nwn")}, false).out.find('\033'), std::string::npos);
}

TEST_F(Cli, DotExport) {
  EXPECT_EQ(run({"validate", golden("fig3.nwn"), "--dot", tmp("g.dot")}).code, kExitOk);
  EXPECT_EQ(slurp(tmp("g.dot")).rfind("digraph", 0), 0u);
}
