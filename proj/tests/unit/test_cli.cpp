#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "jcore_tools/cli.hpp"
#include "jcore_tools/corpus.hpp"
#include "properties.hpp"

using namespace jcore;

namespace {

struct Ran {
  int code = 0;
  std::string out;
  std::string err;
};

Ran run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

std::string cfile(const std::string& f) {
  return oracle::corpus_dir() + "/" + f + ".jcore";
}

std::vector<nlohmann::json> json_lines(const std::string& s) {
  std::vector<nlohmann::json> out;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  }
  return out;
}

}  // namespace

TEST(Cli, CheckObserver) {
  Ran r = run_cli({"check", cfile("observer_base"), cfile("observer_v1")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "ok: 3 classes\n");
}

// Observer lives in observer_base; without it the notify call cannot be
// resolved.
TEST(Cli, CheckWithoutBaseFails) {
  Ran r = run_cli({"check", cfile("observer_v1")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unknown method notify"), std::string::npos) << r.err;
}

TEST(Cli, AnalyzeLeakingOwner) {
  Ran r = run_cli({"analyze", "--own", "OBool", "--rep", "Bool", cfile("bool"),
               cfile("obool_bad_v1")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("OwnerPublicReturnsRep"), std::string::npos) << r.out;
  Ran ok = run_cli({"analyze", "--own", "OBool", "--rep", "Bool", cfile("bool"),
                cfile("obool_v1")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "safe\n");
}

TEST(Cli, EquivObserverVersions) {
  Ran r = run_cli({"equiv", oracle::manifest_path("observer_v1_v3")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("Equivalent"), std::string::npos) << r.out;
  Ran d = run_cli({"equiv", "--format", "json", oracle::manifest_path("obool_bad_exploit")});
  EXPECT_EQ(d.code, 1);
  EXPECT_EQ(nlohmann::json::parse(d.out)["verdict"], "Distinguished");
}

TEST(Cli, RunWithMonitor) {
  Ran r = run_cli({"run", "--own", "Observable", "--rep", "Node", "--monitor", "every",
               "--format", "json", cfile("observer_base"), cfile("observer_v1"),
               cfile("observer_client")});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["outcome"], "Ok");
  EXPECT_TRUE(j["violations"].empty());
  Ran leak = run_cli({"run", "--own", "OBool", "--rep", "Bool", "--monitor", "every",
                  cfile("bool"), cfile("obool_bad_v1"), cfile("obool_leak_client")});
  EXPECT_EQ(leak.code, 1);
  EXPECT_NE(leak.out.find("ClientToRep"), std::string::npos);
}

TEST(Cli, RunAbortIsExitOne) {
  Ran r = run_cli({"run", cfile("ms_client"), cfile("ms_v1")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("ExplicitAbort"), std::string::npos);
}

TEST(Cli, SimtestReports) {
  Ran ok = run_cli({"simtest", oracle::manifest_path("sim_obool")});
  EXPECT_EQ(ok.code, 0) << ok.out;
  Ran bad = run_cli({"simtest", "--format", "json", oracle::manifest_path("sim_obool_bad")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_FALSE(nlohmann::json::parse(bad.out)["failures"].empty());
  Ran unknown = run_cli({"simtest", "--coupling", "nope", oracle::manifest_path("sim_obool")});
  EXPECT_EQ(unknown.code, 2);
}

TEST(Cli, DotToStdout) {
  Ran r = run_cli({"dot", "--own", "Observable", "--rep", "Node", cfile("observer_base"),
               cfile("observer_v1"), cfile("observer_client")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("digraph", 0), 0u);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"analyze", cfile("bool")}).code, 2);
  EXPECT_EQ(run_cli({"run", "--monitor", "sometimes", cfile("bool")}).code, 2);
  EXPECT_EQ(run_cli({"equiv", "/nonexistent/manifest.json"}).code, 2);
  EXPECT_EQ(run_cli({"corpus", "--corpus", "/nonexistent", "list"}).code, 2);
}

TEST(Cli, JsonCarriesTheTextFacts) {
  std::vector<std::string> base{"analyze", "--own", "OBool", "--rep", "Bool",
                                cfile("bool"), cfile("obool_bad_object")};
  Ran text = run_cli(base);
  base.insert(base.begin() + 1, {"--format", "json"});
  Ran json = run_cli(base);
  EXPECT_EQ(text.code, json.code);
  auto lines = json_lines(json.out);
  ASSERT_GE(lines.size(), 2u);
  EXPECT_EQ(lines[0]["rule"], "OwnerPublicReturnsRep");
  EXPECT_EQ(lines.back()["safe"], false);
  EXPECT_EQ(lines.back()["diagnostics"], lines.size() - 1);
}

TEST(Cli, CorpusListAndRunAll) {
  Ran list = run_cli({"corpus", "list"});
  EXPECT_EQ(list.code, 0);
  std::size_t n = corpus::load_corpus(oracle::corpus_dir()).programs.size();
  EXPECT_EQ(static_cast<std::size_t>(std::count(list.out.begin(), list.out.end(), '\n')), n);
  Ran all = run_cli({"corpus", "run-all"});
  EXPECT_EQ(all.code, 0) << all.out;
  EXPECT_EQ(all.out.find("FAIL"), std::string::npos);
}

TEST(Cli, CorpusAnalyzeRejectsOnlyBadAndLeakVariants) {
  for (const auto& rec : corpus::load_corpus(oracle::corpus_dir()).programs) {
    if (!rec.analyze) continue;
    bool rejected = !rec.analyze->empty();
    bool bad = rec.name.find("bad") != std::string::npos ||
               rec.name.find("leak") != std::string::npos ||
               rec.name == "obool_setter" || rec.name == "rep_in_client";
    EXPECT_EQ(rejected, bad) << rec.name;
  }
}

TEST(Cli, EmptyExtraDirectory) {
  auto dir = std::filesystem::temp_directory_path() / "jcore_empty_extra";
  std::filesystem::create_directories(dir);
  Ran with = run_cli({"corpus", "--extra", dir.string(), "list"});
  Ran without = run_cli({"corpus", "list"});
  EXPECT_EQ(with.code, 0);
  EXPECT_EQ(with.out, without.out);
  std::filesystem::remove(dir);
}
