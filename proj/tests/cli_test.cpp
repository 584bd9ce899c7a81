#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "relctl/cli.hpp"
#include "support/random_elections.hpp"

using relctl::testing::read_file;
using relctl::testing::source_path;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int rc;
  std::string out, err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "relctl");
  std::vector<const char *> argv;
  for (const auto &a : args)
    argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = relctl::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

const std::string example = source_path("data/running_example.txt");

class TempDir {
public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("relctl-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "-" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string &name, const std::string &text = "") const {
    const fs::path p = path_ / name;
    if (!text.empty())
      relctl::cli::detail::spill(p.string(), text);
    return p.string();
  }

private:
  fs::path path_;
};

} // namespace

TEST(CliWinners, RunningExample) {
  const Outcome r = run({"winners", example});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_NE(r.out.find("winner: a\n"), std::string::npos);
  EXPECT_NE(r.out.find("a .1111111\n"), std::string::npos);
  EXPECT_NE(r.out.find("uncovered: a\n"), std::string::npos);
  const auto j = run({"winners", example, "--json"}).json();
  EXPECT_EQ(j["winner"], "a");
  EXPECT_EQ(j["uncovered"], nlohmann::json::array({"a"}));
  EXPECT_EQ(j["dominance"][0].size(), 8u);
}

TEST(CliWinners, EmptyElectorate) {
  TempDir dir;
  const auto f = dir.file("empty.txt", "alternatives: a b c\n");
  const auto j = run({"winners", f, "--json"}).json();
  EXPECT_TRUE(j["winner"].is_null());
  EXPECT_EQ(j["uncovered"], nlohmann::json::array({"a", "b", "c"}));
}

TEST(CliWinners, ParseErrorExitsWithTwo) {
  TempDir dir;
  const auto f = dir.file("bad.txt", "alternatives: a b\na a\n");
  const Outcome r = run({"winners", f});
  EXPECT_EQ(r.rc, 2);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
  EXPECT_EQ(run({"winners", dir.file("missing.txt")}).rc, 1);
}

TEST(CliControl, CondorcetTargets) {
  auto j = run({"control", example, "--target", "b", "--json"}).json();
  EXPECT_EQ(j["min_deletions"], 8);
  EXPECT_EQ(j["num_optimal"], "45");
  EXPECT_EQ(j["solutions"].size(), 10u);
  EXPECT_EQ(j["truncated"], true);
  EXPECT_EQ(j["solutions"][0]["delete"],
            nlohmann::json::array({1, 2, 3, 4, 5, 6, 10, 11}));
  const Outcome c = run({"control", example, "--target", "c"});
  EXPECT_EQ(c.rc, 0);
  EXPECT_NE(c.out.find("feasible: no"), std::string::npos);
}

TEST(CliControl, UncoveredTargetG) {
  const auto j =
      run({"control", example, "--target", "g", "--rule", "uncovered", "--json"}).json();
  EXPECT_EQ(j["min_deletions"], 5);
  EXPECT_EQ(j["num_optimal"], "15");
}

TEST(CliControl, OracleMatchesSymbolicJson) {
  for (const char *rule : {"condorcet", "uncovered"})
    for (const char *t : {"a", "b", "c", "d", "e", "f", "g", "h"}) {
      auto s = run({"control", example, "--target", t, "--rule", rule, "--json",
                    "--enumerate", "200"})
                   .json();
      auto o = run({"control", example, "--target", t, "--rule", rule, "--json",
                    "--enumerate", "200", "--oracle"})
                   .json();
      EXPECT_EQ(s["backend"], "symbolic");
      EXPECT_EQ(o["backend"], "oracle");
      s.erase("backend");
      o.erase("backend");
      EXPECT_EQ(s, o) << rule << " " << t;
    }
}

TEST(CliControl, OracleCapFromEnvironment) {
  ::setenv("RELCTL_ORACLE_CAP", "5", 1);
  const Outcome r = run({"control", example, "--target", "b", "--oracle"});
  ::unsetenv("RELCTL_ORACLE_CAP");
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("cap"), std::string::npos) << r.err;
}

TEST(CliControl, OutputIsDeterministic) {
  const std::vector<std::string> args{"control", example, "--target", "h", "--rule",
                                      "uncovered", "--enumerate", "50"};
  const Outcome a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
}

TEST(CliControl, InvalidFlags) {
  EXPECT_EQ(run({"control", example, "--target", "z"}).rc, 1);
  EXPECT_EQ(run({"control", example, "--target", "b", "--rule", "borda"}).rc, 1);
  EXPECT_EQ(run({"control", example}).rc, 1);
  EXPECT_EQ(run({}).rc, 1);
  EXPECT_EQ(run({"--help"}).rc, 0);
}

TEST(CliCheck, WorkedExamples) {
  Outcome r = run({"check", example, "--target", "e", "--rule", "uncovered", "--delete",
               "1,2,4,5,6"});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_NE(r.out.find("wins: true"), std::string::npos);
  EXPECT_NE(r.out.find("uncovered: a e f h"), std::string::npos);
  r = run({"check", example, "--target", "a"});
  EXPECT_NE(r.out.find("wins: true"), std::string::npos);
  const auto j = run({"check", example, "--target", "b", "--json", "--delete",
                      "1,2,3,4,5,6,7,8,9,10,11,12,13"})
                     .json();
  EXPECT_EQ(j["wins"], false);
}

TEST(CliCheck, UnknownVoter) {
  const Outcome r = run({"check", example, "--target", "a", "--delete", "3,14"});
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("unknown voter 14"), std::string::npos);
  EXPECT_EQ(run({"check", example, "--target", "a", "--delete", "x"}).rc, 1);
}

TEST(CliEval, Scripts) {
  Outcome r = run({"eval", source_path("scripts/cv1.ra"), "--election", example});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_NE(r.out.find("type: A <-> A"), std::string::npos);
  EXPECT_NE(r.out.find("a .1111111\n"), std::string::npos);
  r = run({"eval", "--expr", "I[A]", "--election", example});
  EXPECT_NE(r.out.find("entries: 8\n"), std::string::npos);
  EXPECT_NE(r.out.find("h .......1\n"), std::string::npos);
  // the exhaustive oracle also counts 111
  const auto j = run({"eval", source_path("scripts/cv5.ra"), "--election", example,
                      "--target", "e", "--json"})
                     .json();
  EXPECT_EQ(j["entries"], "111");
  EXPECT_EQ(j["members"].size(), 20u);
}

TEST(CliEval, ErrorCodes) {
  Outcome r = run({"eval", "--expr", "P . P", "--election", example});
  EXPECT_EQ(r.rc, 3);
  EXPECT_NE(r.err.find("1:3: type error"), std::string::npos) << r.err;
  r = run({"eval", "--expr", "P . ", "--election", example});
  EXPECT_EQ(r.rc, 2);
  EXPECT_EQ(run({"eval", "--expr", "p", "--target", "a"}).rc, 1);
  EXPECT_EQ(run({"eval"}).rc, 1);
  EXPECT_EQ(run({"eval", "--expr", "L[unit <-> unit]"}).rc, 0);
}

TEST(CliReduce, GeneratedInstanceWithAudit) {
  TempDir dir;
  const auto inst = dir.file("x4c.json");
  ASSERT_EQ(run({"gen-x4c", "--n", "16", "--planted", "--seed", "7", "--out", inst}).rc, 0);
  const auto out = dir.file("election.txt");
  const Outcome r = run({"reduce", inst, "--out", out, "--audit"});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_NE(r.out.find("0 deviations"), std::string::npos);
  const relctl::Election e = relctl::parse_election(read_file(out));
  EXPECT_EQ(e.n(), 77u);
  const auto layout = nlohmann::json::parse(read_file(out + ".layout.json"));
  EXPECT_EQ(layout["budget"], 4);
  EXPECT_EQ(layout["target"], "astar");
  EXPECT_EQ(layout["groups"].size(), 77u);
}

TEST(CliReduce, InvalidInstanceListsViolations) {
  TempDir dir;
  const auto inst = dir.file("bad.json", R"({"n": 16, "sets": [[1, 2, 3, 3]]})");
  const Outcome r = run({"reduce", inst, "--out", dir.file("e.txt")});
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("invalid X4C instance"), std::string::npos);
  EXPECT_NE(r.err.find("expected 3n/4 = 12 sets"), std::string::npos) << r.err;
}

TEST(CliReduce, OneInThreeChain) {
  TempDir dir;
  const auto cnf = dir.file("c.json");
  ASSERT_EQ(run({"gen-1in3", "--clauses", "16", "--planted", "--out", cnf}).rc, 0);
  const Outcome r = run({"reduce-1in3", cnf});
  ASSERT_EQ(r.rc, 0) << r.err;
  const auto x = relctl::x4c_from_json(r.json());
  EXPECT_EQ(x.n, 16u);
  EXPECT_TRUE(relctl::validate_x4c(x).empty());
}
