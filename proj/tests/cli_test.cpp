#include "actorsim/cli.hpp"
#include "actorsim/scenarios.hpp"
#include "actorsim/trace.hpp"
#include "actorsim/trace_io.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace actorsim;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("actorctl-test-" + std::to_string(::getpid()) + "-" +
                                         std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void spit(const std::string& path, const std::string& text) { std::ofstream(path, std::ios::binary) << text; }

}  // namespace

TEST(Cli, ListsEveryScenario) {
  const auto r = cli({"list"});
  EXPECT_EQ(r.code, kExitOk);
  for (const auto& s : scenario_catalog()) EXPECT_NE(r.out.find(s.name), std::string::npos);
  EXPECT_EQ(scenario_catalog().size(), 13u);
}

TEST(Cli, AccountExhaustive) {
  const auto r = cli({"run", "account", "--policy", "exhaustive", "--depth", "10"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("outcomes: {2}"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("laws: ok"), std::string::npos);
}

TEST(Cli, UnboundedFair) {
  const auto r = cli({"run", "unbounded", "--policy", "fair", "--seed", "7"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("halted: true"), std::string::npos);
  EXPECT_NE(r.out.find("outputs: 1"), std::string::npos) << r.out;
}

TEST(Cli, CspStarvedDoesNotHaltButSucceeds) {
  const auto r = cli({"run", "csp-xyz", "--policy", "adversarial", "--script", "starve-stop", "--max-steps", "1000"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("halted: false"), std::string::npos);
  EXPECT_NE(r.out.find("steps: 1000"), std::string::npos);
}

TEST(Cli, BudgetExhaustionElsewhereExits3) {
  const auto r = cli({"run", "unbounded", "--policy", "adversarial", "--script", "starve-stop", "--max-steps", "50"});
  EXPECT_EQ(r.code, kExitNotHalted);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"run"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "nope"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "account", "--policy", "sometimes"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "account", "--policy", "adversarial"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "account", "--param", "nope=1"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "account", "--param", "balance"}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, Params) {
  const auto r = cli({"run", "account", "--param", "balance=10", "--param", "first=3", "--param", "second=4"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("outputs: 3"), std::string::npos) << r.out;
  const auto f = cli({"run", "same-fringe", "--param", "first=(1 2)", "--param", "second=(1 3)"});
  EXPECT_NE(f.out.find("outputs: false"), std::string::npos) << f.out;
  const auto l = cli({"run", "lambda", "--param", "term=(\\x.\\y.x) 1 2"});
  EXPECT_NE(l.out.find("outputs: 1"), std::string::npos) << l.out;
}

TEST(Cli, TraceRoundTripAcrossPolicies) {
  TempDir dir;
  for (const auto& s : scenario_catalog()) {
    if (s.logic) continue;
    for (const std::vector<std::string> policy :
         {std::vector<std::string>{"--policy", "fair"}, {"--policy", "random", "--seed", "0"},
          {"--policy", "random", "--seed", "1"}, {"--policy", "random", "--seed", "2"}}) {
      const auto path = dir.file(s.name + ".jsonl");
      std::vector<std::string> args{"run", s.name, "--trace-out", path};
      args.insert(args.end(), policy.begin(), policy.end());
      ASSERT_EQ(cli(args).code, kExitOk) << s.name;
      const auto check = cli({"check-trace", path});
      EXPECT_EQ(check.code, kExitOk) << s.name << "\n" << check.out;
    }
  }
}

TEST(Cli, IdenticalDescriptorsGiveIdenticalTraces) {
  TempDir dir;
  for (const char* name : {"future", "real", "same-fringe"}) {
    const auto a = dir.file("a.jsonl");
    const auto b = dir.file("b.jsonl");
    cli({"run", name, "--policy", "random", "--seed", "9", "--trace-out", a});
    cli({"run", name, "--policy", "random", "--seed", "9", "--trace-out", b});
    EXPECT_EQ(slurp(a), slurp(b)) << name;
    EXPECT_FALSE(slurp(a).empty());
  }
}

TEST(Cli, CheckTraceErrors) {
  TempDir dir;
  const auto path = dir.file("t.jsonl");
  cli({"run", "account", "--trace-out", path});
  const std::string text = slurp(path);
  spit(path, text.substr(0, text.size() / 2));
  EXPECT_EQ(cli({"check-trace", path}).code, kExitParse);
  EXPECT_EQ(cli({"check-trace", dir.file("missing.jsonl")}).code, kExitNoInput);
}

TEST(Cli, CheckTraceFlagsDoubleResponse) {
  TempDir dir;
  const auto path = dir.file("double.jsonl");
  spit(path,
       "{\"t\":\"meta\",\"policy\":\"fixture\"}\n"
       "{\"t\":\"new\",\"actor\":0,\"by\":null,\"behavior\":\"customer\",\"refs\":[]}\n"
       "{\"t\":\"new\",\"actor\":1,\"by\":null,\"behavior\":\"account\",\"refs\":[]}\n"
       "{\"t\":\"m\",\"id\":0,\"target\":1,\"kind\":\"req\",\"payload\":{\"sym\":\"getBalance\"},\"customer\":0}\n"
       "{\"t\":\"tx\",\"id\":0,\"msg\":0,\"by\":null}\n"
       "{\"t\":\"rx\",\"id\":1,\"actor\":1,\"seq\":0,\"msg\":0,\"by\":0}\n"
       "{\"t\":\"m\",\"id\":1,\"target\":0,\"kind\":\"ret\",\"payload\":5,\"customer\":null}\n"
       "{\"t\":\"tx\",\"id\":2,\"msg\":1,\"by\":1}\n"
       "{\"t\":\"m\",\"id\":2,\"target\":0,\"kind\":\"ret\",\"payload\":5,\"customer\":null}\n"
       "{\"t\":\"tx\",\"id\":3,\"msg\":2,\"by\":1}\n"
       "{\"t\":\"end\",\"events\":4,\"messages\":3}\n");
  const auto r = cli({"check-trace", path});
  EXPECT_EQ(r.code, kExitLawViolation);
  EXPECT_NE(r.out.find("single-response"), std::string::npos) << r.out;
}

TEST(Cli, LogicScripts) {
  TempDir dir;
  const auto empty = dir.file("empty.dl");
  spit(empty, "");
  const auto e = cli({"logic", empty});
  EXPECT_EQ(e.code, kExitOk);
  EXPECT_TRUE(e.out.empty());

  const auto robust = dir.file("robust.dl");
  spit(robust, "assert t P\nassert t ~P\nsaturate t 3\nquery t Q\n");
  const auto r = cli({"logic", robust});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "no matches\n");

  const auto bad = dir.file("bad.dl");
  spit(bad, "assert t (P &\n");
  EXPECT_EQ(cli({"logic", bad}).code, kExitParse);

  for (const char* name : {"socrates-forward", "socrates-backward"}) {
    const auto s = cli({"run", name});
    EXPECT_EQ(s.code, kExitOk);
    EXPECT_NE(s.out.find("Mortal[Socrates]"), std::string::npos) << name;
  }
}

TEST(Cli, ExhaustiveRejectsTraceOut) {
  TempDir dir;
  EXPECT_EQ(cli({"run", "account", "--policy", "exhaustive", "--trace-out", dir.file("x")}).code, kExitUsage);
}

TEST(Cli, EnumerationCapFromEnvironment) {
  ::setenv("ACTOR_KERNEL_ENUM_CAP", "10", 1);
  const auto r = cli({"run", "account", "--policy", "exhaustive", "--depth", "10"});
  ::unsetenv("ACTOR_KERNEL_ENUM_CAP");
  EXPECT_EQ(r.code, kExitNotHalted);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, BinaryExitCodes) {
  const std::string bin = ACTORCTL_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("run account"), 0);
  EXPECT_EQ(status("run nope"), 64);
  EXPECT_EQ(status("check-trace /nonexistent/trace.jsonl"), 66);
}
