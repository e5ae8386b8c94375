// End-to-end checks driving the installed CLI binary (path in CROWDSTAR_CLI).

#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "crowdstar/storage.hpp"
#include "doctest.h"

using namespace crowdstar;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

std::filesystem::path cli_path() {
  const char* env = std::getenv("CROWDSTAR_CLI");
  REQUIRE_MESSAGE(env != nullptr, "CROWDSTAR_CLI must point at the crowdstar binary");
  return env;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("crowdstar-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
  const auto out_file = dir.path / "cmd.out";
  std::ostringstream cmd;
  cmd << "cd " << dir.path << " && CROWDSTAR_HOME=" << (dir.path / "state").string() << " "
      << cli_path().string() << " " << args << " > " << out_file.string() << " 2>&1";
  const int status = std::system(cmd.str().c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  return result;
}

}  // namespace

TEST_CASE("unknown subcommands and flags exit with usage errors") {
  TempDir dir;
  CHECK(run_cli(dir, "frobnicate").exit_code == 2);
  CHECK(run_cli(dir, "skyline --nope").exit_code == 2);
  CHECK(run_cli(dir, "--help").exit_code == 0);
}

TEST_CASE("report on empty state succeeds") {
  TempDir dir;
  RunResult r = run_cli(dir, "report");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("no data") != std::string::npos);
}

TEST_CASE("simulate -> ingest -> index -> skyline -> route -> feedback -> evaluate") {
  TempDir dir;
  RunResult sim = run_cli(dir, "simulate --out events.jsonl");
  REQUIRE(sim.exit_code == 0);

  RunResult ing = run_cli(dir, "ingest --events events.jsonl");
  REQUIRE(ing.exit_code == 0);
  CHECK(ing.output.find("rejected: 0") != std::string::npos);

  RunResult idx = run_cli(dir, "index");
  REQUIRE(idx.exit_code == 0);
  CHECK(std::filesystem::exists(dir.path / "state" / "snapshots"));

  RunResult sky = run_cli(dir, "skyline --crowd twitter-like --topic hiking --dims 2 --format lines");
  REQUIRE(sky.exit_code == 0);
  // First emitted line is a level-1 point.
  CHECK(sky.output.find("\"level\":1") != std::string::npos);

  RunResult sum = run_cli(dir, "summarize --topic hiking");
  REQUIRE(sum.exit_code == 0);
  CHECK(sum.output.find("score=") != std::string::npos);

  RunResult route = run_cli(dir, "route --question \"Best hiking trail for beginners?\" --topic hiking --budget 4");
  REQUIRE(route.exit_code == 0);
  auto plans = load_plan_log(dir.path / "state" / "plans.jsonl");
  REQUIRE(plans.size() == 4);

  RunResult respond = run_cli(dir, "simulate --respond-to state/plans.jsonl --out feedback.jsonl");
  REQUIRE(respond.exit_code == 0);

  RunResult fb = run_cli(dir, "feedback --from feedback.jsonl");
  REQUIRE(fb.exit_code == 0);

  RunResult eval = run_cli(dir, "evaluate");
  REQUIRE(eval.exit_code == 0);
  CHECK(eval.output.find("routed run") != std::string::npos);
  CHECK(std::filesystem::exists(dir.path / "state" / "evaluation.json"));

  RunResult rep = run_cli(dir, "report");
  REQUIRE(rep.exit_code == 0);
  CHECK(rep.output.find("crowd comparison") != std::string::npos);
}

TEST_CASE("route excludes a just-asked user on the same topic until the gate passes") {
  TempDir dir;
  REQUIRE(run_cli(dir, "simulate --out events.jsonl").exit_code == 0);
  REQUIRE(run_cli(dir, "ingest --events events.jsonl").exit_code == 0);

  RunResult first = run_cli(dir, "route --question \"Trail tips?\" --topic hiking --budget 2");
  REQUIRE(first.exit_code == 0);
  auto plans1 = load_plan_log(dir.path / "state" / "plans.jsonl");
  REQUIRE(plans1.size() == 2);

  RunResult second = run_cli(dir, "route --question \"More trail tips?\" --topic hiking --budget 2");
  REQUIRE(second.exit_code == 0);
  auto plans2 = load_plan_log(dir.path / "state" / "plans.jsonl");
  REQUIRE(plans2.size() == 4);
  // No overlap between the two plans: everyone from plan 1 is resting.
  std::set<std::string> first_users, second_users;
  for (std::size_t i = 0; i < 2; ++i) first_users.insert(plans2[i].crowd + ":" + plans2[i].user);
  for (std::size_t i = 2; i < 4; ++i) second_users.insert(plans2[i].crowd + ":" + plans2[i].user);
  for (const std::string& u : second_users) CHECK_FALSE(first_users.contains(u));
}

TEST_CASE("subcommands write only into the state directory and named outputs") {
  TempDir dir;
  REQUIRE(run_cli(dir, "simulate --out events.jsonl").exit_code == 0);
  REQUIRE(run_cli(dir, "ingest --events events.jsonl").exit_code == 0);
  REQUIRE(run_cli(dir, "index").exit_code == 0);
  REQUIRE(run_cli(dir, "route --question \"Trail tips?\" --topic hiking --budget 2").exit_code == 0);
  REQUIRE(run_cli(dir, "evaluate").exit_code == 0);
  std::set<std::string> top_level;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path)) {
    top_level.insert(entry.path().filename().string());
  }
  CHECK(top_level == std::set<std::string>{"cmd.out", "events.jsonl", "state"});
}

TEST_CASE("snapshot materialization is identical across --jobs settings") {
  TempDir dir;
  REQUIRE(run_cli(dir, "simulate --out events.jsonl").exit_code == 0);
  REQUIRE(run_cli(dir, "ingest --events events.jsonl").exit_code == 0);
  REQUIRE(run_cli(dir, "index --snapshot-dir serial").exit_code == 0);
  REQUIRE(run_cli(dir, "index --jobs 4 --snapshot-dir parallel").exit_code == 0);
  int compared = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.path / "serial")) {
    std::ifstream a(entry.path());
    std::ifstream b(dir.path / "parallel" / entry.path().filename());
    REQUIRE(b.good());
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    compared += 1;
  }
  CHECK(compared == 4);  // two crowds x two topics
}

TEST_CASE("a three-crowd configuration routes end to end") {
  TempDir dir;
  {
    std::ofstream cfg(dir.path / "three.ini");
    cfg << "[topics]\nuniverse = hiking, travel\n"
        << "[crowd.birdsite]\nstyle = twitter\n"
        << "[crowd.qna]\nstyle = quora\n"
        << "[crowd.forum]\nstyle = quora\ncorrectness = upvotes:1\n"
        << "[simulator]\nseed = 5\nhorizon_days = 7\n";
  }
  REQUIRE(run_cli(dir, "--config three.ini simulate --out events.jsonl").exit_code == 0);
  REQUIRE(run_cli(dir, "--config three.ini ingest --events events.jsonl").exit_code == 0);
  RunResult route = run_cli(dir, "--config three.ini route --question \"Trail tips?\" --topic hiking --budget 6");
  REQUIRE(route.exit_code == 0);
  auto plans = load_plan_log(dir.path / "state" / "plans.jsonl");
  CHECK(plans.size() <= 6);
  CHECK(!plans.empty());
  std::set<std::string> crowds;
  for (const auto& r : plans) crowds.insert(r.crowd);
  CHECK(crowds.size() >= 2);  // the budget spreads across crowds
}

TEST_CASE("invalid feedback is a validation failure, not a crash") {
  TempDir dir;
  RunResult r = run_cli(dir, "feedback --question-id nope --responder twitter-like:u --at 100");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error:") != std::string::npos);
}
