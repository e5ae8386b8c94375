#include <filesystem>
#include <fstream>
#include <sstream>

#include "crowdstar/ingest.hpp"
#include "doctest.h"

using namespace crowdstar;

namespace {

IngestOptions default_options() {
  IngestOptions opts;
  opts.policies.emplace("twitter-like", twitter_like_policy());
  opts.policies.emplace("quora-like", quora_like_policy());
  opts.topic_universe = {Topic::of("hiking"), Topic::of("travel")};
  return opts;
}

std::string tweet_line(const std::string& id, Timestamp ts, const std::string& text) {
  return R"({"event_id":")" + id + R"(","crowd":"twitter-like","author":"bob","timestamp":)" +
         std::to_string(ts) + R"(,"kind":"post","text":")" + text + R"("})";
}

}  // namespace

TEST_CASE("ingest counts accepted and rejected lines") {
  std::stringstream log;
  log << tweet_line("t1", 100, "morning walk") << "\n";
  log << tweet_line("t2", 200, "afternoon") << "\n";
  log << "{not json\n";
  log << tweet_line("t3", 300, "evening") << "\n";
  IngestResult r = ingest_lines(log, default_options());
  CHECK(r.report.accepted == 3);
  CHECK(r.report.rejected == 1);
  CHECK(r.report.reject_reasons.at("parse_error") == 1);
  CHECK(r.report.time_range->first == 100);
  CHECK(r.report.time_range->second == 300);
}

TEST_CASE("twitter-like events are topic-tagged from text") {
  std::stringstream log;
  log << tweet_line("t1", 100, "found a great hiking trail") << "\n";
  IngestResult r = ingest_lines(log, default_options());
  REQUIRE(r.events.size() == 1);
  REQUIRE(r.events[0].event.topics.size() == 1);
  CHECK(r.events[0].event.topics[0].label == "hiking");
}

TEST_CASE("quora-like tags are trusted even when the text disagrees") {
  std::stringstream log;
  log << R"({"event_id":"q1","crowd":"quora-like","author":"ann","timestamp":50,"kind":"blog",)"
      << R"("topics":["travel"],"text":"my hiking diary"})" << "\n";
  IngestResult r = ingest_lines(log, default_options());
  REQUIRE(r.events.size() == 1);
  REQUIRE(r.events[0].event.topics.size() == 1);
  CHECK(r.events[0].event.topics[0].label == "travel");
}

TEST_CASE("unknown crowd and duplicate ids are rejected with reasons") {
  std::stringstream log;
  log << tweet_line("t1", 100, "x") << "\n";
  log << tweet_line("t1", 150, "duplicate id") << "\n";
  log << R"({"event_id":"z","crowd":"mystery","author":"a","timestamp":10,"kind":"post"})" << "\n";
  IngestResult r = ingest_lines(log, default_options());
  CHECK(r.report.accepted == 1);
  CHECK(r.report.rejected == 2);
  CHECK(r.report.reject_reasons.at("duplicate_event_id") == 1);
  CHECK(r.report.reject_reasons.at("unknown_crowd") == 1);
}

TEST_CASE("output is totally ordered by (timestamp, event_id)") {
  std::stringstream log;
  log << tweet_line("b", 200, "x") << "\n";
  log << tweet_line("a", 200, "y") << "\n";
  log << tweet_line("c", 100, "z") << "\n";
  IngestResult r = ingest_lines(log, default_options());
  REQUIRE(r.events.size() == 3);
  CHECK(r.events[0].event.event_id == "c");
  CHECK(r.events[1].event.event_id == "a");
  CHECK(r.events[2].event.event_id == "b");
}

TEST_CASE("re-ingesting the same log is idempotent") {
  const std::string content = tweet_line("t1", 100, "hiking") + "\n" + tweet_line("t2", 150, "travel plans") + "\n";
  std::stringstream once(content);
  std::stringstream twice(content + content);
  IngestResult a = ingest_lines(once, default_options());
  IngestResult b = ingest_lines(twice, default_options());
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].event.event_id == b.events[i].event.event_id);
  }
  CHECK(b.report.reject_reasons.at("duplicate_event_id") == 2);
}

TEST_CASE("unknown fields are ignored, invariants enforced") {
  std::stringstream log;
  log << R"({"event_id":"t9","crowd":"twitter-like","author":"b","timestamp":5,"kind":"post",)"
      << R"("someday":"maybe"})" << "\n";
  log << R"({"event_id":"t10","crowd":"twitter-like","author":"b","timestamp":5,"kind":"answer"})" << "\n";
  IngestResult r = ingest_lines(log, default_options());
  CHECK(r.report.accepted == 1);
  CHECK(r.report.reject_reasons.at("answer_missing_reply_ref") == 1);
}

TEST_CASE("multiple files ingest as one stream with global dedup") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "crowdstar-ingest-test";
  fs::create_directories(dir);
  {
    std::ofstream a(dir / "a.jsonl");
    a << tweet_line("t1", 100, "hiking") << "\n" << tweet_line("t2", 200, "x") << "\n";
    std::ofstream b(dir / "b.jsonl");
    b << tweet_line("t2", 300, "same id again") << "\n" << tweet_line("t3", 400, "y") << "\n";
  }
  IngestResult r = ingest_files({dir / "a.jsonl", dir / "b.jsonl"}, default_options());
  CHECK(r.report.accepted == 3);
  CHECK(r.report.reject_reasons.at("duplicate_event_id") == 1);
  CHECK_THROWS_AS(ingest_files({dir / "missing.jsonl"}, default_options()), Error);
  fs::remove_all(dir);
}

TEST_CASE("window filter is half-open (now - w, now]") {
  std::vector<ClassifiedEvent> events;
  auto add = [&](Timestamp ts) {
    ClassifiedEvent ce;
    ce.event.event_id = std::to_string(ts);
    ce.event.timestamp = ts;
    events.push_back(ce);
  };
  const Timestamp now = days(100);
  add(now - days(10));  // inside
  add(now - days(40));  // outside
  add(now - days(30));  // exactly at the boundary -> dropped
  add(now);             // at now -> kept

  auto kept = window_filter(events, days(30), now);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].event.timestamp == now - days(10));
  CHECK(kept[1].event.timestamp == now);

  auto all = window_filter(events, std::nullopt, now);
  CHECK(all.size() == 4);
  CHECK_THROWS_AS(window_filter(events, Duration{0}, now), Error);
}

TEST_CASE("canonical json line round-trips through ingest") {
  ActivityEvent e;
  e.event_id = "t1";
  e.crowd = "twitter-like";
  e.author = "bob";
  e.timestamp = 123;
  e.kind = EventKind::question;
  e.conversational = true;
  e.addressed_to = "ann";
  e.text = "any hiking tips?";
  std::stringstream log(to_json_line(e) + "\n");
  IngestResult r = ingest_lines(log, default_options());
  REQUIRE(r.report.accepted == 1);
  const ActivityEvent& back = r.events[0].event;
  CHECK(back.event_id == e.event_id);
  CHECK(back.kind == EventKind::question);
  CHECK(back.addressed_to == e.addressed_to);
  CHECK(back.topics.size() == 1);  // tagged from text at ingestion
}
