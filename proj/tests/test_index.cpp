#include "crowdstar/index.hpp"

#include "crowdstar/ingest.hpp"
#include "doctest.h"

using namespace crowdstar;

namespace {

std::map<CrowdId, CrowdPolicy> test_policies() {
  std::map<CrowdId, CrowdPolicy> p;
  p.emplace("twitter-like", twitter_like_policy());
  p.emplace("quora-like", quora_like_policy());
  return p;
}

ClassifiedEvent tweet(const std::string& id, const std::string& author, Timestamp ts,
                      const std::string& topic = "hiking") {
  ActivityEvent e;
  e.event_id = id;
  e.crowd = "twitter-like";
  e.author = author;
  e.topics = {Topic::of(topic)};
  e.timestamp = ts;
  e.kind = EventKind::post;
  CrowdPolicy p = twitter_like_policy();
  return ClassifiedEvent{e, classify_event(e, p), event_weight(e, p), false};
}

const Topic kHiking = Topic::of("hiking");

}  // namespace

TEST_CASE("knowledge freezes between daily ticks, availability moves at once") {
  FeatureIndex index(IndexConfig{}, test_policies());
  const Timestamp t0 = kSecondsPerDay * 100;
  index.add_events(std::vector<ClassifiedEvent>{tweet("t1", "u", t0 - hours(5)),
                                                tweet("t2", "u", t0 - hours(4)),
                                                tweet("t3", "v", t0 - hours(3))});
  index.daily_tick(t0);
  TopicSnapshot before = index.snapshot("twitter-like", kHiking, t0);
  const double k1_before = before.users.at("u").features.K1;
  const double a2_before = before.users.at("u").features.A2;

  // An ask lands: availability must change immediately, knowledge must not.
  index.record_ask("q-1", "tips?", UserId{"twitter-like", "u"}, kHiking, t0 + hours(1));
  TopicSnapshot after = index.snapshot("twitter-like", kHiking, t0 + hours(1));
  CHECK(after.users.at("u").features.K1 == doctest::Approx(k1_before));
  CHECK(after.users.at("u").features.A2 == doctest::Approx(0.0));
  CHECK(after.users.at("u").features.A2 < a2_before);
  CHECK(after.users.at("u").counters.responsiveness.PQ == 1);
  CHECK(after.knowledge_as_of == t0);

  // New authored content appears in knowledge only after the next tick.
  index.add_events(std::vector<ClassifiedEvent>{tweet("t4", "u", t0 + hours(2))});
  TopicSnapshot mid = index.snapshot("twitter-like", kHiking, t0 + hours(3));
  CHECK(mid.users.at("u").counters.qualification.P == 2);  // counters are live
  CHECK(mid.users.at("u").features.K1 == doctest::Approx(k1_before));
  index.daily_tick(t0 + days(1));
  TopicSnapshot next = index.snapshot("twitter-like", kHiking, t0 + days(1));
  CHECK(next.users.at("u").counters.qualification.P == 3);
  CHECK(next.knowledge_as_of == t0 + days(1));
}

TEST_CASE("daily tick with no new events is a fixed point") {
  FeatureIndex index(IndexConfig{}, test_policies());
  const Timestamp t0 = kSecondsPerDay * 100;
  index.add_events(std::vector<ClassifiedEvent>{tweet("t1", "u", t0 - hours(5))});
  index.daily_tick(t0);
  TopicSnapshot a = index.snapshot("twitter-like", kHiking, t0);
  index.daily_tick(t0);
  TopicSnapshot b = index.snapshot("twitter-like", kHiking, t0);
  CHECK(a.users.at("u").features.K1 == doctest::Approx(b.users.at("u").features.K1));
  CHECK(a.users.at("u").features.K2 == doctest::Approx(b.users.at("u").features.K2));
}

TEST_CASE("routing events mark the topic skyline stale") {
  FeatureIndex index(IndexConfig{}, test_policies());
  const Timestamp t0 = kSecondsPerDay * 100;
  index.add_events(std::vector<ClassifiedEvent>{tweet("t1", "u", t0 - hours(5))});
  index.daily_tick(t0);
  (void)index.snapshot("twitter-like", kHiking, t0);
  CHECK_FALSE(index.is_stale("twitter-like", kHiking));
  index.record_ask("q-1", "tips?", UserId{"twitter-like", "u"}, kHiking, t0);
  CHECK(index.is_stale("twitter-like", kHiking));
  (void)index.snapshot("twitter-like", kHiking, t0);  // fresh read clears it
  CHECK_FALSE(index.is_stale("twitter-like", kHiking));
}

TEST_CASE("feedback updates counters and deduplicates per (user, question)") {
  FeatureIndex index(IndexConfig{}, test_policies());
  const Timestamp t0 = kSecondsPerDay * 100;
  index.add_events(std::vector<ClassifiedEvent>{tweet("t1", "u", t0 - hours(5))});
  index.daily_tick(t0);
  index.record_ask("q-1", "tips?", UserId{"twitter-like", "u"}, kHiking, t0);

  FeedbackEvent fb{"q-1", UserId{"twitter-like", "u"}, t0 + hours(2), true};
  auto outcome = index.apply_feedback(fb);
  CHECK(outcome.accepted);
  CHECK(outcome.solicited);

  TopicSnapshot snap = index.snapshot("twitter-like", kHiking, t0 + hours(2));
  const MetricCounters& m = snap.users.at("u").counters.responsiveness;
  CHECK(m.AQ == 1);
  CHECK(m.RT_n == 1);
  CHECK(m.RT_sum_hours == doctest::Approx(2.0));
  CHECK(*snap.users.at("u").counters.activity.LA == t0 + hours(2));

  // A second answer to the same question by the same user changes nothing.
  FeedbackEvent again{"q-1", UserId{"twitter-like", "u"}, t0 + hours(3), true};
  auto dup = index.apply_feedback(again);
  CHECK(dup.duplicate);
  TopicSnapshot snap2 = index.snapshot("twitter-like", kHiking, t0 + hours(3));
  CHECK(snap2.users.at("u").counters.responsiveness.AQ == 1);
}

TEST_CASE("unsolicited feedback counts for the responder without latency") {
  FeatureIndex index(IndexConfig{}, test_policies());
  const Timestamp t0 = kSecondsPerDay * 100;
  index.add_events(std::vector<ClassifiedEvent>{tweet("t1", "u", t0 - hours(5)),
                                                tweet("t2", "w", t0 - hours(4))});
  index.daily_tick(t0);
  index.record_ask("q-1", "tips?", UserId{"twitter-like", "u"}, kHiking, t0);

  FeedbackEvent fb{"q-1", UserId{"twitter-like", "w"}, t0 + hours(1), false};
  auto outcome = index.apply_feedback(fb);
  CHECK(outcome.accepted);
  CHECK_FALSE(outcome.solicited);
  TopicSnapshot snap = index.snapshot("twitter-like", kHiking, t0 + hours(1));
  const MetricCounters& w = snap.users.at("w").counters.responsiveness;
  CHECK(w.AQ == 1);
  CHECK(w.RT_n == 0);  // not asked, no presented-question latency
  // The asked user's counters are untouched by someone else's answer.
  CHECK(snap.users.at("u").counters.responsiveness.AQ == 0);
}

TEST_CASE("unknown question feedback is rejected") {
  FeatureIndex index(IndexConfig{}, test_policies());
  FeedbackEvent fb{"nope", UserId{"twitter-like", "u"}, 1000, std::nullopt};
  auto outcome = index.apply_feedback(fb);
  CHECK_FALSE(outcome.accepted);
  CHECK(outcome.reason == "unknown_question");
}

TEST_CASE("rebuilding from the same inputs is deterministic") {
  auto build = [] {
    FeatureIndex index(IndexConfig{}, test_policies());
    const Timestamp t0 = kSecondsPerDay * 100;
    index.add_events(std::vector<ClassifiedEvent>{tweet("t1", "u", t0 - hours(5)),
                                                  tweet("t2", "v", t0 - hours(4)),
                                                  tweet("t3", "w", t0 - hours(3))});
    index.daily_tick(t0);
    index.record_ask("q-1", "tips?", UserId{"twitter-like", "v"}, kHiking, t0);
    index.apply_feedback(FeedbackEvent{"q-1", UserId{"twitter-like", "v"}, t0 + hours(1), true});
    return index.snapshot("twitter-like", kHiking, t0 + hours(2));
  };
  TopicSnapshot a = build();
  TopicSnapshot b = build();
  REQUIRE(a.users.size() == b.users.size());
  for (const auto& [handle, uf] : a.users) {
    const FeatureVector& fa = uf.features;
    const FeatureVector& fb = b.users.at(handle).features;
    CHECK(fa.K1 == fb.K1);  // bit-for-bit
    CHECK(fa.K2 == fb.K2);
    CHECK(fa.A1 == fb.A1);
    CHECK(fa.A2 == fb.A2);
    CHECK(fa.K1n == fb.K1n);
    CHECK(fa.A2n == fb.A2n);
  }
}

TEST_CASE("asks on one topic leave other topics available") {
  FeatureIndex index(IndexConfig{}, test_policies());
  const Timestamp t0 = kSecondsPerDay * 100;
  index.add_events(std::vector<ClassifiedEvent>{tweet("t1", "u", t0 - hours(5), "hiking"),
                                                tweet("t2", "u", t0 - hours(4), "travel")});
  index.daily_tick(t0);
  index.record_ask("q-1", "tips?", UserId{"twitter-like", "u"}, kHiking, t0);
  TopicSnapshot hiking = index.snapshot("twitter-like", kHiking, t0 + hours(1));
  TopicSnapshot travel = index.snapshot("twitter-like", Topic::of("travel"), t0 + hours(1));
  CHECK(hiking.users.at("u").features.A2 == doctest::Approx(1.0));
  CHECK(travel.users.at("u").features.A2 > 24.0);  // idle on the other topic
}
