#include <cstring>
#include <random>

#include "crowdstar/policy.hpp"
#include "doctest.h"

using namespace crowdstar;

namespace {

ActivityEvent make_event(const CrowdPolicy& policy, EventKind kind) {
  ActivityEvent e;
  e.event_id = "e-1";
  e.crowd = policy.crowd;
  e.author = "alice";
  e.topics = {Topic::of("hiking")};
  e.timestamp = 1000;
  e.kind = kind;
  if (kind == EventKind::answer) e.in_reply_to = "q-1";
  return e;
}

}  // namespace

TEST_CASE("topic normalization trims and lower-cases") {
  CHECK(Topic::of("  Hiking ").label == "hiking");
  CHECK(Topic::of("TRAVEL").label == "travel");
  CHECK(Topic::of("") .empty());
}

TEST_CASE("event validation catches invariant violations") {
  CrowdPolicy p = twitter_like_policy();
  ActivityEvent e = make_event(p, EventKind::post);
  CHECK(validate(e).empty());

  ActivityEvent bad_ts = e;
  bad_ts.timestamp = 0;
  CHECK(validate(bad_ts) == "bad_timestamp");

  ActivityEvent bad_up = e;
  bad_up.upvotes = -2;
  CHECK(validate(bad_up) == "negative_upvotes");

  ActivityEvent answer = make_event(p, EventKind::answer);
  answer.in_reply_to.reset();
  CHECK(validate(answer) == "answer_missing_reply_ref");

  ActivityEvent repost = e;
  repost.repost = true;
  repost.conversational = true;
  CHECK(validate(repost) == "conversational_repost");
}

TEST_CASE("classify: answer upvotes under the quora threshold rule") {
  CrowdPolicy quora = quora_like_policy();
  ActivityEvent answer = make_event(quora, EventKind::answer);
  answer.upvotes = 3;
  EventClassification c = classify_event(answer, quora);
  CHECK(c.is_answer);
  CHECK(c.is_correct_answer);  // 3 >= 2

  answer.upvotes = 1;
  CHECK_FALSE(classify_event(answer, quora).is_correct_answer);
}

TEST_CASE("classify: retweet counts as a post but never as original") {
  CrowdPolicy twitter = twitter_like_policy();
  ActivityEvent repost = make_event(twitter, EventKind::post);
  repost.repost = true;
  EventClassification c = classify_event(repost, twitter);
  CHECK(c.is_post);
  CHECK_FALSE(c.is_original_post);
  CHECK_FALSE(c.is_conversational_post);
}

TEST_CASE("classify: quora questions give no qualification evidence") {
  CrowdPolicy quora = quora_like_policy();
  ActivityEvent q = make_event(quora, EventKind::question);
  EventClassification c = classify_event(q, quora);
  CHECK(c.is_question);
  CHECK(c.is_post);
  CHECK_FALSE(c.is_original_post);
}

TEST_CASE("classify: explicit label passthrough regardless of upvotes") {
  CrowdPolicy twitter = twitter_like_policy();
  ActivityEvent answer = make_event(twitter, EventKind::answer);
  answer.upvotes = 0;
  answer.correct_label = true;
  CHECK(classify_event(answer, twitter).is_correct_answer);
  answer.correct_label.reset();  // absent means not correct
  CHECK_FALSE(classify_event(answer, twitter).is_correct_answer);
}

TEST_CASE("classify: crowd mismatch is a policy error") {
  CrowdPolicy twitter = twitter_like_policy();
  ActivityEvent e = make_event(twitter, EventKind::post);
  e.crowd = "quora-like";
  CHECK_THROWS_AS(classify_event(e, twitter), Error);
}

TEST_CASE("event_weight follows the upvote-weighting switch") {
  CrowdPolicy quora = quora_like_policy();   // weighting on
  CrowdPolicy twitter = twitter_like_policy();  // weighting off
  ActivityEvent e = make_event(quora, EventKind::answer);
  e.upvotes = 4;
  CHECK(event_weight(e, quora) == doctest::Approx(5.0));
  ActivityEvent t = make_event(twitter, EventKind::answer);
  t.upvotes = 4;
  CHECK(event_weight(t, twitter) == doctest::Approx(1.0));
  e.upvotes = 0;
  CHECK(event_weight(e, quora) == doctest::Approx(1.0));
}

TEST_CASE("original and conversational flags are mutually exclusive and imply post") {
  // Property over random events under both built-in policies.
  std::mt19937 rng(20240811);
  const CrowdPolicy policies[] = {twitter_like_policy(), quora_like_policy()};
  for (int i = 0; i < 2000; ++i) {
    const CrowdPolicy& p = policies[i % 2];
    ActivityEvent e;
    e.event_id = "e";
    e.crowd = p.crowd;
    e.author = "u";
    e.timestamp = 1 + static_cast<Timestamp>(rng() % 100000);
    e.kind = static_cast<EventKind>(rng() % 4);
    if (e.kind == EventKind::answer) e.in_reply_to = "q";
    e.repost = rng() % 4 == 0;
    e.conversational = !e.repost && rng() % 2 == 0;
    e.upvotes = static_cast<std::int64_t>(rng() % 5);
    if (rng() % 2) e.correct_label = rng() % 2 == 0;

    EventClassification c = classify_event(e, p);
    CHECK_FALSE((c.is_original_post && c.is_conversational_post));
    if (c.is_original_post || c.is_conversational_post) CHECK(c.is_post);
    if (c.is_correct_answer) CHECK(c.is_answer);
    // Deterministic: the same inputs give identical flags.
    EventClassification again = classify_event(e, p);
    CHECK(std::memcmp(&c, &again, sizeof c) == 0);
    CHECK(event_weight(e, p) >= 1.0);
  }
}
