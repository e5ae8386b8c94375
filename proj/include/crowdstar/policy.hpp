#pragma once

#include <set>

#include "crowdstar/types.hpp"

namespace crowdstar {

// How a crowd decides that an answer was correct.
struct CorrectnessRule {
  enum class Mode {
    upvote_threshold,  // correct iff upvotes >= min_upvotes
    explicit_label,    // correct iff correct_label == true; absent means not correct
  };
  Mode mode = Mode::explicit_label;
  int min_upvotes = 2;
};

enum class AskStrategy { introduce_then_ask, greet_then_ask, plain };

std::string_view to_string(AskStrategy s);
std::optional<AskStrategy> parse_ask_strategy(std::string_view text);

// Message template for asking a question in a crowd. prefix/suffix may use
// the <handle> and <topic> placeholders.
struct AskTemplate {
  AskStrategy strategy = AskStrategy::plain;
  std::string prefix;
  std::string suffix;
  std::optional<std::size_t> max_length;  // >= 40 when present
};

// Where topic membership of an event comes from.
enum class TopicSource {
  tags,        // the record's topic tags are trusted (quora-like)
  text_match,  // tagged at ingestion by case-insensitive substring match
};

// Per-crowd adapter: maps raw events onto the metric vocabulary.
struct CrowdPolicy {
  CrowdId crowd;
  CorrectnessRule correctness;
  bool upvote_weighting = false;
  TopicSource topic_source = TopicSource::tags;
  std::set<EventKind> post_kinds{EventKind::post};
  std::set<EventKind> original_kinds{EventKind::post};
  bool question_is_original = false;
  // Whether a native answer is an addressed reply (tweet-style) or a
  // standalone contribution (quora-style); drives synthesized answer events.
  bool answers_are_conversational = false;
  AskTemplate message_template;
};

// Built-in adapters mirroring the two supported crowd styles.
CrowdPolicy twitter_like_policy(CrowdId id = "twitter-like");
CrowdPolicy quora_like_policy(CrowdId id = "quora-like");

// Throws Error when a policy violates its invariants.
void validate_policy(const CrowdPolicy& policy);

struct EventClassification {
  bool is_post = false;
  bool is_original_post = false;
  bool is_conversational_post = false;
  bool is_answer = false;
  bool is_correct_answer = false;
  bool is_question = false;
};

// Pure and deterministic. Throws Error when event.crowd != policy.crowd.
EventClassification classify_event(const ActivityEvent& event, const CrowdPolicy& policy);

// 1 when upvote weighting is off, 1 + upvotes when on.
double event_weight(const ActivityEvent& event, const CrowdPolicy& policy);

// An event together with its adapter-derived classification. synthetic_ask
// marks questions injected by the router itself: they count only on the
// target side (PQ/LQ), never as author activity.
struct ClassifiedEvent {
  ActivityEvent event;
  EventClassification cls;
  double weight = 1.0;
  bool synthetic_ask = false;
};

}  // namespace crowdstar
