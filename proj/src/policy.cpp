#include "crowdstar/policy.hpp"

namespace crowdstar {

std::string_view to_string(AskStrategy s) {
  switch (s) {
    case AskStrategy::introduce_then_ask: return "introduce_then_ask";
    case AskStrategy::greet_then_ask: return "greet_then_ask";
    case AskStrategy::plain: return "plain";
  }
  return "plain";
}

std::optional<AskStrategy> parse_ask_strategy(std::string_view text) {
  if (text == "introduce_then_ask") return AskStrategy::introduce_then_ask;
  if (text == "greet_then_ask") return AskStrategy::greet_then_ask;
  if (text == "plain") return AskStrategy::plain;
  return std::nullopt;
}

CrowdPolicy twitter_like_policy(CrowdId id) {
  CrowdPolicy p;
  p.crowd = std::move(id);
  p.correctness = {CorrectnessRule::Mode::explicit_label, 2};
  p.upvote_weighting = false;
  p.topic_source = TopicSource::text_match;
  // Every tweet is a post; original means non-conversational and not a
  // retweet, regardless of kind.
  p.post_kinds = {EventKind::post, EventKind::answer, EventKind::question};
  p.original_kinds = {EventKind::post, EventKind::answer, EventKind::question};
  p.question_is_original = true;
  p.answers_are_conversational = true;
  p.message_template.strategy = AskStrategy::greet_then_ask;
  p.message_template.prefix = "Hi @<handle>!";
  p.message_template.suffix = "#ask #<topic>";
  p.message_template.max_length = 140;
  return p;
}

CrowdPolicy quora_like_policy(CrowdId id) {
  CrowdPolicy p;
  p.crowd = std::move(id);
  p.correctness = {CorrectnessRule::Mode::upvote_threshold, 2};
  p.upvote_weighting = true;
  p.topic_source = TopicSource::tags;
  // kind=post models comments: collected activity, but never original
  // evidence. Questions carry no qualification evidence either.
  p.post_kinds = {EventKind::post, EventKind::answer, EventKind::question, EventKind::blog};
  p.original_kinds = {EventKind::answer, EventKind::blog};
  p.question_is_original = false;
  p.answers_are_conversational = false;
  p.message_template.strategy = AskStrategy::plain;
  return p;
}

void validate_policy(const CrowdPolicy& p) {
  if (p.crowd.empty()) throw Error("crowd policy has empty crowd id");
  if (p.correctness.mode == CorrectnessRule::Mode::upvote_threshold && p.correctness.min_upvotes < 1) {
    throw Error("upvote threshold must be >= 1 for crowd '" + p.crowd + "'");
  }
  if (p.message_template.max_length && *p.message_template.max_length < 40) {
    throw Error("ask template max_length must be >= 40 for crowd '" + p.crowd + "'");
  }
  if (p.post_kinds.empty()) throw Error("crowd '" + p.crowd + "' declares no post kinds");
}

EventClassification classify_event(const ActivityEvent& e, const CrowdPolicy& p) {
  if (e.crowd != p.crowd) {
    throw Error("policy mismatch: event crowd '" + e.crowd + "' vs policy crowd '" + p.crowd + "'");
  }
  EventClassification c;
  c.is_post = p.post_kinds.contains(e.kind);
  c.is_question = e.kind == EventKind::question;
  c.is_answer = e.kind == EventKind::answer;
  c.is_conversational_post = c.is_post && e.conversational && !e.repost;
  c.is_original_post = c.is_post && !e.conversational && !e.repost &&
                       p.original_kinds.contains(e.kind) &&
                       (p.question_is_original || e.kind != EventKind::question);
  if (c.is_answer) {
    switch (p.correctness.mode) {
      case CorrectnessRule::Mode::upvote_threshold:
        c.is_correct_answer = e.upvotes >= p.correctness.min_upvotes;
        break;
      case CorrectnessRule::Mode::explicit_label:
        c.is_correct_answer = e.correct_label.value_or(false);
        break;
    }
  }
  return c;
}

double event_weight(const ActivityEvent& e, const CrowdPolicy& p) {
  if (!p.upvote_weighting) return 1.0;
  return 1.0 + static_cast<double>(e.upvotes);
}

}  // namespace crowdstar
