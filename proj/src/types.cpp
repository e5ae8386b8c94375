#include "crowdstar/types.hpp"

#include <algorithm>
#include <cctype>

namespace crowdstar {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Topic Topic::of(std::string_view raw) {
  Topic t;
  std::string_view trimmed = trim(raw);
  t.label.reserve(trimmed.size());
  for (char c : trimmed) {
    t.label.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return t;
}

std::string to_string(const UserId& user) { return user.crowd + ":" + user.handle; }

UserId parse_user_id(std::string_view text) {
  auto pos = text.find(':');
  if (pos == std::string_view::npos || pos == 0 || pos + 1 == text.size()) {
    throw Error("user id must have the form <crowd>:<handle>, got '" + std::string(text) + "'");
  }
  return UserId{std::string(text.substr(0, pos)), std::string(text.substr(pos + 1))};
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::post: return "post";
    case EventKind::answer: return "answer";
    case EventKind::question: return "question";
    case EventKind::blog: return "blog";
  }
  return "post";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
  if (text == "post") return EventKind::post;
  if (text == "answer") return EventKind::answer;
  if (text == "question") return EventKind::question;
  if (text == "blog") return EventKind::blog;
  return std::nullopt;
}

std::string validate(const ActivityEvent& e) {
  if (e.event_id.empty()) return "empty_event_id";
  if (e.crowd.empty()) return "empty_crowd";
  if (e.author.empty()) return "empty_author";
  if (e.timestamp <= 0) return "bad_timestamp";
  if (e.upvotes < 0) return "negative_upvotes";
  if (e.kind == EventKind::answer && !e.in_reply_to.has_value()) return "answer_missing_reply_ref";
  if (e.repost && e.conversational) return "conversational_repost";
  for (const Topic& t : e.topics) {
    if (t.empty()) return "empty_topic";
  }
  if (e.addressed_to && e.addressed_to->empty()) return "empty_addressed_to";
  return {};
}

}  // namespace crowdstar
