#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crowdstar {

// Seconds since the Unix epoch (UTC). The artifact never reads the wall
// clock; every subcommand takes the evaluation instant explicitly.
using Timestamp = std::int64_t;
using Duration = std::int64_t;  // seconds

constexpr Duration kSecondsPerHour = 3600;
constexpr Duration kSecondsPerDay = 86400;

constexpr Duration hours(std::int64_t h) { return h * kSecondsPerHour; }
constexpr Duration days(std::int64_t d) { return d * kSecondsPerDay; }

inline double to_hours(Duration d) { return static_cast<double>(d) / 3600.0; }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Short identifier of a routing target community, e.g. "twitter-like".
using CrowdId = std::string;

// Normalized topic label: trimmed and lower-cased. Construct via Topic::of
// so map keys and substring matching agree on the canonical form.
struct Topic {
  std::string label;

  static Topic of(std::string_view raw);

  bool empty() const { return label.empty(); }
  auto operator<=>(const Topic&) const = default;
};

struct UserId {
  CrowdId crowd;
  std::string handle;

  auto operator<=>(const UserId&) const = default;
};

// "crowd:handle" form used in CLI arguments and log records.
std::string to_string(const UserId& user);
UserId parse_user_id(std::string_view text);

enum class EventKind { post, answer, question, blog };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

// One time-stamped user action in a crowd; the raw input of everything.
struct ActivityEvent {
  std::string event_id;
  CrowdId crowd;
  std::string author;  // handle; the author's crowd is always `crowd`
  std::vector<Topic> topics;
  Timestamp timestamp = 0;
  EventKind kind = EventKind::post;
  bool conversational = false;  // addressed to another user
  bool repost = false;          // retweet-like
  std::optional<std::string> addressed_to;  // handle in the same crowd
  std::optional<std::string> in_reply_to;   // event id being answered
  std::int64_t upvotes = 0;
  std::optional<bool> correct_label;  // external judgment
  std::string text;  // raw body; consumed by text-matching topic adapters

  UserId author_id() const { return UserId{crowd, author}; }
};

// Empty string when the event satisfies all invariants, otherwise a short
// machine-readable reason (used as a reject-reason key by ingestion).
std::string validate(const ActivityEvent& event);

// An answer observed for a routed question, solicited or not.
struct FeedbackEvent {
  std::string question_id;
  UserId responder;
  Timestamp answered_at = 0;
  std::optional<bool> correct;
};

}  // namespace crowdstar
