#include "crowdstar/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace crowdstar {

namespace {

using nlohmann::json;

std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

// Case-insensitive containment of the (already lower-cased) topic label.
bool text_mentions(const std::string& lowered_text, const Topic& topic) {
  return lowered_text.find(topic.label) != std::string::npos;
}

struct ParsedLine {
  ActivityEvent event;
  std::string reject_reason;  // empty on success
};

std::optional<std::string> opt_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(std::string("bad_field:") + key);
  return it->get<std::string>();
}

ParsedLine parse_line(const std::string& line) {
  ParsedLine out;
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    out.reject_reason = "parse_error";
    return out;
  }
  try {
    ActivityEvent& e = out.event;
    for (const char* key : {"event_id", "crowd", "author", "timestamp", "kind"}) {
      if (!j.contains(key) || j.at(key).is_null()) throw Error(std::string("missing_field:") + key);
    }
    if (!j.at("event_id").is_string()) throw Error("bad_field:event_id");
    e.event_id = j.at("event_id").get<std::string>();
    if (!j.at("crowd").is_string()) throw Error("bad_field:crowd");
    e.crowd = j.at("crowd").get<std::string>();
    if (!j.at("author").is_string()) throw Error("bad_field:author");
    e.author = j.at("author").get<std::string>();
    if (!j.at("timestamp").is_number()) throw Error("bad_field:timestamp");
    e.timestamp = j.at("timestamp").get<Timestamp>();
    if (!j.at("kind").is_string()) throw Error("bad_field:kind");
    auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error("bad_field:kind");
    e.kind = *kind;
    if (auto it = j.find("topics"); it != j.end() && !it->is_null()) {
      if (!it->is_array()) throw Error("bad_field:topics");
      for (const auto& t : *it) {
        if (!t.is_string()) throw Error("bad_field:topics");
        e.topics.push_back(Topic::of(t.get<std::string>()));
      }
    }
    if (auto it = j.find("conversational"); it != j.end() && !it->is_null()) {
      if (!it->is_boolean()) throw Error("bad_field:conversational");
      e.conversational = it->get<bool>();
    }
    if (auto it = j.find("repost"); it != j.end() && !it->is_null()) {
      if (!it->is_boolean()) throw Error("bad_field:repost");
      e.repost = it->get<bool>();
    }
    if (auto it = j.find("upvotes"); it != j.end() && !it->is_null()) {
      if (!it->is_number_integer()) throw Error("bad_field:upvotes");
      e.upvotes = it->get<std::int64_t>();
    }
    if (auto it = j.find("correct_label"); it != j.end() && !it->is_null()) {
      if (!it->is_boolean()) throw Error("bad_field:correct_label");
      e.correct_label = it->get<bool>();
    }
    e.addressed_to = opt_string(j, "addressed_to");
    e.in_reply_to = opt_string(j, "in_reply_to");
    if (auto text = opt_string(j, "text")) e.text = std::move(*text);
    // Unknown fields are ignored for forward compatibility.
  } catch (const Error& err) {
    out.reject_reason = err.what();
    return out;
  }
  return out;
}

// Resolves the event's topic list per the crowd adapter.
void assign_topics(ActivityEvent& e, const CrowdPolicy& policy, const std::vector<Topic>& universe) {
  if (policy.topic_source == TopicSource::text_match) {
    e.topics.clear();
    if (e.text.empty()) return;
    const std::string lowered = lowercase(e.text);
    for (const Topic& t : universe) {
      if (text_mentions(lowered, t)) e.topics.push_back(t);
    }
    return;
  }
  // Tags are trusted; drop tags outside the universe unless it is empty.
  if (universe.empty()) return;
  std::vector<Topic> kept;
  for (Topic& t : e.topics) {
    if (std::find(universe.begin(), universe.end(), t) != universe.end()) kept.push_back(std::move(t));
  }
  e.topics = std::move(kept);
}

// Validation, crowd lookup, dedup, topic assignment and classification for
// one already-parsed event; shared by the line and the in-memory paths.
void admit(ActivityEvent event, std::string reject_reason, const IngestOptions& options,
           std::set<std::string>& seen_ids, IngestResult& result) {
  if (reject_reason.empty()) reject_reason = validate(event);
  if (reject_reason.empty()) {
    auto policy_it = options.policies.find(event.crowd);
    if (policy_it == options.policies.end()) {
      reject_reason = "unknown_crowd";
    } else if (!seen_ids.insert(event.event_id).second) {
      reject_reason = "duplicate_event_id";
    } else {
      assign_topics(event, policy_it->second, options.topic_universe);
      ClassifiedEvent ce;
      ce.cls = classify_event(event, policy_it->second);
      ce.weight = event_weight(event, policy_it->second);
      ce.event = std::move(event);
      result.report.accepted += 1;
      if (!result.report.time_range) {
        result.report.time_range = {ce.event.timestamp, ce.event.timestamp};
      } else {
        result.report.time_range->first = std::min(result.report.time_range->first, ce.event.timestamp);
        result.report.time_range->second = std::max(result.report.time_range->second, ce.event.timestamp);
      }
      result.events.push_back(std::move(ce));
      return;
    }
  }
  result.report.rejected += 1;
  result.report.reject_reasons[reject_reason] += 1;
}

void sort_admitted(IngestResult& result) {
  std::sort(result.events.begin(), result.events.end(), [](const ClassifiedEvent& a, const ClassifiedEvent& b) {
    return std::tie(a.event.timestamp, a.event.event_id) < std::tie(b.event.timestamp, b.event.event_id);
  });
}

}  // namespace

IngestResult ingest_lines(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  std::set<std::string> seen_ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;  // blank lines are not records
    ParsedLine parsed = parse_line(line);
    admit(std::move(parsed.event), std::move(parsed.reject_reason), options, seen_ids, result);
  }
  sort_admitted(result);
  return result;
}

IngestResult ingest_events(std::vector<ActivityEvent> events, const IngestOptions& options) {
  IngestResult result;
  std::set<std::string> seen_ids;
  for (ActivityEvent& event : events) {
    admit(std::move(event), {}, options, seen_ids, result);
  }
  sort_admitted(result);
  return result;
}

IngestResult ingest_files(const std::vector<std::filesystem::path>& paths, const IngestOptions& options) {
  // Concatenating the streams keeps duplicate detection global across files.
  std::stringstream merged;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open event log: " + path.string());
    merged << in.rdbuf();
    merged << '\n';
  }
  return ingest_lines(merged, options);
}

bool in_window(Timestamp ts, std::optional<Duration> window, Timestamp now) {
  if (ts > now) return false;
  if (!window) return true;
  return ts > now - *window;
}

std::vector<ClassifiedEvent> window_filter(std::span<const ClassifiedEvent> events,
                                           std::optional<Duration> window, Timestamp now) {
  if (window && *window <= 0) throw Error("window must be positive");
  std::vector<ClassifiedEvent> kept;
  for (const ClassifiedEvent& e : events) {
    if (in_window(e.event.timestamp, window, now)) kept.push_back(e);
  }
  return kept;
}

std::string to_json_line(const ActivityEvent& e) {
  json j;
  j["event_id"] = e.event_id;
  j["crowd"] = e.crowd;
  j["author"] = e.author;
  if (!e.topics.empty()) {
    json topics = json::array();
    for (const Topic& t : e.topics) topics.push_back(t.label);
    j["topics"] = std::move(topics);
  }
  j["timestamp"] = e.timestamp;
  j["kind"] = std::string(to_string(e.kind));
  j["conversational"] = e.conversational;
  j["repost"] = e.repost;
  if (e.addressed_to) j["addressed_to"] = *e.addressed_to;
  if (e.in_reply_to) j["in_reply_to"] = *e.in_reply_to;
  j["upvotes"] = e.upvotes;
  if (e.correct_label) j["correct_label"] = *e.correct_label;
  if (!e.text.empty()) j["text"] = e.text;
  return j.dump();
}

}  // namespace crowdstar
