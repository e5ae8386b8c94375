#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>

#include "crowdstar/policy.hpp"

namespace crowdstar {

struct IngestOptions {
  std::map<CrowdId, CrowdPolicy> policies;
  std::vector<Topic> topic_universe;
};

struct IngestReport {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::map<std::string, std::int64_t> reject_reasons;
  std::optional<std::pair<Timestamp, Timestamp>> time_range;  // over accepted events
};

struct IngestResult {
  std::vector<ClassifiedEvent> events;  // classified, (timestamp, event_id) ascending
  IngestReport report;
};

// Parses one JSON object per line. Malformed lines and invariant violations
// are counted per reason, never fatal; duplicate event ids keep the first
// occurrence. Unreadable files throw Error.
IngestResult ingest_lines(std::istream& in, const IngestOptions& options);
IngestResult ingest_files(const std::vector<std::filesystem::path>& paths, const IngestOptions& options);

// Same admission pipeline over already-parsed events (simulator output).
IngestResult ingest_events(std::vector<ActivityEvent> events, const IngestOptions& options);

// Half-open window (now - window, now]; nullopt window keeps everything
// up to and including now.
std::vector<ClassifiedEvent> window_filter(std::span<const ClassifiedEvent> events,
                                           std::optional<Duration> window, Timestamp now);

bool in_window(Timestamp ts, std::optional<Duration> window, Timestamp now);

// Serialization of the canonical line format (used by the simulator and by
// ingest when persisting accepted events into the state directory).
std::string to_json_line(const ActivityEvent& event);

}  // namespace crowdstar
