#pragma once

#include "crowdstar/config.hpp"
#include "crowdstar/index.hpp"
#include "crowdstar/ingest.hpp"
#include "crowdstar/router.hpp"

namespace crowdstar {

// State directory layout. Everything a run produces lives here; the event,
// plan and feedback logs are the source of truth and the snapshot files are
// derived views.
struct StatePaths {
  std::filesystem::path root;

  std::filesystem::path events() const { return root / "events.jsonl"; }
  std::filesystem::path plans() const { return root / "plans.jsonl"; }
  std::filesystem::path feedback() const { return root / "feedback.jsonl"; }
  std::filesystem::path snapshots() const { return root / "snapshots"; }
  std::filesystem::path evaluation() const { return root / "evaluation.json"; }
};

std::vector<std::string> read_lines(const std::filesystem::path& path);  // missing file -> empty
void append_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

std::vector<PlanLogRecord> load_plan_log(const std::filesystem::path& path);
std::vector<FeedbackLogRecord> load_feedback_log(const std::filesystem::path& path);

// Rebuilds the in-memory index from the logs: events, then recorded asks,
// then feedback. Pure replay; identical state for identical logs.
struct LoadedState {
  FeatureIndex index;
  std::vector<PlanLogRecord> plans;
  std::vector<FeedbackLogRecord> feedback;
  IngestReport ingest_report;
  Timestamp latest_timestamp = 0;  // max over all logs, 0 when empty
};

LoadedState load_state(const AppConfig& cfg, const StatePaths& paths);

std::string snapshot_file_name(const CrowdId& crowd, const Topic& topic);
void write_snapshot(const std::filesystem::path& path, const TopicSnapshot& snapshot);
TopicSnapshot read_snapshot(const std::filesystem::path& path);

}  // namespace crowdstar
