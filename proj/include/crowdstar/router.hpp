#pragma once

#include "crowdstar/summary.hpp"

namespace crowdstar {

struct QuestionTask {
  std::string question_id;
  std::string text;
  Topic topic;
  int budget = 1;
};

struct Ask {
  UserId user;
  std::string message;
  Timestamp issued_at = 0;
};

enum class SplitMode { equal_split, proportional };

std::string_view to_string(SplitMode mode);

struct RoutingPlan {
  std::string question_id;
  Topic topic;
  SplitMode mode = SplitMode::equal_split;
  std::map<CrowdId, double> scores;
  std::map<CrowdId, int> allocations;  // sums to the budget
  std::vector<Ask> asks;               // at most allocation per crowd; no user twice
  std::map<CrowdId, int> shortfall;    // allocation minus issued asks
};

// Across-crowd budget split. Two crowds within 25% relative difference
// (|s1-s2|/max) share equally, the odd unit going to the higher score (ties
// by crowd id); otherwise proportional with largest-remainder rounding.
// More than two crowds generalize via (max-min)/max. Throws Error when all
// scores are zero.
std::map<CrowdId, int> split_budget(const std::map<CrowdId, double>& scores, int budget);

struct BudgetSplit {
  SplitMode mode;
  std::map<CrowdId, int> allocations;
};

BudgetSplit split_budget_with_mode(const std::map<CrowdId, double>& scores, int budget);

// Middle-out order within a crowd: candidates still inside the activity
// gate (raw A2 hours < gate) are dropped, the rest are sorted ascending by
// the availability axis per level, and traversal starts at floor(n/2),
// alternating mid-1, mid+1, mid-2, ... Levels are consumed in order until
// the allocation is filled.
std::vector<UserId> order_candidates(const SkylineLevels& levels, int allocation,
                                     const TopicSnapshot& snapshot, double activity_gate_hours);

// Thrown when a composed message exceeds the template's maximum length.
struct MessageTooLong : Error {
  MessageTooLong(std::size_t overflow_chars, std::size_t max_length);
  std::size_t overflow = 0;
};

// Fills the crowd's ask template; placeholders <handle> and <topic> are
// substituted in the prefix/suffix. Messages are never truncated.
std::string compose_ask(const QuestionTask& task, const UserId& user, const CrowdPolicy& policy);

struct RouterConfig {
  ScoreWeights weights;
  int representative_count = 50;
  double activity_gate_hours = 24.0;
  PruneThresholds prune = PruneThresholds::at_percentile(10.0);
  AxisMode axes = AxisMode::four;
  int max_levels = 3;
};

// Two-stage routing: crowd scores -> budget split -> per-crowd middle-out
// candidate order -> composed asks. Pure over the given snapshots; call
// issue_plan to record the asks in the index.
RoutingPlan route(const QuestionTask& task, const std::map<CrowdId, TopicSnapshot>& snapshots,
                  const std::map<CrowdId, CrowdPolicy>& policies, const RouterConfig& cfg,
                  Timestamp now);

// Records a routing_event per ask (PQ/LQ move, skylines marked stale).
void issue_plan(FeatureIndex& index, const QuestionTask& task, const RoutingPlan& plan);

// Persisted log rows (JSON lines).
struct PlanLogRecord {
  std::string question_id;
  Topic topic;
  std::string text;
  CrowdId crowd;
  std::string user;
  Timestamp issued_at = 0;
  std::string message;
  int budget = 0;
  std::string mode;
};

struct FeedbackLogRecord {
  std::string question_id;
  CrowdId crowd;
  std::string responder;
  Timestamp answered_at = 0;
  std::optional<bool> correct;
  bool solicited = false;
};

std::vector<PlanLogRecord> plan_records(const QuestionTask& task, const RoutingPlan& plan);

std::string to_json_line(const PlanLogRecord& record);
std::string to_json_line(const FeedbackLogRecord& record);
PlanLogRecord parse_plan_record(const std::string& line);
FeedbackLogRecord parse_feedback_record(const std::string& line);

}  // namespace crowdstar
