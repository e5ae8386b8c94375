#pragma once

#include <map>
#include <set>

#include "crowdstar/features.hpp"

namespace crowdstar {

struct UserFeatures {
  WindowedCounters counters;
  FeatureVector features;
};

// Consistent per-(crowd, topic) view used by the skyline builder, the crowd
// summarizer and the router. Knowledge values (K1, K2) are as of the last
// daily tick; availability (A1, A2) is as of computed_at.
struct TopicSnapshot {
  CrowdId crowd;
  Topic topic;
  Timestamp computed_at = 0;
  Timestamp knowledge_as_of = 0;
  SmoothingParams smoothing_qualification;
  SmoothingParams smoothing_interest;
  SmoothingParams smoothing_responsiveness;
  std::map<std::string, UserFeatures> users;  // keyed by handle
  bool stale = false;  // availability changed after this snapshot's predecessor
};

// Topic-partitioned feature store over classified activity events plus the
// Q&A traffic generated by routing itself. Knowledge features refresh on
// daily ticks; availability refreshes immediately on ask/answer events.
class FeatureIndex {
 public:
  FeatureIndex(IndexConfig cfg, std::map<CrowdId, CrowdPolicy> policies);

  const IndexConfig& config() const { return cfg_; }
  const std::map<CrowdId, CrowdPolicy>& policies() const { return policies_; }

  // Ingested log events; duplicates by event_id are dropped (first wins).
  void add_events(std::span<const ClassifiedEvent> events);

  // Recomputes qualification/interest for every touched (crowd, topic).
  void daily_tick(Timestamp now);

  // Registers a routed ask: PQ/LQ move immediately and the topic skyline is
  // marked stale. question_text is kept for reporting.
  void record_ask(const std::string& question_id, const std::string& question_text,
                  const UserId& target, const Topic& topic, Timestamp issued_at);

  struct FeedbackOutcome {
    bool accepted = false;
    bool solicited = false;
    bool duplicate = false;
    std::string reason;  // set when rejected
  };

  // Applies an observed answer for a routed question. Unknown question ids
  // are rejected; repeated answers by the same user to the same question are
  // ignored (AQ is deduplicated per (user, question)).
  FeedbackOutcome apply_feedback(const FeedbackEvent& feedback);

  // Fresh consistent view; fires an implicit first daily tick when none has
  // happened yet, and clears the topic's stale flag.
  TopicSnapshot snapshot(const CrowdId& crowd, const Topic& topic, Timestamp now);

  bool is_stale(const CrowdId& crowd, const Topic& topic) const;

  // Every (crowd, topic) with at least one event, sorted.
  std::vector<std::pair<CrowdId, Topic>> topics() const;

  struct QuestionRecord {
    std::string question_id;
    Topic topic;
    std::string text;
    std::map<UserId, Timestamp> asks;      // issued_at per asked user
    std::set<UserId> responders;           // dedup of feedback per user
  };

  const std::map<std::string, QuestionRecord>& questions() const { return questions_; }

 private:
  struct TopicKey {
    CrowdId crowd;
    Topic topic;
    auto operator<=>(const TopicKey&) const = default;
  };

  struct KnowledgeCache {
    Timestamp tick_at = 0;
    SmoothingParams smoothing_qualification;
    SmoothingParams smoothing_interest;
    std::map<std::string, MetricCounters> cells_qualification;
    std::map<std::string, MetricCounters> cells_interest;
    std::map<std::string, std::pair<double, double>> raw;  // handle -> (K1, K2)
  };

  struct TopicState {
    std::vector<ClassifiedEvent> events;  // events touching this (crowd, topic)
    std::optional<KnowledgeCache> knowledge;
    bool stale = false;
  };

  void insert_event(ClassifiedEvent event);
  void refresh_knowledge(const TopicKey& key, TopicState& state, Timestamp now);
  std::int64_t posts_in_window(const CrowdId& crowd, const std::string& user,
                               std::optional<Duration> window, Timestamp now) const;
  std::map<std::string, MetricCounters> topic_cells(const TopicState& state,
                                                    std::optional<Duration> window, Timestamp now) const;
  const CrowdPolicy& policy_for(const CrowdId& crowd) const;

  IndexConfig cfg_;
  std::map<CrowdId, CrowdPolicy> policies_;
  std::map<TopicKey, TopicState> topics_;
  std::map<std::pair<CrowdId, std::string>, std::vector<Timestamp>> post_times_;  // per (crowd, user)
  std::set<std::string> seen_event_ids_;
  std::map<std::string, QuestionRecord> questions_;
};

// Free-function form of the feedback path.
FeatureIndex::FeedbackOutcome apply_feedback(FeatureIndex& index, const FeedbackEvent& feedback);

}  // namespace crowdstar
