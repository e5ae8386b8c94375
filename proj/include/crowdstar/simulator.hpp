#pragma once

#include "crowdstar/router.hpp"
#include "crowdstar/rng.hpp"

namespace crowdstar::sim {

// All simulated time starts here; the simulator never reads the wall clock.
constexpr Timestamp kSimEpoch = 1'700'000'000;

enum class Archetype {
  focused_expert,
  broad_expert,
  spammer,
  low_frequency,
  broadcast_account,
  casual,
};

std::string_view to_string(Archetype a);
std::optional<Archetype> parse_archetype(std::string_view text);

struct LatencySpec {
  double scale_hours = 4.0;  // median of the log-normal
  double sigma = 0.6;
};

struct ArchetypeSpec {
  Archetype name = Archetype::casual;
  double post_rate = 1.0;  // events per day
  double on_topic_fraction = 0.5;
  double answer_prob = 0.5;
  double answer_correct_prob = 0.5;
  LatencySpec response_latency;
  double conversational_fraction = 0.3;
  double repost_fraction = 0.0;
};

std::map<Archetype, ArchetypeSpec> default_archetypes();

struct CrowdMix {
  CrowdId crowd;
  std::vector<std::pair<Archetype, int>> counts;
  double unsolicited_rate = 0.0;  // extra non-targeted answers per question
  double ask_fraction = 0.1;      // share of posts that are directed questions
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::vector<CrowdMix> crowds;
  std::vector<Topic> topics;
  int horizon_days = 30;
  Duration clock_step = 1800;
  std::map<Archetype, ArchetypeSpec> archetypes = default_archetypes();

  Timestamp horizon_end() const { return kSimEpoch + days(horizon_days); }
};

// Two-crowd setup used by tests and as the CLI default.
SimConfig default_sim_config();

struct RosterEntry {
  UserId user;
  Archetype archetype;
  Topic primary_topic;
};

// Fully determined by the config; generate() and respond() derive the same
// population from it.
std::vector<RosterEntry> roster(const SimConfig& cfg);

// Deterministic synthetic activity log, time-sorted, one entry per event.
std::vector<ActivityEvent> generate(const SimConfig& cfg);

// Simulated reaction to an issued plan: each asked user answers with its
// archetype's probability after a log-normal latency; crowds with an
// unsolicited rate inject extra answers from non-targeted members. Decisions
// are keyed on (seed, question, user), independent of plan order.
std::vector<FeedbackEvent> respond(const RoutingPlan& plan, const SimConfig& cfg, Timestamp now);

// --- experiment driver -----------------------------------------------------

enum class RoutingStrategy { skyline, uniform_random };

struct ExperimentConfig {
  SimConfig sim;
  IndexConfig index;
  RouterConfig router;
  std::map<CrowdId, CrowdPolicy> policies;
  int questions = 100;
  int budget = 4;
  Duration question_interval = 1800;
  std::vector<Topic> question_topics;  // defaults to sim.topics
};

// Built-in policies keyed by the crowd ids of the sim config (twitter-like
// semantics for ids containing "twitter", quora-like otherwise).
ExperimentConfig default_experiment_config();

struct ExperimentResult {
  std::vector<PlanLogRecord> plans;
  std::vector<FeedbackLogRecord> feedback;
  std::map<CrowdId, int> shortfall;
  int questions_routed = 0;
};

// Generates a crowd history, indexes it, then routes a stream of questions
// with simulated answers fed back into the index under a stepped clock
// (daily knowledge ticks, immediate availability updates).
ExperimentResult run_experiment(const ExperimentConfig& cfg, RoutingStrategy strategy);

// --- evaluation ------------------------------------------------------------

struct CrowdRunMetrics {
  std::int64_t asks = 0;
  std::int64_t solicited_answers = 0;
  std::int64_t unsolicited_answers = 0;
  std::int64_t questions_asked = 0;     // distinct questions routed to the crowd
  std::int64_t questions_answered = 0;  // distinct questions with any answer
  double latency_hours_sum = 0.0;       // over solicited answers
  std::int64_t correct_answers = 0;     // correct == true, any answer

  double answer_rate() const;
  double answered_fraction() const;
  double mean_latency_hours() const;
  double correct_rate() const;
};

struct RunMetrics {
  std::map<CrowdId, CrowdRunMetrics> per_crowd;
  CrowdRunMetrics overall;
};

RunMetrics measure_run(std::span<const PlanLogRecord> plans,
                       std::span<const FeedbackLogRecord> feedback);

struct EvaluationReport {
  RunMetrics routed;
  std::optional<RunMetrics> baseline;

  std::string to_text() const;
  std::string to_json() const;
};

EvaluationReport evaluate(std::span<const PlanLogRecord> plans,
                          std::span<const FeedbackLogRecord> feedback,
                          std::span<const PlanLogRecord> baseline_plans = {},
                          std::span<const FeedbackLogRecord> baseline_feedback = {});

}  // namespace crowdstar::sim
