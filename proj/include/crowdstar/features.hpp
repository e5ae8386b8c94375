#pragma once

#include <map>
#include <span>

#include "crowdstar/policy.hpp"

namespace crowdstar {

// Per (crowd, user, topic) tallies over one window. CA and OP are weighted
// sums (upvote weighting applies to content quality, never to the activity
// denominators A and P); everything else is a plain count.
struct MetricCounters {
  std::int64_t A = 0;       // answers on topic
  double CA = 0.0;          // correct-answer weight sum
  std::int64_t P = 0;       // posts on topic
  std::int64_t P_all = 0;   // posts across all topics, same crowd/user
  double OP = 0.0;          // original-post weight sum
  std::int64_t CP = 0;      // conversational posts on topic
  std::int64_t PQ = 0;      // questions presented (explicitly directed)
  std::int64_t AQ = 0;      // questions answered
  double RT_sum_hours = 0.0;
  std::int64_t RT_n = 0;
  std::optional<Timestamp> LQ;  // last question presented
  std::optional<Timestamp> LA;  // last answer provided
};

// Population means of the unsmoothed ratios over a (crowd, topic); ratios
// with a zero denominator are skipped when averaging. N is the number of
// users with at least one event on the (crowd, topic) in the window.
struct SmoothingParams {
  double mu_ca = 0.0;   // mean CA/A
  double mu_op = 0.0;   // mean OP/P
  double mu_int = 0.0;  // mean P/P_all
  double mu_aq = 0.0;   // mean AQ/PQ
  double mu_cp = 0.0;   // mean CP/P
  std::int64_t N = 0;
};

SmoothingParams compute_smoothing(const std::map<std::string, MetricCounters>& topic_cells);

struct FeatureVector {
  double K1 = 0.0, K2 = 0.0, A1 = 0.0, A2 = 0.0;
  double K1n = 0.0, K2n = 0.0, A1n = 0.0, A2n = 0.0;
  Timestamp computed_at = 0;
};

// Window sizes per feature; qualification may be unbounded.
struct FeatureWindows {
  std::optional<Duration> qualification;  // nullopt = forever
  Duration interest = days(30);
  Duration responsiveness = days(30);
  Duration activity = days(7);
};

struct IndexConfig {
  FeatureWindows windows{};
  double rt_floor_hours = 0.1;
  double a2_cap_hours = 24.0 * 7;  // defaults to the activity window

  void validate() const;
};

// K1 = CA/A + OP/P with the 0/0 -> 0 convention per term.
double qualification_raw(const MetricCounters& m);

// K1' = (CA + mu_ca)/(A + N) + (OP + mu_op)/(P + N)
double qualification(const MetricCounters& m, const SmoothingParams& s);

// K2' = (P + mu_int)/(P_all + N)
double interest(const MetricCounters& m, const SmoothingParams& s);

// A1 = (AQ + mu_aq)/(PQ + N) + (CP + mu_cp)/(P + N) + rt_term where
// rt_term = 1/max(RT_mean, rt_floor) when any response exists, else 0.
double responsiveness(const MetricCounters& m, const SmoothingParams& s, const IndexConfig& cfg);

// A2 = min(now - max(LQ, LA), a2_cap) in hours; a2_cap when no Q&A history.
// Larger means longer idle, i.e. safer to contact.
double activity_hours(const MetricCounters& m, Timestamp now, const IndexConfig& cfg);

struct CellKey {
  CrowdId crowd;
  std::string user;  // handle
  Topic topic;

  auto operator<=>(const CellKey&) const = default;
};

// Tallies counters over one half-open window (now - window, now]. The full
// stream is taken (not pre-filtered) so answer->question latency pairing can
// see questions that fell out of the window.
std::map<CellKey, MetricCounters> accumulate(std::span<const ClassifiedEvent> events,
                                             std::optional<Duration> window, Timestamp now);

// One counter set per feature window.
struct WindowedCounters {
  MetricCounters qualification;
  MetricCounters interest;
  MetricCounters responsiveness;
  MetricCounters activity;
};

std::map<CellKey, WindowedCounters> accumulate(std::span<const ClassifiedEvent> events,
                                               const IndexConfig& cfg, Timestamp now);

// Min-max scaling per axis over the population of one (crowd, topic); a
// degenerate axis (max == min) maps everyone to 0.5.
void normalize(std::map<std::string, FeatureVector>& features);

}  // namespace crowdstar
