#pragma once

#include <functional>

#include "crowdstar/index.hpp"

namespace crowdstar {

struct CandidatePoint {
  UserId user;
  std::vector<double> coords;  // normalized, max-is-better, 2..4 axes
};

// Ordered Pareto layers for one (crowd, topic). Points inside a level are in
// stream order: nearest to the ideal corner first.
struct SkylineLevels {
  std::vector<std::vector<CandidatePoint>> levels;  // levels[0] = outer skyline
  std::vector<UserId> pruned;
  std::vector<std::string> dims;  // axis names, e.g. {"K1n","K2n","A1n","A2n"}

  std::size_t total_points() const;
};

// Max-is-better Pareto dominance: a >= b on all axes, a > b on at least one.
// Throws Error on dimension mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);
bool dominates(const CandidatePoint& a, const CandidatePoint& b);

// Low-value region cut: either absolute per-axis minimums or a percentile
// evaluated per axis on the candidate population (default 10th percentile).
struct PruneThresholds {
  std::optional<std::vector<double>> absolute;  // size 1 broadcasts to all axes
  double percentile = 10.0;

  static PruneThresholds at_percentile(double p);
  static PruneThresholds absolute_min(std::vector<double> per_axis);
  static PruneThresholds disabled();

  // Effective per-axis minimums for a population of the given dimension.
  std::vector<double> resolve(std::span<const CandidatePoint> population, std::size_t dims) const;
};

// A point is pruned iff it falls below the threshold on ANY axis; values
// equal to the threshold are kept.
std::pair<std::vector<CandidatePoint>, std::vector<CandidatePoint>> low_value_prune(
    std::vector<CandidatePoint> points, const PruneThresholds& thresholds);

// Layered skyline via repeated nearest-neighbor extraction: the remaining
// point closest to the ideal corner (1,...,1) is always non-dominated, so it
// is emitted immediately and everything it dominates is deferred to the next
// level. Emission order within a level is nearest-first, ties broken by
// handle. Consumers may start acting on early emissions; the optional sink
// observes (point, level) in stream order.
SkylineLevels skyline_stream(std::vector<CandidatePoint> points, int max_levels,
                             const std::function<void(const CandidatePoint&, int)>& sink = {});

// Remaining candidate-set size per iteration of the outer-skyline pass,
// starting at the input size and ending at 0.
std::vector<std::size_t> candidate_count_trace(std::vector<CandidatePoint> points);

enum class AxisMode { four, two };

std::vector<std::string> axis_names(AxisMode mode);

// Projects a snapshot onto skyline coordinates. Two-axis mode collapses the
// model to K = mean(K1n, K2n), A = mean(A1n, A2n).
std::vector<CandidatePoint> candidate_points(const TopicSnapshot& snapshot, AxisMode mode);

// prune + layer in one step; fills dims and pruned users.
SkylineLevels build_skyline(const TopicSnapshot& snapshot, AxisMode mode,
                            const PruneThresholds& thresholds, int max_levels,
                            const std::function<void(const CandidatePoint&, int)>& sink = {});

}  // namespace crowdstar
