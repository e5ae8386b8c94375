#include "crowdstar/skyline.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace crowdstar {

std::size_t SkylineLevels::total_points() const {
  std::size_t n = 0;
  for (const auto& level : levels) n += level.size();
  return n;
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("dominance over mismatched dimensions");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

bool dominates(const CandidatePoint& a, const CandidatePoint& b) {
  return dominates(std::span<const double>(a.coords), std::span<const double>(b.coords));
}

PruneThresholds PruneThresholds::at_percentile(double p) {
  if (p < 0.0 || p > 100.0) throw Error("percentile must be in [0, 100]");
  PruneThresholds t;
  t.percentile = p;
  return t;
}

PruneThresholds PruneThresholds::absolute_min(std::vector<double> per_axis) {
  PruneThresholds t;
  t.absolute = std::move(per_axis);
  return t;
}

PruneThresholds PruneThresholds::disabled() { return absolute_min({0.0}); }

std::vector<double> PruneThresholds::resolve(std::span<const CandidatePoint> population,
                                             std::size_t dims) const {
  if (absolute) {
    if (absolute->size() == 1) return std::vector<double>(dims, absolute->front());
    if (absolute->size() != dims) throw Error("prune thresholds do not match axis count");
    return *absolute;
  }
  std::vector<double> thresholds(dims, 0.0);
  if (population.empty()) return thresholds;
  // Nearest-rank percentile per axis.
  std::vector<double> axis(population.size());
  for (std::size_t d = 0; d < dims; ++d) {
    for (std::size_t i = 0; i < population.size(); ++i) axis[i] = population[i].coords[d];
    std::sort(axis.begin(), axis.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(percentile / 100.0 * static_cast<double>(axis.size())));
    thresholds[d] = axis[rank == 0 ? 0 : rank - 1];
  }
  return thresholds;
}

std::pair<std::vector<CandidatePoint>, std::vector<CandidatePoint>> low_value_prune(
    std::vector<CandidatePoint> points, const PruneThresholds& thresholds) {
  std::pair<std::vector<CandidatePoint>, std::vector<CandidatePoint>> out;
  if (points.empty()) return out;
  const std::size_t dims = points.front().coords.size();
  const std::vector<double> min_per_axis = thresholds.resolve(points, dims);
  for (CandidatePoint& p : points) {
    if (p.coords.size() != dims) throw Error("mixed dimensions in candidate set");
    bool below = false;
    for (std::size_t d = 0; d < dims; ++d) {
      if (p.coords[d] < min_per_axis[d]) {
        below = true;
        break;
      }
    }
    (below ? out.second : out.first).push_back(std::move(p));
  }
  return out;
}

namespace {

// Squared distance to the ideal corner. Normalized populations have the
// corner at (1,...,1); for raw coordinate sets the componentwise maximum
// plays that role, which keeps every gap non-negative (the property that
// makes the nearest remaining point provably non-dominated).
double distance_to_corner(const CandidatePoint& p, const std::vector<double>& corner) {
  double sum = 0.0;
  for (std::size_t d = 0; d < p.coords.size(); ++d) {
    const double gap = corner[d] - p.coords[d];
    sum += gap * gap;
  }
  return sum;
}

std::vector<double> ideal_corner(const std::vector<CandidatePoint>& points) {
  if (points.empty()) return {};
  std::vector<double> corner = points.front().coords;
  for (const CandidatePoint& p : points) {
    for (std::size_t d = 0; d < corner.size(); ++d) corner[d] = std::max(corner[d], p.coords[d]);
  }
  return corner;
}

struct Working {
  CandidatePoint point;
  double dist;
};

void validate_points(const std::vector<CandidatePoint>& points) {
  if (points.empty()) return;
  const std::size_t dims = points.front().coords.size();
  if (dims < 2 || dims > 4) throw Error("skyline expects 2..4 axes");
  std::set<UserId> seen;
  for (const CandidatePoint& p : points) {
    if (p.coords.size() != dims) throw Error("mixed dimensions in candidate set");
    for (double c : p.coords) {
      if (!std::isfinite(c)) throw Error("non-finite coordinate for user " + to_string(p.user));
    }
    if (!seen.insert(p.user).second) throw Error("duplicate user in candidate set: " + to_string(p.user));
  }
}

// One nearest-neighbor pass: emits the level in stream order, moves
// dominated points to `carry`, optionally records the remaining-set trace.
std::vector<CandidatePoint> extract_level(std::vector<Working>& pool,
                                          std::vector<CandidatePoint>& carry,
                                          std::vector<std::size_t>* trace) {
  std::vector<CandidatePoint> level;
  if (trace) trace->push_back(pool.size());
  while (!pool.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pool.size(); ++i) {
      const auto& a = pool[i];
      const auto& b = pool[best];
      if (a.dist < b.dist || (a.dist == b.dist && a.point.user < b.point.user)) best = i;
    }
    CandidatePoint chosen = std::move(pool[best].point);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
    std::vector<Working> rest;
    rest.reserve(pool.size());
    for (Working& w : pool) {
      if (dominates(chosen, w.point)) {
        carry.push_back(std::move(w.point));
      } else {
        rest.push_back(std::move(w));
      }
    }
    pool = std::move(rest);
    level.push_back(std::move(chosen));
    if (trace) trace->push_back(pool.size());
  }
  return level;
}

std::vector<Working> make_pool(std::vector<CandidatePoint> points, const std::vector<double>& corner) {
  std::vector<Working> pool;
  pool.reserve(points.size());
  for (CandidatePoint& p : points) {
    double d = distance_to_corner(p, corner);
    pool.push_back(Working{std::move(p), d});
  }
  return pool;
}

}  // namespace

SkylineLevels skyline_stream(std::vector<CandidatePoint> points, int max_levels,
                             const std::function<void(const CandidatePoint&, int)>& sink) {
  if (max_levels < 1) throw Error("max_levels must be >= 1");
  validate_points(points);
  SkylineLevels out;
  const std::vector<double> corner = ideal_corner(points);
  std::vector<CandidatePoint> remaining = std::move(points);
  for (int level = 1; level <= max_levels && !remaining.empty(); ++level) {
    std::vector<Working> pool = make_pool(std::move(remaining), corner);
    std::vector<CandidatePoint> carry;
    std::vector<CandidatePoint> emitted = extract_level(pool, carry, nullptr);
    if (sink) {
      for (const CandidatePoint& p : emitted) sink(p, level);
    }
    out.levels.push_back(std::move(emitted));
    remaining = std::move(carry);
  }
  return out;
}

std::vector<std::size_t> candidate_count_trace(std::vector<CandidatePoint> points) {
  validate_points(points);
  std::vector<std::size_t> trace;
  const std::vector<double> corner = ideal_corner(points);
  std::vector<Working> pool = make_pool(std::move(points), corner);
  std::vector<CandidatePoint> carry;
  extract_level(pool, carry, &trace);
  return trace;
}

std::vector<std::string> axis_names(AxisMode mode) {
  switch (mode) {
    case AxisMode::four: return {"K1n", "K2n", "A1n", "A2n"};
    case AxisMode::two: return {"K", "A"};
  }
  return {};
}

std::vector<CandidatePoint> candidate_points(const TopicSnapshot& snapshot, AxisMode mode) {
  std::vector<CandidatePoint> points;
  points.reserve(snapshot.users.size());
  for (const auto& [handle, uf] : snapshot.users) {
    const FeatureVector& f = uf.features;
    CandidatePoint p;
    p.user = UserId{snapshot.crowd, handle};
    if (mode == AxisMode::four) {
      p.coords = {f.K1n, f.K2n, f.A1n, f.A2n};
    } else {
      p.coords = {(f.K1n + f.K2n) / 2.0, (f.A1n + f.A2n) / 2.0};
    }
    points.push_back(std::move(p));
  }
  return points;
}

SkylineLevels build_skyline(const TopicSnapshot& snapshot, AxisMode mode,
                            const PruneThresholds& thresholds, int max_levels,
                            const std::function<void(const CandidatePoint&, int)>& sink) {
  auto [kept, pruned] = low_value_prune(candidate_points(snapshot, mode), thresholds);
  SkylineLevels out = skyline_stream(std::move(kept), max_levels, sink);
  out.dims = axis_names(mode);
  out.pruned.reserve(pruned.size());
  for (CandidatePoint& p : pruned) out.pruned.push_back(std::move(p.user));
  return out;
}

}  // namespace crowdstar
