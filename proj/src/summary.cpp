#include "crowdstar/summary.hpp"

namespace crowdstar {

ScoreWeights ScoreWeights::normalized(double k1, double k2, double a1) {
  if (k1 < 0.0 || k2 < 0.0 || a1 < 0.0) throw Error("score weights must be non-negative");
  const double sum = k1 + k2 + a1;
  if (sum <= 0.0) throw Error("score weights must not all be zero");
  return ScoreWeights{k1 / sum, k2 / sum, a1 / sum};
}

std::optional<ScoreWeights> ScoreWeights::preset(std::string_view name) {
  if (name == "default") return preset_default();
  if (name == "survey") return preset_survey();
  return std::nullopt;
}

CrowdSummary summarize(const SkylineLevels& levels, const TopicSnapshot& snapshot, int representative_count) {
  if (representative_count < 1) throw Error("representative count must be >= 1");
  CrowdSummary out;
  out.crowd = snapshot.crowd;
  out.topic = snapshot.topic;
  out.representative_count = representative_count;

  for (const auto& level : levels.levels) {
    for (const CandidatePoint& p : level) {
      if (static_cast<int>(out.representatives.size()) >= representative_count) break;
      out.representatives.push_back(p.user);
    }
  }
  out.under_filled = static_cast<int>(out.representatives.size()) < representative_count;
  if (out.representatives.empty()) return out;

  double k1 = 0.0, k2 = 0.0, a1 = 0.0;
  for (const UserId& user : out.representatives) {
    auto it = snapshot.users.find(user.handle);
    if (it == snapshot.users.end()) throw Error("snapshot does not cover skyline user " + to_string(user));
    k1 += it->second.features.K1n;
    k2 += it->second.features.K2n;
    a1 += it->second.features.A1n;
  }
  const double n = static_cast<double>(out.representatives.size());
  out.K1 = k1 / n;
  out.K2 = k2 / n;
  out.A1 = a1 / n;
  return out;
}

double score(const CrowdSummary& summary, const ScoreWeights& weights) {
  return weights.w_K1 * summary.K1 + weights.w_K2 * summary.K2 + weights.w_A1 * summary.A1;
}

}  // namespace crowdstar
