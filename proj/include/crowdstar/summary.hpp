#pragma once

#include "crowdstar/skyline.hpp"

namespace crowdstar {

// Per-feature mean over the skyline representatives of a crowd on a topic.
// Activity (A2) is individual, never summarized into the crowd view.
struct CrowdSummary {
  CrowdId crowd;
  Topic topic;
  double K1 = 0.0;  // normalized scale
  double K2 = 0.0;
  double A1 = 0.0;
  std::vector<UserId> representatives;
  int representative_count = 0;  // requested R
  bool under_filled = false;     // fewer than R users existed across levels
};

struct ScoreWeights {
  double w_K1 = 1.0 / 3.0;
  double w_K2 = 1.0 / 3.0;
  double w_A1 = 1.0 / 3.0;

  // Scales non-negative weights to sum 1; throws on a zero or negative sum.
  static ScoreWeights normalized(double k1, double k2, double a1);
  static ScoreWeights preset_default() { return {}; }
  // Survey tasks lean on interest and responsiveness.
  static ScoreWeights preset_survey() { return normalized(0.10, 0.45, 0.45); }
  static std::optional<ScoreWeights> preset(std::string_view name);
};

// Representatives are the first R users taken level by level in stream
// order; summaries are means of the normalized features over them.
CrowdSummary summarize(const SkylineLevels& levels, const TopicSnapshot& snapshot, int representative_count);

// Weighted crowd score; A2 never contributes.
double score(const CrowdSummary& summary, const ScoreWeights& weights);

}  // namespace crowdstar
