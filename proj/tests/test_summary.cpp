#include "crowdstar/summary.hpp"

#include <random>

#include "doctest.h"

using namespace crowdstar;

namespace {

TopicSnapshot snapshot_with(const std::vector<std::pair<std::string, FeatureVector>>& users) {
  TopicSnapshot snap;
  snap.crowd = "c";
  snap.topic = Topic::of("t");
  for (const auto& [handle, f] : users) {
    UserFeatures uf;
    uf.features = f;
    snap.users.emplace(handle, uf);
  }
  return snap;
}

FeatureVector fv(double k1n, double k2n = 0.0, double a1n = 0.0, double a2n = 0.0) {
  FeatureVector f;
  f.K1n = k1n;
  f.K2n = k2n;
  f.A1n = a1n;
  f.A2n = a2n;
  return f;
}

SkylineLevels levels_of(std::vector<std::vector<std::string>> levels) {
  SkylineLevels out;
  out.dims = {"K1n", "K2n", "A1n", "A2n"};
  for (auto& level : levels) {
    std::vector<CandidatePoint> points;
    for (auto& handle : level) points.push_back(CandidatePoint{UserId{"c", handle}, {0, 0, 0, 0}});
    out.levels.push_back(std::move(points));
  }
  return out;
}

}  // namespace

TEST_CASE("summary is the mean of the representatives' normalized features") {
  auto snap = snapshot_with({{"a", fv(0.2)}, {"b", fv(0.4)}, {"c", fv(0.6)}});
  CrowdSummary s = summarize(levels_of({{"a", "b", "c"}}), snap, 3);
  CHECK(s.K1 == doctest::Approx(0.4));
  CHECK_FALSE(s.under_filled);
}

TEST_CASE("a single representative carries its own features") {
  auto snap = snapshot_with({{"solo", fv(0.7, 0.3, 0.9)}});
  CrowdSummary s = summarize(levels_of({{"solo"}}), snap, 1);
  CHECK(s.K1 == doctest::Approx(0.7));
  CHECK(s.K2 == doctest::Approx(0.3));
  CHECK(s.A1 == doctest::Approx(0.9));
}

TEST_CASE("representatives draw on lower levels in level order") {
  auto snap = snapshot_with({{"top", fv(1.0)}, {"x", fv(0.5)}, {"y", fv(0.3)}, {"z", fv(0.1)}});
  CrowdSummary s = summarize(levels_of({{"top"}, {"x", "y", "z"}}), snap, 2);
  REQUIRE(s.representatives.size() == 2);
  CHECK(s.representatives[0].handle == "top");
  CHECK(s.representatives[1].handle == "x");  // first of level 2 in stream order
}

TEST_CASE("fewer users than R flags under-filled and uses everyone") {
  auto snap = snapshot_with({{"a", fv(0.2)}, {"b", fv(0.8)}});
  CrowdSummary s = summarize(levels_of({{"a", "b"}}), snap, 5);
  CHECK(s.under_filled);
  CHECK(s.representatives.size() == 2);
  CHECK(s.K1 == doctest::Approx(0.5));
}

TEST_CASE("score is the weighted combination and ignores A2") {
  CrowdSummary s;
  s.K1 = 0.4;
  s.K2 = 0.3;
  s.A1 = 0.5;
  const ScoreWeights equal = ScoreWeights::normalized(1, 1, 1);
  CHECK(score(s, equal) == doctest::Approx((0.4 + 0.3 + 0.5) / 3.0));
  CHECK(score(s, ScoreWeights::normalized(1, 0, 0)) == doctest::Approx(0.4));

  // Changing only the representatives' A2 leaves the score unchanged.
  auto snap_a = snapshot_with({{"a", fv(0.4, 0.3, 0.5, 0.1)}});
  auto snap_b = snapshot_with({{"a", fv(0.4, 0.3, 0.5, 0.9)}});
  auto l = levels_of({{"a"}});
  CHECK(score(summarize(l, snap_a, 1), equal) == doctest::Approx(score(summarize(l, snap_b, 1), equal)));
}

TEST_CASE("score is monotone in every summarized feature") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ScoreWeights w = ScoreWeights::normalized(0.2, 0.5, 0.3);
  for (int round = 0; round < 200; ++round) {
    CrowdSummary s;
    s.K1 = u(rng);
    s.K2 = u(rng);
    s.A1 = u(rng);
    CrowdSummary bumped = s;
    switch (round % 3) {
      case 0: bumped.K1 += 0.05; break;
      case 1: bumped.K2 += 0.05; break;
      default: bumped.A1 += 0.05; break;
    }
    CHECK(score(bumped, w) >= score(s, w));
    CHECK(score(s, ScoreWeights::normalized(1, 1, 1)) >= 0.0);
    CHECK(score(s, ScoreWeights::normalized(1, 1, 1)) <= 1.0);
  }
}

TEST_CASE("summaries are permutation-invariant over the representative set") {
  auto snap = snapshot_with({{"a", fv(0.1, 0.9, 0.4)}, {"b", fv(0.5, 0.2, 0.6)}, {"c", fv(0.9, 0.4, 0.2)}});
  CrowdSummary s1 = summarize(levels_of({{"a", "b", "c"}}), snap, 3);
  CrowdSummary s2 = summarize(levels_of({{"c", "a", "b"}}), snap, 3);
  CHECK(s1.K1 == doctest::Approx(s2.K1));
  CHECK(s1.K2 == doctest::Approx(s2.K2));
  CHECK(s1.A1 == doctest::Approx(s2.A1));
}

TEST_CASE("weights normalize at load and reject degenerate input") {
  ScoreWeights w = ScoreWeights::normalized(2, 1, 1);
  CHECK(w.w_K1 == doctest::Approx(0.5));
  CHECK(w.w_K1 + w.w_K2 + w.w_A1 == doctest::Approx(1.0));
  CHECK_THROWS_AS(ScoreWeights::normalized(0, 0, 0), Error);
  CHECK_THROWS_AS(ScoreWeights::normalized(-1, 1, 1), Error);
  CHECK(ScoreWeights::preset("survey").has_value());
  CHECK_FALSE(ScoreWeights::preset("nope").has_value());
}
