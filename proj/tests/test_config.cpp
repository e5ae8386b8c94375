#include "crowdstar/config.hpp"

#include <sstream>

#include "doctest.h"

using namespace crowdstar;

TEST_CASE("ini parsing: sections, comments, strict duplicates") {
  std::stringstream in(
      "# comment\n"
      "[weights]\n"
      "K1 = 0.2\n"
      "K2 = 0.3\n"
      "A1 = 0.5\n");
  IniFile ini = IniFile::parse(in);
  CHECK(ini.take("weights", "K1") == "0.2");
  CHECK(ini.take("weights", "K1") == std::nullopt);  // consumed

  std::stringstream dup("[a]\nx = 1\nx = 2\n");
  CHECK_THROWS_AS(IniFile::parse(dup), Error);
  std::stringstream orphan("x = 1\n");
  CHECK_THROWS_AS(IniFile::parse(orphan), Error);
}

TEST_CASE("unknown keys are rejected after loading") {
  std::stringstream in(
      "[router]\n"
      "representatives = 10\n"
      "frobnicate = yes\n");
  CHECK_THROWS_WITH_AS(parse_config(in), doctest::Contains("frobnicate"), Error);
}

TEST_CASE("config overrides defaults and preserves the rest") {
  std::stringstream in(
      "[topics]\n"
      "universe = Hiking, TRAVEL, poker\n"
      "[weights]\n"
      "preset = survey\n"
      "[router]\n"
      "representatives = 7\n"
      "activity_gate_hours = 12\n"
      "[index]\n"
      "qualification_window = forever\n"
      "interest_window = 14d\n"
      "[prune]\n"
      "mode = percentile\n"
      "percentile = 20\n");
  AppConfig cfg = parse_config(in);
  REQUIRE(cfg.topic_universe.size() == 3);
  CHECK(cfg.topic_universe[0].label == "hiking");  // normalized
  CHECK(cfg.representative_count == 7);
  CHECK(cfg.activity_gate_hours == 12.0);
  CHECK_FALSE(cfg.index.windows.qualification.has_value());
  CHECK(cfg.index.windows.interest == days(14));
  CHECK(cfg.weights.w_K2 == doctest::Approx(0.45));
  CHECK(cfg.policies.contains("twitter-like"));  // defaults kept
  CHECK(cfg.policies.contains("quora-like"));
}

TEST_CASE("crowd sections replace the default policies") {
  std::stringstream in(
      "[crowd.birdsite]\n"
      "style = twitter\n"
      "max_length = 280\n"
      "[crowd.qna]\n"
      "style = quora\n"
      "correctness = upvotes:3\n");
  AppConfig cfg = parse_config(in);
  CHECK(cfg.policies.size() == 2);
  CHECK(cfg.policies.at("birdsite").message_template.max_length == 280);
  CHECK(cfg.policies.at("qna").correctness.min_upvotes == 3);
  CHECK(cfg.policies.at("qna").correctness.mode == CorrectnessRule::Mode::upvote_threshold);
}

TEST_CASE("simulator sections parameterize archetypes and mixes") {
  std::stringstream in(
      "[crowd.twitter-like]\n"
      "style = twitter\n"
      "[crowd.quora-like]\n"
      "style = quora\n"
      "[simulator]\n"
      "seed = 99\n"
      "horizon_days = 5\n"
      "[simulator.archetype.casual]\n"
      "answer_prob = 0.42\n"
      "[simulator.crowd.twitter-like]\n"
      "mix = focused_expert:2, casual:5\n"
      "ask_fraction = 0.2\n");
  AppConfig cfg = parse_config(in);
  CHECK(cfg.simulator.seed == 99);
  CHECK(cfg.simulator.horizon_days == 5);
  CHECK(cfg.simulator.archetypes.at(sim::Archetype::casual).answer_prob == doctest::Approx(0.42));
  REQUIRE(cfg.simulator.crowds.size() == 1);
  CHECK(cfg.simulator.crowds[0].crowd == "twitter-like");
  CHECK(cfg.simulator.crowds[0].ask_fraction == doctest::Approx(0.2));
}

TEST_CASE("validation failures are loud") {
  std::stringstream bad_probability(
      "[simulator.archetype.casual]\n"
      "answer_prob = 1.5\n");
  CHECK_THROWS_AS(parse_config(bad_probability), Error);

  std::stringstream bad_window(
      "[index]\n"
      "interest_window = forever\n");
  CHECK_THROWS_AS(parse_config(bad_window), Error);

  std::stringstream sim_crowd_without_policy(
      "[crowd.only]\n"
      "style = twitter\n"
      "[simulator.crowd.other]\n"
      "mix = casual:3\n");
  CHECK_THROWS_AS(parse_config(sim_crowd_without_policy), Error);
}

TEST_CASE("duration syntax") {
  CHECK(parse_window("30d", "t") == days(30));
  CHECK(parse_window("24h", "t") == hours(24));
  CHECK(parse_window("90m", "t") == Duration{5400});
  CHECK(parse_window("45s", "t") == Duration{45});
  CHECK(parse_window("3600", "t") == Duration{3600});
  CHECK(parse_window("forever", "t") == std::nullopt);
  CHECK_THROWS_AS(parse_window("-3d", "t"), Error);
  CHECK_THROWS_AS(parse_window("soon", "t"), Error);
}
