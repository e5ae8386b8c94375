#include "crowdstar/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crowdstar/ingest.hpp"
#include "json.hpp"

namespace crowdstar::sim {

namespace {

std::string pad6(std::int64_t n) {
  std::string s = std::to_string(n);
  return std::string(s.size() >= 6 ? 0 : 6 - s.size(), '0') + s;
}

bool is_twitter_style(const CrowdId& crowd) { return crowd.find("twitter") != std::string::npos; }

}  // namespace

std::string_view to_string(Archetype a) {
  switch (a) {
    case Archetype::focused_expert: return "focused_expert";
    case Archetype::broad_expert: return "broad_expert";
    case Archetype::spammer: return "spammer";
    case Archetype::low_frequency: return "low_frequency";
    case Archetype::broadcast_account: return "broadcast_account";
    case Archetype::casual: return "casual";
  }
  return "casual";
}

std::optional<Archetype> parse_archetype(std::string_view text) {
  for (Archetype a : {Archetype::focused_expert, Archetype::broad_expert, Archetype::spammer,
                      Archetype::low_frequency, Archetype::broadcast_account, Archetype::casual}) {
    if (text == to_string(a)) return a;
  }
  return std::nullopt;
}

std::map<Archetype, ArchetypeSpec> default_archetypes() {
  std::map<Archetype, ArchetypeSpec> out;
  out[Archetype::focused_expert] = {Archetype::focused_expert, 5.0, 0.9, 0.6, 0.8, {2.0, 0.5}, 0.35, 0.02};
  out[Archetype::broad_expert] = {Archetype::broad_expert, 5.0, 0.75, 0.5, 0.7, {3.0, 0.6}, 0.30, 0.05};
  out[Archetype::spammer] = {Archetype::spammer, 25.0, 0.95, 0.0, 0.0, {48.0, 0.5}, 0.0, 0.0};
  out[Archetype::low_frequency] = {Archetype::low_frequency, 0.15, 0.8, 0.4, 0.7, {6.0, 0.8}, 0.30, 0.0};
  out[Archetype::broadcast_account] = {Archetype::broadcast_account, 15.0, 0.7, 0.05, 0.5, {24.0, 0.5}, 0.02, 0.15};
  out[Archetype::casual] = {Archetype::casual, 1.5, 0.3, 0.2, 0.5, {8.0, 0.9}, 0.40, 0.10};
  return out;
}

SimConfig default_sim_config() {
  SimConfig cfg;
  cfg.topics = {Topic::of("hiking"), Topic::of("travel")};
  cfg.crowds.push_back(CrowdMix{
      "twitter-like",
      {{Archetype::focused_expert, 8},
       {Archetype::broad_expert, 4},
       {Archetype::spammer, 2},
       {Archetype::low_frequency, 4},
       {Archetype::broadcast_account, 2},
       {Archetype::casual, 26}},
      0.0,
      0.3});
  cfg.crowds.push_back(CrowdMix{
      "quora-like",
      {{Archetype::focused_expert, 8},
       {Archetype::broad_expert, 4},
       {Archetype::spammer, 2},
       {Archetype::low_frequency, 4},
       {Archetype::broadcast_account, 2},
       {Archetype::casual, 26}},
      0.2,
      0.3});
  return cfg;
}

std::vector<RosterEntry> roster(const SimConfig& cfg) {
  std::vector<RosterEntry> out;
  for (const CrowdMix& mix : cfg.crowds) {
    std::size_t crowd_seq = 0;
    for (const auto& [archetype, count] : mix.counts) {
      for (int i = 0; i < count; ++i) {
        RosterEntry entry;
        entry.user = UserId{mix.crowd, std::string(to_string(archetype)) + "-" + pad6(i)};
        entry.archetype = archetype;
        entry.primary_topic =
            cfg.topics.empty() ? Topic{} : cfg.topics[crowd_seq % cfg.topics.size()];
        out.push_back(std::move(entry));
        crowd_seq += 1;
      }
    }
  }
  return out;
}

namespace {

struct EventFactory {
  const SimConfig& cfg;
  std::map<CrowdId, std::int64_t> seq;

  std::string next_id(const CrowdId& crowd) { return crowd + "-" + pad6(seq[crowd]++); }
};

const ArchetypeSpec& spec_for(const SimConfig& cfg, Archetype a) {
  auto it = cfg.archetypes.find(a);
  if (it == cfg.archetypes.end()) throw Error("no archetype spec for " + std::string(to_string(a)));
  return it->second;
}

// Content body; for text-matched crowds the on-topic marker is the topic
// label itself, and off-topic text must avoid every universe label.
std::string post_text(const std::optional<Topic>& topic, std::int64_t salt) {
  if (topic) return "notes about " + topic->label + " no." + std::to_string(salt);
  return "general status update no." + std::to_string(salt);
}

void tag_event(ActivityEvent& e, const std::optional<Topic>& topic, bool twitter_style) {
  if (twitter_style) return;  // topics come from text matching at ingestion
  if (topic) e.topics = {*topic};
}

}  // namespace

std::vector<ActivityEvent> generate(const SimConfig& cfg) {
  const std::vector<RosterEntry> users = roster(cfg);
  std::map<CrowdId, std::vector<const RosterEntry*>> by_crowd;
  for (const RosterEntry& u : users) {
    by_crowd[u.user.crowd].push_back(&u);
  }

  EventFactory factory{cfg, {}};
  std::vector<ActivityEvent> events;
  const Timestamp t0 = kSimEpoch;
  const std::int64_t steps = std::max<std::int64_t>(1, days(cfg.horizon_days) / cfg.clock_step);

  // Organic questions go to users visible on the topic: primary-topic
  // members plus broad experts.
  std::map<std::pair<CrowdId, Topic>, std::vector<const RosterEntry*>> topical;
  for (const RosterEntry& u : users) {
    for (const Topic& t : cfg.topics) {
      if (u.primary_topic == t || u.archetype == Archetype::broad_expert) {
        topical[{u.user.crowd, t}].push_back(&u);
      }
    }
  }

  for (const CrowdMix& mix : cfg.crowds) {
    const bool twitter_style = is_twitter_style(mix.crowd);
    for (const RosterEntry* u : by_crowd[mix.crowd]) {
      const ArchetypeSpec& spec = spec_for(cfg, u->archetype);
      Rng rng = derived_rng(cfg.seed, {"gen", mix.crowd, u->user.handle});
      const std::int64_t n_posts = rng.poisson(spec.post_rate * cfg.horizon_days);
      for (std::int64_t k = 0; k < n_posts; ++k) {
        const Timestamp ts = t0 + rng.uniform_int(0, steps - 1) * cfg.clock_step;
        const bool on_topic = rng.bernoulli(spec.on_topic_fraction);
        std::optional<Topic> topic;
        if (on_topic && !cfg.topics.empty()) {
          topic = u->archetype == Archetype::broad_expert
                      ? cfg.topics[static_cast<std::size_t>(
                            rng.uniform_int(0, static_cast<std::int64_t>(cfg.topics.size()) - 1))]
                      : u->primary_topic;
        }

        const bool repost = rng.bernoulli(spec.repost_fraction);
        const bool conversational = !repost && rng.bernoulli(spec.conversational_fraction);
        // Asking someone directly is a conversational act, so only the
        // conversational share of posts can become directed questions.
        const bool is_ask = topic && conversational && rng.bernoulli(mix.ask_fraction);
        if (is_ask) {
          const auto& pool = topical[{mix.crowd, *topic}];
          if (pool.size() < 2) continue;
          const RosterEntry* target = pool[static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
          if (target->user == u->user) continue;  // no self-questions
          ActivityEvent q;
          q.event_id = factory.next_id(mix.crowd);
          q.crowd = mix.crowd;
          q.author = u->user.handle;
          q.timestamp = ts;
          q.kind = EventKind::question;
          q.conversational = true;
          q.addressed_to = target->user.handle;
          q.text = "any advice on " + topic->label + "? no." + q.event_id;
          tag_event(q, topic, twitter_style);
          const std::string question_id = q.event_id;
          events.push_back(std::move(q));

          const ArchetypeSpec& target_spec = spec_for(cfg, target->archetype);
          Rng answer_rng = derived_rng(cfg.seed, {"organic", question_id, target->user.handle});
          if (answer_rng.bernoulli(target_spec.answer_prob)) {
            const auto latency_s = static_cast<Duration>(std::llround(
                answer_rng.lognormal(target_spec.response_latency.scale_hours,
                                     target_spec.response_latency.sigma) *
                3600.0));
            const Timestamp answered_at = ts + std::max<Duration>(latency_s, 60);
            if (answered_at < cfg.horizon_end()) {
              ActivityEvent a;
              a.event_id = factory.next_id(mix.crowd);
              a.crowd = mix.crowd;
              a.author = target->user.handle;
              a.timestamp = answered_at;
              a.kind = EventKind::answer;
              a.conversational = twitter_style;
              a.in_reply_to = question_id;
              const bool correct = answer_rng.bernoulli(target_spec.answer_correct_prob);
              if (twitter_style) {
                a.correct_label = correct;
              } else if (correct) {
                a.upvotes = 2 + answer_rng.uniform_int(0, 3);
              } else {
                a.upvotes = answer_rng.uniform_int(0, 1);
              }
              a.text = "re " + topic->label + ": here is what I know no." + a.event_id;
              tag_event(a, topic, twitter_style);
              events.push_back(std::move(a));
            }
          }
          continue;
        }

        ActivityEvent e;
        e.event_id = factory.next_id(mix.crowd);
        e.crowd = mix.crowd;
        e.author = u->user.handle;
        e.timestamp = ts;
        e.repost = repost;
        e.conversational = conversational;
        if (twitter_style) {
          e.kind = EventKind::post;
        } else {
          // Comments are the conversational chatter; everything else is a
          // standalone blog-style contribution.
          e.kind = e.conversational ? EventKind::post : EventKind::blog;
          if (e.kind == EventKind::blog && topic) {
            e.upvotes = rng.bernoulli(spec.answer_correct_prob) ? rng.uniform_int(1, 4) : 0;
          }
        }
        e.text = post_text(topic, factory.seq[mix.crowd]);
        tag_event(e, topic, twitter_style);
        events.push_back(std::move(e));
      }
    }
  }

  std::sort(events.begin(), events.end(), [](const ActivityEvent& a, const ActivityEvent& b) {
    return std::tie(a.timestamp, a.event_id) < std::tie(b.timestamp, b.event_id);
  });
  return events;
}

std::vector<FeedbackEvent> respond(const RoutingPlan& plan, const SimConfig& cfg, Timestamp now) {
  const std::vector<RosterEntry> users = roster(cfg);
  std::map<UserId, const RosterEntry*> by_id;
  std::map<CrowdId, std::vector<const RosterEntry*>> by_crowd;
  for (const RosterEntry& u : users) {
    by_id[u.user] = &u;
    by_crowd[u.user.crowd].push_back(&u);
  }

  std::vector<FeedbackEvent> out;
  std::map<CrowdId, std::set<UserId>> asked;
  for (const Ask& ask : plan.asks) {
    asked[ask.user.crowd].insert(ask.user);
    auto it = by_id.find(ask.user);
    if (it == by_id.end()) continue;  // user outside the simulated roster
    const ArchetypeSpec& spec = spec_for(cfg, it->second->archetype);
    Rng rng = derived_rng(cfg.seed, {"resp", plan.question_id, ask.user.crowd, ask.user.handle});
    if (!rng.bernoulli(spec.answer_prob)) continue;
    const auto latency_s = static_cast<Duration>(std::llround(
        rng.lognormal(spec.response_latency.scale_hours, spec.response_latency.sigma) * 3600.0));
    FeedbackEvent fb;
    fb.question_id = plan.question_id;
    fb.responder = ask.user;
    fb.answered_at = now + std::max<Duration>(latency_s, 60);
    fb.correct = rng.bernoulli(spec.answer_correct_prob);
    out.push_back(std::move(fb));
  }

  // Questions visible to a whole community attract answers from members the
  // router never targeted.
  for (const CrowdMix& mix : cfg.crowds) {
    auto asked_it = asked.find(mix.crowd);
    if (asked_it == asked.end() || mix.unsolicited_rate <= 0.0) continue;
    Rng rng = derived_rng(cfg.seed, {"unsol", plan.question_id, mix.crowd});
    if (!rng.bernoulli(mix.unsolicited_rate)) continue;
    // Interested members who actually answer things: topic-affine and with a
    // nonzero answer probability.
    std::vector<const RosterEntry*> pool;
    for (const RosterEntry* u : by_crowd[mix.crowd]) {
      if (asked_it->second.contains(u->user)) continue;
      if (spec_for(cfg, u->archetype).answer_prob <= 0.0) continue;
      if (u->primary_topic == plan.topic || u->archetype == Archetype::broad_expert) pool.push_back(u);
    }
    if (pool.empty()) continue;
    const RosterEntry* responder =
        pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
    const ArchetypeSpec& spec = spec_for(cfg, responder->archetype);
    const auto latency_s = static_cast<Duration>(std::llround(
        rng.lognormal(spec.response_latency.scale_hours, spec.response_latency.sigma) * 3600.0));
    FeedbackEvent fb;
    fb.question_id = plan.question_id;
    fb.responder = responder->user;
    fb.answered_at = now + std::max<Duration>(latency_s, 60);
    fb.correct = rng.bernoulli(spec.answer_correct_prob);
    out.push_back(std::move(fb));
  }

  std::sort(out.begin(), out.end(), [](const FeedbackEvent& a, const FeedbackEvent& b) {
    return std::tie(a.answered_at, a.responder) < std::tie(b.answered_at, b.responder);
  });
  return out;
}

ExperimentConfig default_experiment_config() {
  ExperimentConfig cfg;
  cfg.sim = default_sim_config();
  for (const CrowdMix& mix : cfg.sim.crowds) {
    cfg.policies.emplace(mix.crowd, is_twitter_style(mix.crowd) ? twitter_like_policy(mix.crowd)
                                                                : quora_like_policy(mix.crowd));
  }
  cfg.question_topics = cfg.sim.topics;
  return cfg;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, RoutingStrategy strategy) {
  if (cfg.policies.empty()) throw Error("experiment needs crowd policies");
  const std::vector<Topic>& topics = cfg.question_topics.empty() ? cfg.sim.topics : cfg.question_topics;
  if (topics.empty()) throw Error("experiment needs question topics");

  // The community keeps living while questions are routed: the generated
  // history extends across the whole routing phase and streams into the
  // index as the clock advances.
  const Timestamp t0 = cfg.sim.horizon_end();
  const int routing_days =
      static_cast<int>((static_cast<Duration>(cfg.questions) * cfg.question_interval) / kSecondsPerDay) + 2;
  SimConfig live = cfg.sim;
  live.horizon_days += routing_days;

  IngestOptions ingest_options{cfg.policies, cfg.sim.topics};
  IngestResult ingested = ingest_events(generate(live), ingest_options);

  FeatureIndex index(cfg.index, cfg.policies);
  std::size_t streamed = 0;
  auto stream_events_to = [&](Timestamp limit) {
    std::size_t begin = streamed;
    while (streamed < ingested.events.size() &&
           ingested.events[streamed].event.timestamp <= limit) {
      streamed += 1;
    }
    if (streamed > begin) {
      index.add_events(std::span<const ClassifiedEvent>(ingested.events.data() + begin, streamed - begin));
    }
  };
  stream_events_to(t0);
  index.daily_tick(t0);
  Timestamp next_tick = t0 + kSecondsPerDay;

  ExperimentResult result;
  std::vector<std::pair<FeedbackEvent, Timestamp>> pending;  // (feedback, issue time)
  std::size_t applied = 0;

  auto apply_feedback_to = [&](Timestamp limit) {
    while (applied < pending.size() && pending[applied].first.answered_at <= limit) {
      const auto& [fb, issued] = pending[applied];
      auto outcome = index.apply_feedback(fb);
      if (outcome.accepted) {
        result.feedback.push_back(FeedbackLogRecord{fb.question_id, fb.responder.crowd,
                                                    fb.responder.handle, fb.answered_at, fb.correct,
                                                    outcome.solicited});
      }
      applied += 1;
    }
  };

  auto advance_to = [&](Timestamp now) {
    while (next_tick <= now) {
      // Everything that happened before the tick must be visible to it.
      stream_events_to(next_tick);
      apply_feedback_to(next_tick);
      index.daily_tick(next_tick);
      next_tick += kSecondsPerDay;
    }
    stream_events_to(now);
    apply_feedback_to(now);
  };

  auto queue_feedback = [&](std::vector<FeedbackEvent> batch, Timestamp issued) {
    for (FeedbackEvent& fb : batch) pending.emplace_back(std::move(fb), issued);
    std::stable_sort(pending.begin() + static_cast<std::ptrdiff_t>(applied), pending.end(),
                     [](const auto& a, const auto& b) {
                       return std::tie(a.first.answered_at, a.first.question_id, a.first.responder) <
                              std::tie(b.first.answered_at, b.first.question_id, b.first.responder);
                     });
  };

  for (int i = 0; i < cfg.questions; ++i) {
    const Timestamp now = t0 + static_cast<Duration>(i + 1) * cfg.question_interval;
    advance_to(now);
    const Topic& topic = topics[static_cast<std::size_t>(i) % topics.size()];
    QuestionTask task;
    task.question_id = "q-" + pad6(i);
    task.text = "What should I know about " + topic.label + "? no." + std::to_string(i);
    task.topic = topic;
    task.budget = cfg.budget;

    RoutingPlan plan;
    if (strategy == RoutingStrategy::skyline) {
      std::map<CrowdId, TopicSnapshot> snapshots;
      for (const auto& [crowd, policy] : cfg.policies) {
        snapshots.emplace(crowd, index.snapshot(crowd, topic, now));
      }
      plan = route(task, snapshots, cfg.policies, cfg.router, now);
    } else {
      // Uniform-random baseline: budget spread over every user holding a
      // cell on the topic, regardless of features; no activity gate.
      plan.question_id = task.question_id;
      plan.topic = topic;
      plan.mode = SplitMode::equal_split;
      std::vector<UserId> pool;
      for (const auto& [crowd, policy] : cfg.policies) {
        TopicSnapshot snap = index.snapshot(crowd, topic, now);
        for (const auto& [handle, uf] : snap.users) pool.push_back(UserId{crowd, handle});
      }
      Rng rng = derived_rng(cfg.sim.seed, {"baseline", task.question_id});
      const int n = std::min<int>(task.budget, static_cast<int>(pool.size()));
      for (int k = 0; k < n; ++k) {
        const auto pick = static_cast<std::size_t>(
            rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
        const UserId user = pool[pick];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        try {
          plan.asks.push_back(Ask{user, compose_ask(task, user, cfg.policies.at(user.crowd)), now});
          plan.allocations[user.crowd] += 1;
        } catch (const MessageTooLong&) {
        }
      }
    }

    issue_plan(index, task, plan);
    for (PlanLogRecord& record : plan_records(task, plan)) result.plans.push_back(std::move(record));
    for (const auto& [crowd, missing] : plan.shortfall) result.shortfall[crowd] += missing;
    result.questions_routed += 1;

    queue_feedback(respond(plan, cfg.sim, now), now);
  }

  if (applied < pending.size()) {
    advance_to(pending.back().first.answered_at);
  }
  return result;
}

double CrowdRunMetrics::answer_rate() const {
  return asks > 0 ? static_cast<double>(solicited_answers) / static_cast<double>(asks) : 0.0;
}

double CrowdRunMetrics::answered_fraction() const {
  return questions_asked > 0
             ? static_cast<double>(questions_answered) / static_cast<double>(questions_asked)
             : 0.0;
}

double CrowdRunMetrics::mean_latency_hours() const {
  return solicited_answers > 0 ? latency_hours_sum / static_cast<double>(solicited_answers) : 0.0;
}

double CrowdRunMetrics::correct_rate() const {
  const std::int64_t answers = solicited_answers + unsolicited_answers;
  return answers > 0 ? static_cast<double>(correct_answers) / static_cast<double>(answers) : 0.0;
}

RunMetrics measure_run(std::span<const PlanLogRecord> plans,
                       std::span<const FeedbackLogRecord> feedback) {
  RunMetrics out;
  std::map<std::pair<std::string, std::string>, Timestamp> issued_at;  // (qid, crowd:user)
  std::map<CrowdId, std::set<std::string>> questions_per_crowd;
  std::map<CrowdId, std::set<std::string>> answered_per_crowd;
  std::set<std::string> questions_total;
  std::set<std::string> answered_total;

  for (const PlanLogRecord& r : plans) {
    out.per_crowd[r.crowd].asks += 1;
    out.overall.asks += 1;
    issued_at[{r.question_id, r.crowd + ":" + r.user}] = r.issued_at;
    questions_per_crowd[r.crowd].insert(r.question_id);
    questions_total.insert(r.question_id);
  }
  for (auto& [crowd, qs] : questions_per_crowd) {
    out.per_crowd[crowd].questions_asked = static_cast<std::int64_t>(qs.size());
  }
  out.overall.questions_asked = static_cast<std::int64_t>(questions_total.size());

  for (const FeedbackLogRecord& r : feedback) {
    CrowdRunMetrics& m = out.per_crowd[r.crowd];
    if (r.solicited) {
      m.solicited_answers += 1;
      out.overall.solicited_answers += 1;
      auto it = issued_at.find({r.question_id, r.crowd + ":" + r.responder});
      if (it != issued_at.end()) {
        const double latency = to_hours(r.answered_at - it->second);
        m.latency_hours_sum += latency;
        out.overall.latency_hours_sum += latency;
      }
    } else {
      m.unsolicited_answers += 1;
      out.overall.unsolicited_answers += 1;
    }
    if (r.correct.value_or(false)) {
      m.correct_answers += 1;
      out.overall.correct_answers += 1;
    }
    answered_per_crowd[r.crowd].insert(r.question_id);
    answered_total.insert(r.question_id);
  }
  for (auto& [crowd, qs] : answered_per_crowd) {
    out.per_crowd[crowd].questions_answered = static_cast<std::int64_t>(qs.size());
  }
  out.overall.questions_answered = static_cast<std::int64_t>(answered_total.size());
  return out;
}

namespace {

void metrics_rows(std::ostringstream& os, const std::string& label, const CrowdRunMetrics& m) {
  os << "  " << label << ": asks=" << m.asks << " answered_asks=" << m.solicited_answers
     << " answer_rate=" << m.answer_rate() << " questions=" << m.questions_asked
     << " questions_answered=" << m.questions_answered << " unsolicited=" << m.unsolicited_answers
     << " mean_latency_h=" << m.mean_latency_hours() << " correct_rate=" << m.correct_rate() << "\n";
}

nlohmann::json metrics_json(const RunMetrics& run) {
  nlohmann::json j;
  auto fill = [](const CrowdRunMetrics& m) {
    nlohmann::json o;
    o["asks"] = m.asks;
    o["answered_asks"] = m.solicited_answers;
    o["answer_rate"] = m.answer_rate();
    o["questions"] = m.questions_asked;
    o["questions_answered"] = m.questions_answered;
    o["unsolicited"] = m.unsolicited_answers;
    o["mean_latency_hours"] = m.mean_latency_hours();
    o["correct_rate"] = m.correct_rate();
    return o;
  };
  j["overall"] = fill(run.overall);
  for (const auto& [crowd, m] : run.per_crowd) j["crowds"][crowd] = fill(m);
  return j;
}

}  // namespace

std::string EvaluationReport::to_text() const {
  std::ostringstream os;
  os << "routed run:\n";
  metrics_rows(os, "overall", routed.overall);
  for (const auto& [crowd, m] : routed.per_crowd) metrics_rows(os, crowd, m);
  if (baseline) {
    os << "baseline run:\n";
    metrics_rows(os, "overall", baseline->overall);
    for (const auto& [crowd, m] : baseline->per_crowd) metrics_rows(os, crowd, m);
    const double base_rate = baseline->overall.answer_rate();
    os << "answer-rate lift (routed/baseline): ";
    if (base_rate > 0.0) {
      os << routed.overall.answer_rate() / base_rate << "\n";
    } else {
      os << "n/a\n";
    }
  }
  return os.str();
}

std::string EvaluationReport::to_json() const {
  nlohmann::json j;
  j["routed"] = metrics_json(routed);
  if (baseline) {
    j["baseline"] = metrics_json(*baseline);
    const double base_rate = baseline->overall.answer_rate();
    if (base_rate > 0.0) j["answer_rate_lift"] = routed.overall.answer_rate() / base_rate;
  }
  return j.dump(2);
}

EvaluationReport evaluate(std::span<const PlanLogRecord> plans,
                          std::span<const FeedbackLogRecord> feedback,
                          std::span<const PlanLogRecord> baseline_plans,
                          std::span<const FeedbackLogRecord> baseline_feedback) {
  EvaluationReport report;
  report.routed = measure_run(plans, feedback);
  if (!baseline_plans.empty() || !baseline_feedback.empty()) {
    report.baseline = measure_run(baseline_plans, baseline_feedback);
  }
  return report;
}

}  // namespace crowdstar::sim
