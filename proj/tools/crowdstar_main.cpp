// crowdstar: topic-aware social task routing over event logs.
//
// Pipeline: simulate -> ingest -> index -> skyline/summarize -> route ->
// feedback -> evaluate/report. State lives under a single directory; the
// event/plan/feedback logs are the source of truth and every subcommand
// rebuilds its view from them, so runs are replayable byte for byte.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "crowdstar/ingest.hpp"
#include "crowdstar/storage.hpp"
#include "json.hpp"

namespace {

using namespace crowdstar;

struct GlobalOptions {
  std::string config_path;
  std::string state_dir;
  std::optional<Timestamp> now;
  std::string format = "table";  // or "lines"
  std::uint64_t seed = 1;
  int jobs = 1;
};

AppConfig load_app_config(const GlobalOptions& opts) {
  AppConfig cfg = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
  if (const char* env = std::getenv("CROWDSTAR_HOME"); env && *env) cfg.state_dir = env;
  if (!opts.state_dir.empty()) cfg.state_dir = opts.state_dir;
  return cfg;
}

StatePaths state_paths(const AppConfig& cfg) { return StatePaths{cfg.state_dir}; }

Timestamp effective_now(const GlobalOptions& opts, const LoadedState& state) {
  if (opts.now) return *opts.now;
  return state.latest_timestamp > 0 ? state.latest_timestamp : sim::kSimEpoch;
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void print_ingest_report(const IngestReport& report, const std::string& format) {
  if (format == "lines") {
    nlohmann::json j;
    j["accepted"] = report.accepted;
    j["rejected"] = report.rejected;
    j["reject_reasons"] = report.reject_reasons;
    if (report.time_range) {
      j["time_range"] = {report.time_range->first, report.time_range->second};
    }
    std::cout << j.dump() << "\n";
    return;
  }
  std::cout << "accepted: " << report.accepted << "\n";
  std::cout << "rejected: " << report.rejected << "\n";
  for (const auto& [reason, n] : report.reject_reasons) {
    std::cout << "  " << reason << ": " << n << "\n";
  }
  if (report.time_range) {
    std::cout << "time range: [" << report.time_range->first << ", " << report.time_range->second
              << "]\n";
  }
}

// --- subcommands ------------------------------------------------------------

int cmd_ingest(const GlobalOptions& opts, const std::vector<std::string>& event_paths) {
  AppConfig cfg = load_app_config(opts);
  StatePaths paths = state_paths(cfg);

  std::vector<std::filesystem::path> files(event_paths.begin(), event_paths.end());
  IngestResult result = ingest_files(files, IngestOptions{cfg.policies, cfg.topic_universe});

  // Merge into the state log; events already present keep their first form.
  std::set<std::string> known;
  for (const std::string& line : read_lines(paths.events())) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_discarded() && j.contains("event_id")) known.insert(j.at("event_id").get<std::string>());
  }
  std::vector<std::string> fresh;
  for (const ClassifiedEvent& ce : result.events) {
    if (!known.contains(ce.event.event_id)) fresh.push_back(to_json_line(ce.event));
  }
  append_lines(paths.events(), fresh);

  print_ingest_report(result.report, opts.format);
  std::cout << "merged " << fresh.size() << " new events into " << paths.events().string() << "\n";
  return 0;
}

int cmd_index(const GlobalOptions& opts, const std::string& snapshot_dir) {
  AppConfig cfg = load_app_config(opts);
  StatePaths paths = state_paths(cfg);
  LoadedState state = load_state(cfg, paths);
  const Timestamp now = effective_now(opts, state);
  state.index.daily_tick(now);

  const std::filesystem::path out_dir =
      snapshot_dir.empty() ? paths.snapshots() : std::filesystem::path(snapshot_dir);
  const auto topics = state.index.topics();

  // Snapshot computations per (crowd, topic) are independent once the tick
  // ran; --jobs bounds the worker count.
  std::vector<TopicSnapshot> snaps(topics.size());
  const int jobs = std::max(1, opts.jobs);
  std::vector<std::thread> workers;
  std::atomic<std::size_t> cursor{0};
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = cursor.fetch_add(1); i < topics.size(); i = cursor.fetch_add(1)) {
        snaps[i] = state.index.snapshot(topics[i].first, topics[i].second, now);
      }
    });
  }
  for (std::thread& t : workers) t.join();

  for (std::size_t i = 0; i < topics.size(); ++i) {
    const auto file = out_dir / snapshot_file_name(snaps[i].crowd, snaps[i].topic);
    write_snapshot(file, snaps[i]);
    if (opts.format == "lines") {
      nlohmann::json j;
      j["crowd"] = snaps[i].crowd;
      j["topic"] = snaps[i].topic.label;
      j["users"] = snaps[i].users.size();
      j["file"] = file.string();
      std::cout << j.dump() << "\n";
    } else {
      std::cout << snaps[i].crowd << " / " << snaps[i].topic.label << ": " << snaps[i].users.size()
                << " users -> " << file.string() << "\n";
    }
  }
  return 0;
}

int cmd_skyline(const GlobalOptions& opts, const std::string& crowd, const std::string& topic_label,
                int dims, int levels) {
  AppConfig cfg = load_app_config(opts);
  if (!cfg.policies.contains(crowd)) throw Error("unknown crowd '" + crowd + "'");
  LoadedState state = load_state(cfg, state_paths(cfg));
  const Timestamp now = effective_now(opts, state);
  const Topic topic = Topic::of(topic_label);
  TopicSnapshot snap = state.index.snapshot(crowd, topic, now);

  const AxisMode mode = dims == 2 ? AxisMode::two : AxisMode::four;
  const std::string format = opts.format;
  // Streaming sink: points print as soon as the level emits them.
  auto sink = [&](const CandidatePoint& p, int level) {
    if (format == "lines") {
      nlohmann::json j;
      j["user"] = to_string(p.user);
      j["level"] = level;
      j["coords"] = p.coords;
      std::cout << j.dump() << "\n";
      return;
    }
    std::cout << to_string(p.user) << " level=" << level << " [";
    for (std::size_t i = 0; i < p.coords.size(); ++i) {
      std::cout << (i ? ", " : "") << fmt_double(p.coords[i]);
    }
    std::cout << "]\n";
  };
  build_skyline(snap, mode, cfg.prune, levels, sink);
  return 0;
}

int cmd_summarize(const GlobalOptions& opts, const std::string& topic_label,
                  const std::string& weights_name) {
  AppConfig cfg = load_app_config(opts);
  LoadedState state = load_state(cfg, state_paths(cfg));
  const Timestamp now = effective_now(opts, state);
  const Topic topic = Topic::of(topic_label);

  ScoreWeights weights = cfg.weights;
  if (!weights_name.empty()) {
    auto preset = ScoreWeights::preset(weights_name);
    if (!preset) throw Error("unknown weights preset '" + weights_name + "'");
    weights = *preset;
  }

  // Balanced representatives across crowds.
  std::map<CrowdId, TopicSnapshot> snaps;
  std::map<CrowdId, SkylineLevels> levels;
  int effective_r = cfg.representative_count;
  for (const auto& [crowd, policy] : cfg.policies) {
    TopicSnapshot snap = state.index.snapshot(crowd, topic, now);
    SkylineLevels l = build_skyline(snap, cfg.axes, cfg.prune, cfg.max_levels);
    if (l.total_points() > 0) effective_r = std::min(effective_r, static_cast<int>(l.total_points()));
    snaps.emplace(crowd, std::move(snap));
    levels.emplace(crowd, std::move(l));
  }
  effective_r = std::max(1, effective_r);

  for (const auto& [crowd, snap] : snaps) {
    const SkylineLevels& l = levels.at(crowd);
    if (l.total_points() == 0) {
      if (opts.format == "lines") {
        nlohmann::json j;
        j["crowd"] = crowd;
        j["topic"] = topic.label;
        j["empty"] = true;
        std::cout << j.dump() << "\n";
      } else {
        std::cout << crowd << ": no candidates\n";
      }
      continue;
    }
    CrowdSummary summary = summarize(l, snap, effective_r);
    const double crowd_score = score(summary, weights);
    if (opts.format == "lines") {
      nlohmann::json j;
      j["crowd"] = crowd;
      j["topic"] = topic.label;
      j["representatives"] = summary.representatives.size();
      j["under_filled"] = summary.under_filled;
      j["K1"] = summary.K1;
      j["K2"] = summary.K2;
      j["A1"] = summary.A1;
      j["score"] = crowd_score;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << crowd << ": R=" << summary.representatives.size()
                << (summary.under_filled ? " (under-filled)" : "") << " K1=" << fmt_double(summary.K1)
                << " K2=" << fmt_double(summary.K2) << " A1=" << fmt_double(summary.A1)
                << " score=" << fmt_double(crowd_score) << "\n";
    }
  }
  return 0;
}

std::string make_question_id(const std::vector<PlanLogRecord>& existing, const std::string& text,
                             const Topic& topic) {
  std::set<std::string> ids;
  for (const PlanLogRecord& r : existing) ids.insert(r.question_id);
  const std::uint64_t digest = sim::mix(sim::hash_str(text), sim::hash_str(topic.label));
  std::ostringstream os;
  os << "q-" << std::setw(6) << std::setfill('0') << ids.size() << "-" << std::hex
     << (digest & 0xffffffffULL);
  return os.str();
}

int cmd_route(const GlobalOptions& opts, const std::string& question, const std::string& topic_label,
              int budget, const std::string& weights_name, bool baseline) {
  AppConfig cfg = load_app_config(opts);
  StatePaths paths = state_paths(cfg);
  LoadedState state = load_state(cfg, paths);
  const Timestamp now = effective_now(opts, state);
  const Topic topic = Topic::of(topic_label);

  RouterConfig router_cfg = cfg.router_config();
  if (!weights_name.empty()) {
    auto preset = ScoreWeights::preset(weights_name);
    if (!preset) throw Error("unknown weights preset '" + weights_name + "'");
    router_cfg.weights = *preset;
  }

  QuestionTask task;
  task.question_id = make_question_id(state.plans, question, topic);
  task.text = question;
  task.topic = topic;
  task.budget = budget > 0 ? budget : cfg.default_budget;

  RoutingPlan plan;
  if (baseline) {
    plan.question_id = task.question_id;
    plan.topic = topic;
    plan.mode = SplitMode::equal_split;
    std::vector<UserId> pool;
    for (const auto& [crowd, policy] : cfg.policies) {
      TopicSnapshot snap = state.index.snapshot(crowd, topic, now);
      for (const auto& [handle, uf] : snap.users) pool.push_back(UserId{crowd, handle});
    }
    sim::Rng rng = sim::derived_rng(opts.seed, {"baseline", task.question_id});
    const int n = std::min<int>(task.budget, static_cast<int>(pool.size()));
    for (int k = 0; k < n; ++k) {
      const auto pick =
          static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1));
      const UserId user = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
      try {
        plan.asks.push_back(Ask{user, compose_ask(task, user, cfg.policies.at(user.crowd)), now});
        plan.allocations[user.crowd] += 1;
      } catch (const MessageTooLong&) {
      }
    }
  } else {
    std::map<CrowdId, TopicSnapshot> snaps;
    for (const auto& [crowd, policy] : cfg.policies) {
      snaps.emplace(crowd, state.index.snapshot(crowd, topic, now));
    }
    plan = route(task, snaps, cfg.policies, router_cfg, now);
  }

  issue_plan(state.index, task, plan);
  std::vector<std::string> lines;
  for (const PlanLogRecord& r : plan_records(task, plan)) lines.push_back(to_json_line(r));
  append_lines(paths.plans(), lines);

  if (opts.format == "lines") {
    for (const std::string& line : lines) std::cout << line << "\n";
  } else {
    std::cout << "question " << task.question_id << " (topic " << topic.label << ", budget "
              << task.budget << ", " << to_string(plan.mode) << ")\n";
    for (const auto& [crowd, allocation] : plan.allocations) {
      std::cout << "  " << crowd << ": allocation=" << allocation;
      if (auto it = plan.scores.find(crowd); it != plan.scores.end()) {
        std::cout << " score=" << fmt_double(it->second);
      }
      if (auto it = plan.shortfall.find(crowd); it != plan.shortfall.end()) {
        std::cout << " shortfall=" << it->second;
      }
      std::cout << "\n";
    }
    for (const Ask& ask : plan.asks) {
      std::cout << "  -> " << to_string(ask.user) << ": " << ask.message << "\n";
    }
  }
  if (plan.asks.empty()) {
    std::cerr << "warning: no candidates available after gating; plan is empty\n";
  }
  return 0;
}

int cmd_feedback(const GlobalOptions& opts, const std::string& question_id,
                 const std::string& responder, std::optional<Timestamp> at,
                 std::optional<bool> correct, const std::string& from_file) {
  AppConfig cfg = load_app_config(opts);
  StatePaths paths = state_paths(cfg);
  LoadedState state = load_state(cfg, paths);

  std::vector<FeedbackEvent> incoming;
  if (!from_file.empty()) {
    for (const FeedbackLogRecord& r : load_feedback_log(from_file)) {
      incoming.push_back(FeedbackEvent{r.question_id, UserId{r.crowd, r.responder}, r.answered_at, r.correct});
    }
  } else {
    if (question_id.empty() || responder.empty() || !at) {
      throw Error("feedback needs --question-id, --responder and --at (or --from <file>)");
    }
    incoming.push_back(FeedbackEvent{question_id, parse_user_id(responder), *at, correct});
  }

  std::vector<std::string> lines;
  std::int64_t accepted = 0, rejected = 0, duplicates = 0;
  for (const FeedbackEvent& fb : incoming) {
    auto outcome = state.index.apply_feedback(fb);
    if (outcome.accepted) {
      accepted += 1;
      lines.push_back(to_json_line(FeedbackLogRecord{fb.question_id, fb.responder.crowd,
                                                     fb.responder.handle, fb.answered_at, fb.correct,
                                                     outcome.solicited}));
    } else if (outcome.duplicate) {
      duplicates += 1;
    } else {
      rejected += 1;
      if (from_file.empty()) throw Error("feedback rejected: " + outcome.reason);
    }
  }
  append_lines(paths.feedback(), lines);
  std::cout << "feedback applied: " << accepted << " accepted, " << duplicates << " duplicates, "
            << rejected << " rejected\n";
  return 0;
}

int cmd_simulate(const GlobalOptions& opts, const std::string& out_path,
                 const std::string& respond_to, std::optional<std::uint64_t> seed_override) {
  AppConfig cfg = load_app_config(opts);
  sim::SimConfig sim_cfg = cfg.simulator;
  if (seed_override) sim_cfg.seed = *seed_override;
  if (out_path.empty()) throw Error("simulate needs --out <path>");

  if (respond_to.empty()) {
    std::vector<ActivityEvent> events = sim::generate(sim_cfg);
    std::vector<std::string> lines;
    lines.reserve(events.size());
    for (const ActivityEvent& e : events) lines.push_back(to_json_line(e));
    write_lines(out_path, lines);
    std::cout << "wrote " << lines.size() << " events to " << out_path << "\n";
    return 0;
  }

  // Reconstruct plans from the log and produce simulated answers for them.
  std::vector<PlanLogRecord> plans = load_plan_log(respond_to);
  std::map<std::string, RoutingPlan> by_question;
  std::map<std::string, Timestamp> issue_time;
  std::vector<std::string> order;
  for (const PlanLogRecord& r : plans) {
    RoutingPlan& plan = by_question[r.question_id];
    if (plan.question_id.empty()) {
      plan.question_id = r.question_id;
      plan.topic = r.topic;
      order.push_back(r.question_id);
      issue_time[r.question_id] = r.issued_at;
    }
    plan.asks.push_back(Ask{UserId{r.crowd, r.user}, r.message, r.issued_at});
    issue_time[r.question_id] = std::max(issue_time[r.question_id], r.issued_at);
  }

  std::vector<std::string> lines;
  for (const std::string& qid : order) {
    const RoutingPlan& plan = by_question[qid];
    std::set<UserId> asked;
    for (const Ask& a : plan.asks) asked.insert(a.user);
    for (const FeedbackEvent& fb : sim::respond(plan, sim_cfg, issue_time[qid])) {
      lines.push_back(to_json_line(FeedbackLogRecord{fb.question_id, fb.responder.crowd,
                                                     fb.responder.handle, fb.answered_at, fb.correct,
                                                     asked.contains(fb.responder)}));
    }
  }
  write_lines(out_path, lines);
  std::cout << "wrote " << lines.size() << " feedback records to " << out_path << "\n";
  return 0;
}

int cmd_evaluate(const GlobalOptions& opts, const std::string& plan_log,
                 const std::string& feedback_log, const std::string& baseline_plan_log,
                 const std::string& baseline_feedback_log, const std::string& json_out) {
  AppConfig cfg = load_app_config(opts);
  StatePaths paths = state_paths(cfg);

  const auto plans = load_plan_log(plan_log.empty() ? paths.plans() : std::filesystem::path(plan_log));
  const auto feedback =
      load_feedback_log(feedback_log.empty() ? paths.feedback() : std::filesystem::path(feedback_log));
  std::vector<PlanLogRecord> baseline_plans;
  std::vector<FeedbackLogRecord> baseline_feedback;
  if (!baseline_plan_log.empty()) baseline_plans = load_plan_log(baseline_plan_log);
  if (!baseline_feedback_log.empty()) baseline_feedback = load_feedback_log(baseline_feedback_log);

  sim::EvaluationReport report = sim::evaluate(plans, feedback, baseline_plans, baseline_feedback);
  std::cout << report.to_text();
  const std::filesystem::path structured =
      json_out.empty() ? paths.evaluation() : std::filesystem::path(json_out);
  if (!structured.parent_path().empty()) std::filesystem::create_directories(structured.parent_path());
  std::ofstream out(structured, std::ios::trunc);
  if (!out) throw Error("cannot write report: " + structured.string());
  out << report.to_json() << "\n";
  std::cout << "structured report: " << structured.string() << "\n";
  return 0;
}

int cmd_report(const GlobalOptions& opts) {
  AppConfig cfg = load_app_config(opts);
  StatePaths paths = state_paths(cfg);
  LoadedState state = load_state(cfg, paths);
  const Timestamp now = effective_now(opts, state);

  const auto topics = state.index.topics();
  if (topics.empty() && state.plans.empty() && state.feedback.empty()) {
    std::cout << "no data\n";
    return 0;
  }

  std::cout << "== per-topic crowd scores ==\n";
  for (const auto& [crowd, topic] : topics) {
    TopicSnapshot snap = state.index.snapshot(crowd, topic, now);
    SkylineLevels levels = build_skyline(snap, cfg.axes, cfg.prune, cfg.max_levels);
    std::cout << crowd << " / " << topic.label << ": users=" << snap.users.size() << " levels=[";
    for (std::size_t i = 0; i < levels.levels.size(); ++i) {
      std::cout << (i ? ", " : "") << levels.levels[i].size();
    }
    std::cout << "] pruned=" << levels.pruned.size();
    if (levels.total_points() > 0) {
      const int r = std::min<int>(cfg.representative_count, static_cast<int>(levels.total_points()));
      std::cout << " score=" << fmt_double(score(summarize(levels, snap, r), cfg.weights));
    }
    std::cout << "\n";
  }

  std::cout << "== routing activity ==\n";
  std::cout << "plans: " << state.plans.size() << " asks across "
            << state.index.questions().size() << " questions\n";
  std::cout << "feedback: " << state.feedback.size() << " answers\n";

  // Comparison grid in the shape of the crowd-comparison table; values come
  // from this deployment's logs, not from any external measurement.
  sim::RunMetrics metrics = sim::measure_run(state.plans, state.feedback);
  std::vector<CrowdId> crowds;
  for (const auto& [crowd, policy] : cfg.policies) crowds.push_back(crowd);
  std::cout << "== crowd comparison ==\n";
  auto row = [&](const std::string& label, auto getter) {
    std::cout << std::left << std::setw(26) << label;
    for (const CrowdId& crowd : crowds) {
      auto it = metrics.per_crowd.find(crowd);
      std::cout << std::setw(20) << (it != metrics.per_crowd.end() ? getter(it->second) : "n/a");
    }
    std::cout << "\n";
  };
  std::cout << std::left << std::setw(26) << "metric";
  for (const CrowdId& crowd : crowds) std::cout << std::setw(20) << crowd;
  std::cout << "\n";
  row("responsiveness", [](const sim::CrowdRunMetrics& m) {
    return m.asks > 0 ? fmt_double(100.0 * m.answer_rate()) + "%" : std::string("n/a");
  });
  row("questions answered", [](const sim::CrowdRunMetrics& m) {
    return m.questions_asked > 0 ? fmt_double(100.0 * m.answered_fraction()) + "%" : std::string("n/a");
  });
  row("avg response time", [](const sim::CrowdRunMetrics& m) {
    return m.solicited_answers > 0 ? fmt_double(m.mean_latency_hours()) + "h" : std::string("n/a");
  });
  row("accuracy", [](const sim::CrowdRunMetrics& m) {
    return m.solicited_answers + m.unsolicited_answers > 0 ? fmt_double(100.0 * m.correct_rate()) + "%"
                                                           : std::string("n/a");
  });
  std::cout << std::left << std::setw(26) << "question length";
  for (const CrowdId& crowd : crowds) {
    const auto& tpl = cfg.policies.at(crowd).message_template;
    std::cout << std::setw(20)
              << (tpl.max_length ? std::to_string(*tpl.max_length) + " char max" : "not restricted");
  }
  std::cout << "\n";
  std::cout << std::left << std::setw(26) << "quality control";
  for (const CrowdId& crowd : crowds) {
    const auto& rule = cfg.policies.at(crowd).correctness;
    std::cout << std::setw(20)
              << (rule.mode == CorrectnessRule::Mode::upvote_threshold
                      ? "upvotes >= " + std::to_string(rule.min_upvotes)
                      : "manual labels");
  }
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"crowdstar: social task routing over crowd activity logs"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "config file (INI format)");
  app.add_option("--state-dir", opts.state_dir, "state directory (overrides CROWDSTAR_HOME)");
  std::int64_t now_raw = -1;
  app.add_option("--now", now_raw, "evaluation instant, seconds since epoch (default: latest log timestamp)");
  app.add_option("--format", opts.format, "output format: table|lines")
      ->check(CLI::IsMember({"table", "lines"}));
  app.add_option("--seed", opts.seed, "seed for any randomized choice");
  app.add_option("--jobs", opts.jobs, "parallel workers for independent (crowd, topic) computations");

  auto* ingest_cmd = app.add_subcommand("ingest", "validate event logs and merge them into the state");
  std::vector<std::string> event_paths;
  ingest_cmd->add_option("--events", event_paths, "event log path (repeatable)")->required();

  auto* index_cmd = app.add_subcommand("index", "materialize per-(crowd, topic) feature snapshots");
  std::string snapshot_dir;
  index_cmd->add_option("--snapshot-dir", snapshot_dir, "snapshot output directory");

  auto* skyline_cmd = app.add_subcommand("skyline", "emit the multi-level crowd skyline for a topic");
  std::string crowd, topic;
  int dims = 4, levels = 3;
  skyline_cmd->add_option("--crowd", crowd, "crowd id")->required();
  skyline_cmd->add_option("--topic", topic, "topic label")->required();
  skyline_cmd->add_option("--dims", dims, "2 or 4 axes")->check(CLI::IsMember({2, 4}));
  skyline_cmd->add_option("--levels", levels, "maximum skyline levels");

  auto* summarize_cmd = app.add_subcommand("summarize", "per-crowd summaries and scores for a topic");
  std::string sum_topic, weights_name;
  summarize_cmd->add_option("--topic", sum_topic, "topic label")->required();
  summarize_cmd->add_option("--weights", weights_name, "weights preset: default|survey");

  auto* route_cmd = app.add_subcommand("route", "allocate the budget and compose asks for a question");
  std::string question, route_topic, route_weights;
  int budget = 0;
  bool baseline = false;
  route_cmd->add_option("--question", question, "question text")->required();
  route_cmd->add_option("--topic", route_topic, "topic label")->required();
  route_cmd->add_option("--budget", budget, "number of users to ask");
  route_cmd->add_option("--weights", route_weights, "weights preset: default|survey");
  route_cmd->add_flag("--baseline", baseline, "uniform-random candidate selection (seeded)");

  auto* feedback_cmd = app.add_subcommand("feedback", "record an observed answer for a routed question");
  std::string fb_question, fb_responder, fb_from;
  std::int64_t fb_at = -1;
  std::string fb_correct;
  feedback_cmd->add_option("--question-id", fb_question, "question id from the plan log");
  feedback_cmd->add_option("--responder", fb_responder, "answering user as <crowd>:<handle>");
  feedback_cmd->add_option("--at", fb_at, "answer timestamp (seconds since epoch)");
  feedback_cmd->add_option("--correct", fb_correct, "true|false external judgment")
      ->check(CLI::IsMember({"true", "false"}));
  feedback_cmd->add_option("--from", fb_from, "bulk feedback log to apply");

  auto* simulate_cmd = app.add_subcommand("simulate", "generate synthetic crowds or simulated answers");
  std::string sim_out, respond_to;
  std::int64_t sim_seed = -1;
  simulate_cmd->add_option("--out", sim_out, "output path")->required();
  simulate_cmd->add_option("--respond-to", respond_to, "plan log to answer instead of generating events");
  simulate_cmd->add_option("--sim-seed", sim_seed, "override the [simulator] seed");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "answer rates, latency and accuracy per crowd");
  std::string plan_log, feedback_log, baseline_plan_log, baseline_feedback_log, json_out;
  evaluate_cmd->add_option("--plan-log", plan_log, "plan log (default: state plans)");
  evaluate_cmd->add_option("--feedback-log", feedback_log, "feedback log (default: state feedback)");
  evaluate_cmd->add_option("--baseline-plan-log", baseline_plan_log, "baseline plan log to compare");
  evaluate_cmd->add_option("--baseline-feedback-log", baseline_feedback_log, "baseline feedback log");
  evaluate_cmd->add_option("--json", json_out, "structured report path (default: state evaluation.json)");

  auto* report_cmd =
      app.add_subcommand("report", "state overview: scores, skylines, routing activity, comparison grid");
  for (CLI::App* sub : {ingest_cmd, index_cmd, skyline_cmd, summarize_cmd, route_cmd, feedback_cmd,
                        simulate_cmd, evaluate_cmd, report_cmd}) {
    sub->fallthrough();  // global flags remain valid after the subcommand name
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
        e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  if (now_raw >= 0) opts.now = now_raw;

  try {
    if (ingest_cmd->parsed()) return cmd_ingest(opts, event_paths);
    if (index_cmd->parsed()) return cmd_index(opts, snapshot_dir);
    if (skyline_cmd->parsed()) return cmd_skyline(opts, crowd, topic, dims, levels);
    if (summarize_cmd->parsed()) return cmd_summarize(opts, sum_topic, weights_name);
    if (route_cmd->parsed()) return cmd_route(opts, question, route_topic, budget, route_weights, baseline);
    if (feedback_cmd->parsed()) {
      std::optional<Timestamp> at;
      if (fb_at >= 0) at = fb_at;
      std::optional<bool> correct;
      if (!fb_correct.empty()) correct = fb_correct == "true";
      return cmd_feedback(opts, fb_question, fb_responder, at, correct, fb_from);
    }
    if (simulate_cmd->parsed()) {
      std::optional<std::uint64_t> seed_override;
      if (app.count("--seed") > 0) seed_override = opts.seed;
      if (sim_seed >= 0) seed_override = static_cast<std::uint64_t>(sim_seed);
      return cmd_simulate(opts, sim_out, respond_to, seed_override);
    }
    if (evaluate_cmd->parsed()) {
      return cmd_evaluate(opts, plan_log, feedback_log, baseline_plan_log, baseline_feedback_log, json_out);
    }
    return cmd_report(opts);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
