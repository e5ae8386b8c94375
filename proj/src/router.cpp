#include "crowdstar/router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace crowdstar {

namespace {

using nlohmann::json;

// Tolerance for float comparisons inside the budget rule; wide enough to
// absorb quota rounding, far below any meaningful score difference.
constexpr double kSplitEpsilon = 1e-9;

std::string replace_all(std::string text, std::string_view placeholder, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace

std::string_view to_string(SplitMode mode) {
  return mode == SplitMode::equal_split ? "equal_split" : "proportional";
}

BudgetSplit split_budget_with_mode(const std::map<CrowdId, double>& scores, int budget) {
  if (scores.empty()) throw Error("no crowds to split the budget over");
  if (budget < 1) throw Error("budget must be >= 1");
  double max_score = 0.0;
  double min_score = std::numeric_limits<double>::infinity();
  for (const auto& [crowd, s] : scores) {
    if (s < 0.0) throw Error("crowd scores must be non-negative");
    max_score = std::max(max_score, s);
    min_score = std::min(min_score, s);
  }
  if (max_score <= 0.0) throw Error("no viable crowd: all scores are zero");

  BudgetSplit out;
  // Mode rule: equal split when the relative difference is under 25%. The
  // comparison carries a small band so the decision is invariant under
  // rescaling all scores (quota arithmetic rounds differently otherwise).
  const double rel_diff = (max_score - min_score) / max_score;
  out.mode = rel_diff < 0.25 - kSplitEpsilon ? SplitMode::equal_split : SplitMode::proportional;

  // Higher score first, crowd id breaking ties; used by both remainders.
  std::vector<std::pair<CrowdId, double>> ranked(scores.begin(), scores.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  if (out.mode == SplitMode::equal_split) {
    const int k = static_cast<int>(ranked.size());
    const int base = budget / k;
    int remainder = budget % k;
    for (const auto& [crowd, s] : ranked) {
      out.allocations[crowd] = base + (remainder > 0 ? 1 : 0);
      if (remainder > 0) remainder -= 1;
    }
    return out;
  }

  double total = 0.0;
  for (const auto& [crowd, s] : scores) total += s;
  std::vector<std::tuple<std::int64_t, double, CrowdId>> remainders;  // (snapped fraction, score, crowd)
  int assigned = 0;
  for (const auto& [crowd, s] : ranked) {
    const double quota = static_cast<double>(budget) * s / total;
    const int floor_units = static_cast<int>(std::floor(quota));
    out.allocations[crowd] = floor_units;
    assigned += floor_units;
    // Fractions are snapped to the tolerance grid before ranking: exact
    // mathematical ties stay ties after rescaling, and the comparison below
    // remains a strict weak ordering.
    const double fraction = quota - std::floor(quota);
    remainders.emplace_back(static_cast<std::int64_t>(std::llround(fraction / kSplitEpsilon)), s, crowd);
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) > std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  for (int i = 0; assigned < budget; ++i, ++assigned) {
    out.allocations[std::get<2>(remainders[static_cast<std::size_t>(i) % remainders.size()])] += 1;
  }
  return out;
}

std::map<CrowdId, int> split_budget(const std::map<CrowdId, double>& scores, int budget) {
  return split_budget_with_mode(scores, budget).allocations;
}

std::vector<UserId> order_candidates(const SkylineLevels& levels, int allocation,
                                     const TopicSnapshot& snapshot, double activity_gate_hours) {
  std::vector<UserId> out;
  if (allocation <= 0) return out;

  // Availability axis: A1n in the 4-axis model, the collapsed A otherwise.
  std::size_t avail_axis = 0;
  if (!levels.dims.empty()) {
    auto it = std::find(levels.dims.begin(), levels.dims.end(), "A1n");
    if (it == levels.dims.end()) it = std::find(levels.dims.begin(), levels.dims.end(), "A");
    if (it == levels.dims.end()) throw Error("skyline has no availability axis");
    avail_axis = static_cast<std::size_t>(it - levels.dims.begin());
  }

  for (const auto& level : levels.levels) {
    if (static_cast<int>(out.size()) >= allocation) break;
    std::vector<const CandidatePoint*> eligible;
    for (const CandidatePoint& p : level) {
      auto uf = snapshot.users.find(p.user.handle);
      if (uf == snapshot.users.end()) continue;
      if (uf->second.features.A2 < activity_gate_hours) continue;  // resting
      eligible.push_back(&p);
    }
    std::sort(eligible.begin(), eligible.end(), [avail_axis](const CandidatePoint* a, const CandidatePoint* b) {
      if (a->coords[avail_axis] != b->coords[avail_axis]) {
        return a->coords[avail_axis] < b->coords[avail_axis];
      }
      return a->user < b->user;
    });

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(eligible.size());
    const std::ptrdiff_t mid = n / 2;
    for (std::ptrdiff_t step = 0; step < n && static_cast<int>(out.size()) < allocation; ++step) {
      // mid, mid-1, mid+1, mid-2, mid+2, ...
      const std::ptrdiff_t offset = (step + 1) / 2;
      const std::ptrdiff_t idx = (step % 2 == 1) ? mid - offset : mid + offset;
      if (idx < 0 || idx >= n) continue;
      out.push_back(eligible[static_cast<std::size_t>(idx)]->user);
    }
  }
  return out;
}

MessageTooLong::MessageTooLong(std::size_t overflow_chars, std::size_t max_length)
    : Error("composed message exceeds max length " + std::to_string(max_length) + " by " +
            std::to_string(overflow_chars) + " characters"),
      overflow(overflow_chars) {}

std::string compose_ask(const QuestionTask& task, const UserId& user, const CrowdPolicy& policy) {
  const AskTemplate& tpl = policy.message_template;
  std::string message;
  if (tpl.strategy != AskStrategy::plain && !tpl.prefix.empty()) {
    std::string prefix = replace_all(tpl.prefix, "<handle>", user.handle);
    prefix = replace_all(prefix, "<topic>", task.topic.label);
    message += prefix;
    message += ' ';
  }
  message += task.text;
  if (tpl.strategy != AskStrategy::plain && !tpl.suffix.empty()) {
    std::string suffix = replace_all(tpl.suffix, "<handle>", user.handle);
    suffix = replace_all(suffix, "<topic>", task.topic.label);
    message += ' ';
    message += suffix;
  }
  if (tpl.max_length && message.size() > *tpl.max_length) {
    throw MessageTooLong(message.size() - *tpl.max_length, *tpl.max_length);
  }
  return message;
}

RoutingPlan route(const QuestionTask& task, const std::map<CrowdId, TopicSnapshot>& snapshots,
                  const std::map<CrowdId, CrowdPolicy>& policies, const RouterConfig& cfg,
                  Timestamp now) {
  if (task.budget < 1) throw Error("budget must be >= 1");
  if (task.text.empty()) throw Error("question text must not be empty");

  RoutingPlan plan;
  plan.question_id = task.question_id;
  plan.topic = task.topic;

  // Balanced representative counts: every crowd summarizes over the same R.
  std::map<CrowdId, SkylineLevels> levels;
  int effective_r = cfg.representative_count;
  for (const auto& [crowd, snap] : snapshots) {
    SkylineLevels l = build_skyline(snap, cfg.axes, cfg.prune, cfg.max_levels);
    const auto available = static_cast<int>(l.total_points());
    if (available > 0) effective_r = std::min(effective_r, available);
    levels.emplace(crowd, std::move(l));
  }
  effective_r = std::max(effective_r, 1);

  for (const auto& [crowd, snap] : snapshots) {
    const SkylineLevels& l = levels.at(crowd);
    plan.scores[crowd] = l.total_points() == 0 ? 0.0 : score(summarize(l, snap, effective_r), cfg.weights);
  }

  BudgetSplit split = split_budget_with_mode(plan.scores, task.budget);
  plan.mode = split.mode;
  plan.allocations = split.allocations;

  for (const auto& [crowd, allocation] : plan.allocations) {
    if (allocation == 0) continue;
    const TopicSnapshot& snap = snapshots.at(crowd);
    const CrowdPolicy& policy = policies.at(crowd);
    std::vector<UserId> ordered = order_candidates(levels.at(crowd), allocation, snap, cfg.activity_gate_hours);
    int issued = 0;
    for (const UserId& user : ordered) {
      if (issued >= allocation) break;
      try {
        std::string message = compose_ask(task, user, policy);
        plan.asks.push_back(Ask{user, std::move(message), now});
        issued += 1;
      } catch (const MessageTooLong&) {
        // Oversized for this crowd's limit; try the next candidate.
      }
    }
    if (issued < allocation) plan.shortfall[crowd] = allocation - issued;
  }
  return plan;
}

void issue_plan(FeatureIndex& index, const QuestionTask& task, const RoutingPlan& plan) {
  for (const Ask& ask : plan.asks) {
    index.record_ask(plan.question_id, task.text, ask.user, plan.topic, ask.issued_at);
  }
}

std::vector<PlanLogRecord> plan_records(const QuestionTask& task, const RoutingPlan& plan) {
  std::vector<PlanLogRecord> out;
  out.reserve(plan.asks.size());
  for (const Ask& ask : plan.asks) {
    PlanLogRecord r;
    r.question_id = plan.question_id;
    r.topic = plan.topic;
    r.text = task.text;
    r.crowd = ask.user.crowd;
    r.user = ask.user.handle;
    r.issued_at = ask.issued_at;
    r.message = ask.message;
    r.budget = task.budget;
    r.mode = std::string(to_string(plan.mode));
    out.push_back(std::move(r));
  }
  return out;
}

std::string to_json_line(const PlanLogRecord& r) {
  json j;
  j["question_id"] = r.question_id;
  j["topic"] = r.topic.label;
  j["text"] = r.text;
  j["crowd"] = r.crowd;
  j["user"] = r.user;
  j["issued_at"] = r.issued_at;
  j["message"] = r.message;
  j["budget"] = r.budget;
  j["mode"] = r.mode;
  return j.dump();
}

std::string to_json_line(const FeedbackLogRecord& r) {
  json j;
  j["question_id"] = r.question_id;
  j["crowd"] = r.crowd;
  j["responder"] = r.responder;
  j["answered_at"] = r.answered_at;
  if (r.correct) j["correct"] = *r.correct;
  j["solicited"] = r.solicited;
  return j.dump();
}

PlanLogRecord parse_plan_record(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error("malformed plan record: " + line);
  PlanLogRecord r;
  try {
    r.question_id = j.at("question_id").get<std::string>();
    r.topic = Topic::of(j.at("topic").get<std::string>());
    r.text = j.value("text", std::string{});
    r.crowd = j.at("crowd").get<std::string>();
    r.user = j.at("user").get<std::string>();
    r.issued_at = j.at("issued_at").get<Timestamp>();
    r.message = j.value("message", std::string{});
    r.budget = j.value("budget", 0);
    r.mode = j.value("mode", std::string{});
  } catch (const json::exception& e) {
    throw Error(std::string("malformed plan record: ") + e.what());
  }
  return r;
}

FeedbackLogRecord parse_feedback_record(const std::string& line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error("malformed feedback record: " + line);
  FeedbackLogRecord r;
  try {
    r.question_id = j.at("question_id").get<std::string>();
    r.crowd = j.at("crowd").get<std::string>();
    r.responder = j.at("responder").get<std::string>();
    r.answered_at = j.at("answered_at").get<Timestamp>();
    if (j.contains("correct") && !j.at("correct").is_null()) r.correct = j.at("correct").get<bool>();
    r.solicited = j.value("solicited", false);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed feedback record: ") + e.what());
  }
  return r;
}

}  // namespace crowdstar
