#include "crowdstar/storage.hpp"

#include <algorithm>
#include <fstream>

#include "crowdstar/ingest.hpp"
#include "json.hpp"

namespace crowdstar {

namespace {

using nlohmann::json;

json counters_to_json(const MetricCounters& m) {
  json j;
  j["A"] = m.A;
  j["CA"] = m.CA;
  j["P"] = m.P;
  j["P_all"] = m.P_all;
  j["OP"] = m.OP;
  j["CP"] = m.CP;
  j["PQ"] = m.PQ;
  j["AQ"] = m.AQ;
  j["RT_sum_hours"] = m.RT_sum_hours;
  j["RT_n"] = m.RT_n;
  if (m.LQ) j["LQ"] = *m.LQ;
  if (m.LA) j["LA"] = *m.LA;
  return j;
}

MetricCounters counters_from_json(const json& j) {
  MetricCounters m;
  m.A = j.value("A", std::int64_t{0});
  m.CA = j.value("CA", 0.0);
  m.P = j.value("P", std::int64_t{0});
  m.P_all = j.value("P_all", std::int64_t{0});
  m.OP = j.value("OP", 0.0);
  m.CP = j.value("CP", std::int64_t{0});
  m.PQ = j.value("PQ", std::int64_t{0});
  m.AQ = j.value("AQ", std::int64_t{0});
  m.RT_sum_hours = j.value("RT_sum_hours", 0.0);
  m.RT_n = j.value("RT_n", std::int64_t{0});
  if (j.contains("LQ")) m.LQ = j.at("LQ").get<Timestamp>();
  if (j.contains("LA")) m.LA = j.at("LA").get<Timestamp>();
  return m;
}

json smoothing_to_json(const SmoothingParams& s) {
  json j;
  j["mu_ca"] = s.mu_ca;
  j["mu_op"] = s.mu_op;
  j["mu_int"] = s.mu_int;
  j["mu_aq"] = s.mu_aq;
  j["mu_cp"] = s.mu_cp;
  j["N"] = s.N;
  return j;
}

SmoothingParams smoothing_from_json(const json& j) {
  SmoothingParams s;
  s.mu_ca = j.value("mu_ca", 0.0);
  s.mu_op = j.value("mu_op", 0.0);
  s.mu_int = j.value("mu_int", 0.0);
  s.mu_aq = j.value("mu_aq", 0.0);
  s.mu_cp = j.value("mu_cp", 0.0);
  s.N = j.value("N", std::int64_t{0});
  return s;
}

}  // namespace

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  std::ifstream in(path);
  if (!in) return lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

void append_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  if (lines.empty()) return;
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open for append: " + path.string());
  for (const std::string& line : lines) out << line << '\n';
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open for write: " + path.string());
  for (const std::string& line : lines) out << line << '\n';
}

std::vector<PlanLogRecord> load_plan_log(const std::filesystem::path& path) {
  std::vector<PlanLogRecord> out;
  for (const std::string& line : read_lines(path)) out.push_back(parse_plan_record(line));
  return out;
}

std::vector<FeedbackLogRecord> load_feedback_log(const std::filesystem::path& path) {
  std::vector<FeedbackLogRecord> out;
  for (const std::string& line : read_lines(path)) out.push_back(parse_feedback_record(line));
  return out;
}

LoadedState load_state(const AppConfig& cfg, const StatePaths& paths) {
  LoadedState state{FeatureIndex(cfg.index, cfg.policies), {}, {}, {}, 0};

  if (std::filesystem::exists(paths.events())) {
    std::ifstream in(paths.events());
    if (!in) throw Error("cannot open event log: " + paths.events().string());
    IngestResult result = ingest_lines(in, IngestOptions{cfg.policies, cfg.topic_universe});
    state.ingest_report = result.report;
    if (result.report.time_range) {
      state.latest_timestamp = std::max(state.latest_timestamp, result.report.time_range->second);
    }
    state.index.add_events(result.events);
  }

  state.plans = load_plan_log(paths.plans());
  for (const PlanLogRecord& r : state.plans) {
    state.index.record_ask(r.question_id, r.text, UserId{r.crowd, r.user}, r.topic, r.issued_at);
    state.latest_timestamp = std::max(state.latest_timestamp, r.issued_at);
  }

  state.feedback = load_feedback_log(paths.feedback());
  for (const FeedbackLogRecord& r : state.feedback) {
    FeedbackEvent fb{r.question_id, UserId{r.crowd, r.responder}, r.answered_at, r.correct};
    state.index.apply_feedback(fb);
    state.latest_timestamp = std::max(state.latest_timestamp, r.answered_at);
  }
  return state;
}

std::string snapshot_file_name(const CrowdId& crowd, const Topic& topic) {
  auto sanitize = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      out.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_');
    }
    return out;
  };
  return sanitize(crowd) + "__" + sanitize(topic.label) + ".json";
}

void write_snapshot(const std::filesystem::path& path, const TopicSnapshot& snap) {
  json j;
  j["crowd"] = snap.crowd;
  j["topic"] = snap.topic.label;
  j["computed_at"] = snap.computed_at;
  j["knowledge_as_of"] = snap.knowledge_as_of;
  j["stale"] = snap.stale;
  j["smoothing"]["qualification"] = smoothing_to_json(snap.smoothing_qualification);
  j["smoothing"]["interest"] = smoothing_to_json(snap.smoothing_interest);
  j["smoothing"]["responsiveness"] = smoothing_to_json(snap.smoothing_responsiveness);
  json users = json::object();
  for (const auto& [handle, uf] : snap.users) {
    json u;
    u["counters"]["qualification"] = counters_to_json(uf.counters.qualification);
    u["counters"]["interest"] = counters_to_json(uf.counters.interest);
    u["counters"]["responsiveness"] = counters_to_json(uf.counters.responsiveness);
    u["counters"]["activity"] = counters_to_json(uf.counters.activity);
    json f;
    f["K1"] = uf.features.K1;
    f["K2"] = uf.features.K2;
    f["A1"] = uf.features.A1;
    f["A2"] = uf.features.A2;
    f["K1n"] = uf.features.K1n;
    f["K2n"] = uf.features.K2n;
    f["A1n"] = uf.features.A1n;
    f["A2n"] = uf.features.A2n;
    f["computed_at"] = uf.features.computed_at;
    u["features"] = std::move(f);
    users[handle] = std::move(u);
  }
  j["users"] = std::move(users);

  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write snapshot: " + path.string());
  out << j.dump(2) << '\n';
}

TopicSnapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read snapshot: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error("malformed snapshot: " + path.string());
  TopicSnapshot snap;
  snap.crowd = j.at("crowd").get<std::string>();
  snap.topic = Topic::of(j.at("topic").get<std::string>());
  snap.computed_at = j.value("computed_at", Timestamp{0});
  snap.knowledge_as_of = j.value("knowledge_as_of", Timestamp{0});
  snap.stale = j.value("stale", false);
  if (j.contains("smoothing")) {
    const json& s = j.at("smoothing");
    if (s.contains("qualification")) snap.smoothing_qualification = smoothing_from_json(s.at("qualification"));
    if (s.contains("interest")) snap.smoothing_interest = smoothing_from_json(s.at("interest"));
    if (s.contains("responsiveness")) snap.smoothing_responsiveness = smoothing_from_json(s.at("responsiveness"));
  }
  if (j.contains("users")) {
    for (const auto& [handle, u] : j.at("users").items()) {
      UserFeatures uf;
      if (u.contains("counters")) {
        const json& c = u.at("counters");
        if (c.contains("qualification")) uf.counters.qualification = counters_from_json(c.at("qualification"));
        if (c.contains("interest")) uf.counters.interest = counters_from_json(c.at("interest"));
        if (c.contains("responsiveness")) uf.counters.responsiveness = counters_from_json(c.at("responsiveness"));
        if (c.contains("activity")) uf.counters.activity = counters_from_json(c.at("activity"));
      }
      if (u.contains("features")) {
        const json& f = u.at("features");
        uf.features.K1 = f.value("K1", 0.0);
        uf.features.K2 = f.value("K2", 0.0);
        uf.features.A1 = f.value("A1", 0.0);
        uf.features.A2 = f.value("A2", 0.0);
        uf.features.K1n = f.value("K1n", 0.0);
        uf.features.K2n = f.value("K2n", 0.0);
        uf.features.A1n = f.value("A1n", 0.0);
        uf.features.A2n = f.value("A2n", 0.0);
        uf.features.computed_at = f.value("computed_at", Timestamp{0});
      }
      snap.users.emplace(handle, std::move(uf));
    }
  }
  return snap;
}

}  // namespace crowdstar
