#include "crowdstar/index.hpp"

#include <algorithm>

#include "crowdstar/ingest.hpp"

namespace crowdstar {

namespace {

std::string ask_event_id(const std::string& question_id, const UserId& target) {
  // The same handle may exist in several crowds; the id must carry both.
  return question_id + "@" + to_string(target);
}

}  // namespace

FeatureIndex::FeatureIndex(IndexConfig cfg, std::map<CrowdId, CrowdPolicy> policies)
    : cfg_(cfg), policies_(std::move(policies)) {
  cfg_.validate();
  for (const auto& [id, policy] : policies_) {
    validate_policy(policy);
    if (id != policy.crowd) throw Error("policy map key '" + id + "' does not match policy crowd '" + policy.crowd + "'");
  }
}

const CrowdPolicy& FeatureIndex::policy_for(const CrowdId& crowd) const {
  auto it = policies_.find(crowd);
  if (it == policies_.end()) throw Error("no policy for crowd '" + crowd + "'");
  return it->second;
}

void FeatureIndex::insert_event(ClassifiedEvent event) {
  if (!seen_event_ids_.insert(event.event.event_id).second) return;
  const ActivityEvent& e = event.event;
  if (!event.synthetic_ask && event.cls.is_post) {
    auto& times = post_times_[{e.crowd, e.author}];
    times.insert(std::upper_bound(times.begin(), times.end(), e.timestamp), e.timestamp);
  }
  for (const Topic& t : e.topics) {
    topics_[TopicKey{e.crowd, t}].events.push_back(event);
  }
}

void FeatureIndex::add_events(std::span<const ClassifiedEvent> events) {
  for (const ClassifiedEvent& e : events) insert_event(e);
}

std::int64_t FeatureIndex::posts_in_window(const CrowdId& crowd, const std::string& user,
                                           std::optional<Duration> window, Timestamp now) const {
  auto it = post_times_.find({crowd, user});
  if (it == post_times_.end()) return 0;
  const auto& times = it->second;
  auto hi = std::upper_bound(times.begin(), times.end(), now);
  auto lo = window ? std::upper_bound(times.begin(), times.end(), now - *window) : times.begin();
  return hi > lo ? static_cast<std::int64_t>(hi - lo) : 0;
}

std::map<std::string, MetricCounters> FeatureIndex::topic_cells(const TopicState& state,
                                                                std::optional<Duration> window,
                                                                Timestamp now) const {
  auto cells = accumulate(state.events, window, now);
  std::map<std::string, MetricCounters> out;
  for (auto& [key, m] : cells) {
    // The topic event list carries no off-topic posts, so P_all must come
    // from the per-user post timeline instead.
    m.P_all = posts_in_window(key.crowd, key.user, window, now);
    out.emplace(key.user, std::move(m));
  }
  return out;
}

void FeatureIndex::refresh_knowledge(const TopicKey&, TopicState& state, Timestamp now) {
  KnowledgeCache cache;
  cache.tick_at = now;
  cache.cells_qualification = topic_cells(state, cfg_.windows.qualification, now);
  cache.cells_interest = topic_cells(state, cfg_.windows.interest, now);
  cache.smoothing_qualification = compute_smoothing(cache.cells_qualification);
  cache.smoothing_interest = compute_smoothing(cache.cells_interest);
  static const MetricCounters kEmpty{};
  std::set<std::string> users;
  for (const auto& [user, m] : cache.cells_qualification) users.insert(user);
  for (const auto& [user, m] : cache.cells_interest) users.insert(user);
  for (const std::string& user : users) {
    auto q = cache.cells_qualification.find(user);
    auto i = cache.cells_interest.find(user);
    const MetricCounters& mq = q != cache.cells_qualification.end() ? q->second : kEmpty;
    const MetricCounters& mi = i != cache.cells_interest.end() ? i->second : kEmpty;
    cache.raw[user] = {qualification(mq, cache.smoothing_qualification),
                       interest(mi, cache.smoothing_interest)};
  }
  state.knowledge = std::move(cache);
}

void FeatureIndex::daily_tick(Timestamp now) {
  for (auto& [key, state] : topics_) refresh_knowledge(key, state, now);
}

void FeatureIndex::record_ask(const std::string& question_id, const std::string& question_text,
                              const UserId& target, const Topic& topic, Timestamp issued_at) {
  const CrowdPolicy& policy = policy_for(target.crowd);
  QuestionRecord& record = questions_[question_id];
  if (record.question_id.empty()) {
    record.question_id = question_id;
    record.topic = topic;
    record.text = question_text;
  }
  record.asks[target] = issued_at;

  ActivityEvent ask;
  ask.event_id = ask_event_id(question_id, target);
  ask.crowd = target.crowd;
  ask.author = "=router=";
  ask.topics = {topic};
  ask.timestamp = issued_at;
  ask.kind = EventKind::question;
  ask.conversational = true;
  ask.addressed_to = target.handle;
  ask.text = question_text;

  ClassifiedEvent ce;
  ce.cls = classify_event(ask, policy);
  ce.weight = event_weight(ask, policy);
  ce.event = std::move(ask);
  ce.synthetic_ask = true;
  insert_event(std::move(ce));
  topics_[TopicKey{target.crowd, topic}].stale = true;
}

FeatureIndex::FeedbackOutcome FeatureIndex::apply_feedback(const FeedbackEvent& feedback) {
  FeedbackOutcome outcome;
  auto it = questions_.find(feedback.question_id);
  if (it == questions_.end()) {
    outcome.reason = "unknown_question";
    return outcome;
  }
  QuestionRecord& record = it->second;
  outcome.solicited = record.asks.contains(feedback.responder);
  if (!record.responders.insert(feedback.responder).second) {
    outcome.duplicate = true;
    return outcome;
  }
  const CrowdPolicy& policy = policy_for(feedback.responder.crowd);

  ActivityEvent answer;
  answer.event_id = ask_event_id(feedback.question_id, feedback.responder) + "#a";
  answer.crowd = feedback.responder.crowd;
  answer.author = feedback.responder.handle;
  answer.topics = {record.topic};
  answer.timestamp = feedback.answered_at;
  answer.kind = EventKind::answer;
  answer.conversational = policy.answers_are_conversational;
  // Solicited answers reference the directed ask so response latency can be
  // paired; unsolicited ones reference the bare question id (unknown to the
  // accumulator, so AQ counts but RT does not).
  answer.in_reply_to = outcome.solicited ? ask_event_id(feedback.question_id, feedback.responder)
                                         : feedback.question_id;
  answer.correct_label = feedback.correct;

  ClassifiedEvent ce;
  ce.cls = classify_event(answer, policy);
  ce.weight = event_weight(answer, policy);
  ce.event = std::move(answer);
  insert_event(std::move(ce));
  topics_[TopicKey{feedback.responder.crowd, record.topic}].stale = true;
  outcome.accepted = true;
  return outcome;
}

TopicSnapshot FeatureIndex::snapshot(const CrowdId& crowd, const Topic& topic, Timestamp now) {
  TopicSnapshot snap;
  snap.crowd = crowd;
  snap.topic = topic;
  snap.computed_at = now;

  auto it = topics_.find(TopicKey{crowd, topic});
  if (it == topics_.end()) return snap;
  TopicState& state = it->second;
  if (!state.knowledge) refresh_knowledge(TopicKey{crowd, topic}, state, now);
  const KnowledgeCache& knowledge = *state.knowledge;
  snap.knowledge_as_of = knowledge.tick_at;
  snap.smoothing_qualification = knowledge.smoothing_qualification;
  snap.smoothing_interest = knowledge.smoothing_interest;

  auto a1_cells = topic_cells(state, cfg_.windows.responsiveness, now);
  auto a2_cells = topic_cells(state, cfg_.windows.activity, now);
  snap.smoothing_responsiveness = compute_smoothing(a1_cells);

  static const MetricCounters kEmpty{};
  std::set<std::string> users;
  for (const auto& [user, m] : knowledge.raw) users.insert(user);
  for (const auto& [user, m] : a1_cells) users.insert(user);
  for (const auto& [user, m] : a2_cells) users.insert(user);

  std::map<std::string, FeatureVector> features;
  for (const std::string& user : users) {
    FeatureVector f;
    if (auto raw = knowledge.raw.find(user); raw != knowledge.raw.end()) {
      f.K1 = raw->second.first;
      f.K2 = raw->second.second;
    }
    auto a1 = a1_cells.find(user);
    auto a2 = a2_cells.find(user);
    f.A1 = responsiveness(a1 != a1_cells.end() ? a1->second : kEmpty, snap.smoothing_responsiveness, cfg_);
    f.A2 = activity_hours(a2 != a2_cells.end() ? a2->second : kEmpty, now, cfg_);
    f.computed_at = now;
    features.emplace(user, f);
  }
  normalize(features);

  for (const std::string& user : users) {
    UserFeatures uf;
    uf.features = features.at(user);
    if (auto q = knowledge.cells_qualification.find(user); q != knowledge.cells_qualification.end()) {
      uf.counters.qualification = q->second;
    }
    if (auto i = knowledge.cells_interest.find(user); i != knowledge.cells_interest.end()) {
      uf.counters.interest = i->second;
    }
    if (auto a1 = a1_cells.find(user); a1 != a1_cells.end()) uf.counters.responsiveness = a1->second;
    if (auto a2 = a2_cells.find(user); a2 != a2_cells.end()) uf.counters.activity = a2->second;
    snap.users.emplace(user, std::move(uf));
  }

  snap.stale = state.stale;
  state.stale = false;  // this snapshot is the fresh view
  return snap;
}

bool FeatureIndex::is_stale(const CrowdId& crowd, const Topic& topic) const {
  auto it = topics_.find(TopicKey{crowd, topic});
  return it != topics_.end() && it->second.stale;
}

std::vector<std::pair<CrowdId, Topic>> FeatureIndex::topics() const {
  std::vector<std::pair<CrowdId, Topic>> out;
  out.reserve(topics_.size());
  for (const auto& [key, state] : topics_) out.emplace_back(key.crowd, key.topic);
  return out;
}

FeatureIndex::FeedbackOutcome apply_feedback(FeatureIndex& index, const FeedbackEvent& feedback) {
  return index.apply_feedback(feedback);
}

}  // namespace crowdstar
