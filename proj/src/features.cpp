#include "crowdstar/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crowdstar/ingest.hpp"

namespace crowdstar {

namespace {

// 0/0 -> 0: absent evidence contributes nothing.
double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

struct RatioMean {
  double sum = 0.0;
  std::int64_t n = 0;
  void add(double num, double den) {
    if (den > 0.0) {
      sum += num / den;
      n += 1;
    }
  }
  double mean() const { return n > 0 ? sum / static_cast<double>(n) : 0.0; }
};

}  // namespace

void IndexConfig::validate() const {
  if (windows.qualification && *windows.qualification <= 0) throw Error("qualification window must be positive");
  if (windows.interest <= 0 || windows.responsiveness <= 0 || windows.activity <= 0) {
    throw Error("feature windows must be positive");
  }
  if (rt_floor_hours <= 0.0) throw Error("rt_floor_hours must be positive");
  if (a2_cap_hours <= 0.0) throw Error("a2_cap_hours must be positive");
}

SmoothingParams compute_smoothing(const std::map<std::string, MetricCounters>& topic_cells) {
  SmoothingParams s;
  RatioMean ca, op, in, aq, cp;
  for (const auto& [user, m] : topic_cells) {
    ca.add(m.CA, static_cast<double>(m.A));
    op.add(m.OP, static_cast<double>(m.P));
    in.add(static_cast<double>(m.P), static_cast<double>(m.P_all));
    aq.add(static_cast<double>(m.AQ), static_cast<double>(m.PQ));
    cp.add(static_cast<double>(m.CP), static_cast<double>(m.P));
  }
  s.mu_ca = ca.mean();
  s.mu_op = op.mean();
  s.mu_int = in.mean();
  s.mu_aq = aq.mean();
  s.mu_cp = cp.mean();
  s.N = static_cast<std::int64_t>(topic_cells.size());
  return s;
}

double qualification_raw(const MetricCounters& m) {
  return safe_ratio(m.CA, static_cast<double>(m.A)) + safe_ratio(m.OP, static_cast<double>(m.P));
}

double qualification(const MetricCounters& m, const SmoothingParams& s) {
  const double n = static_cast<double>(s.N);
  return safe_ratio(m.CA + s.mu_ca, static_cast<double>(m.A) + n) +
         safe_ratio(m.OP + s.mu_op, static_cast<double>(m.P) + n);
}

double interest(const MetricCounters& m, const SmoothingParams& s) {
  return safe_ratio(static_cast<double>(m.P) + s.mu_int, static_cast<double>(m.P_all) + static_cast<double>(s.N));
}

double responsiveness(const MetricCounters& m, const SmoothingParams& s, const IndexConfig& cfg) {
  const double n = static_cast<double>(s.N);
  double rt_term = 0.0;
  if (m.RT_n > 0) {
    const double rt_mean = m.RT_sum_hours / static_cast<double>(m.RT_n);
    rt_term = 1.0 / std::max(rt_mean, cfg.rt_floor_hours);
  }
  return safe_ratio(static_cast<double>(m.AQ) + s.mu_aq, static_cast<double>(m.PQ) + n) +
         safe_ratio(static_cast<double>(m.CP) + s.mu_cp, static_cast<double>(m.P) + n) + rt_term;
}

double activity_hours(const MetricCounters& m, Timestamp now, const IndexConfig& cfg) {
  if (!m.LQ && !m.LA) return cfg.a2_cap_hours;
  Timestamp last = 0;
  if (m.LQ) last = std::max(last, *m.LQ);
  if (m.LA) last = std::max(last, *m.LA);
  const double elapsed = std::max(0.0, to_hours(now - last));
  return std::min(elapsed, cfg.a2_cap_hours);
}

std::map<CellKey, MetricCounters> accumulate(std::span<const ClassifiedEvent> events,
                                             std::optional<Duration> window, Timestamp now) {
  // Question lookup spans the whole stream: an in-window answer may respond
  // to a question that already slid out of the window.
  struct QuestionInfo {
    Timestamp ts = 0;
    std::optional<std::string> addressed_to;
  };
  std::map<std::string, QuestionInfo> questions;
  for (const ClassifiedEvent& ce : events) {
    if (ce.cls.is_question) {
      questions.emplace(ce.event.event_id, QuestionInfo{ce.event.timestamp, ce.event.addressed_to});
    }
  }

  std::map<CellKey, MetricCounters> cells;
  std::map<std::pair<CrowdId, std::string>, std::int64_t> posts_all_topics;

  for (const ClassifiedEvent& ce : events) {
    const ActivityEvent& e = ce.event;
    if (!in_window(e.timestamp, window, now)) continue;

    if (!ce.synthetic_ask) {
      if (ce.cls.is_post) posts_all_topics[{e.crowd, e.author}] += 1;
      for (const Topic& t : e.topics) {
        MetricCounters& m = cells[CellKey{e.crowd, e.author, t}];
        if (ce.cls.is_post) m.P += 1;
        if (ce.cls.is_original_post) m.OP += ce.weight;
        if (ce.cls.is_conversational_post) m.CP += 1;
        if (ce.cls.is_answer) {
          m.A += 1;
          m.AQ += 1;
          m.LA = m.LA ? std::max(*m.LA, e.timestamp) : e.timestamp;
          if (ce.cls.is_correct_answer) m.CA += ce.weight;
          if (e.in_reply_to) {
            auto q = questions.find(*e.in_reply_to);
            if (q != questions.end() && q->second.addressed_to == e.author) {
              m.RT_sum_hours += to_hours(e.timestamp - q->second.ts);
              m.RT_n += 1;
            }
          }
        }
      }
    }

    if (ce.cls.is_question && e.addressed_to) {
      for (const Topic& t : e.topics) {
        MetricCounters& m = cells[CellKey{e.crowd, *e.addressed_to, t}];
        m.PQ += 1;
        m.LQ = m.LQ ? std::max(*m.LQ, e.timestamp) : e.timestamp;
      }
    }
  }

  for (auto& [key, m] : cells) {
    auto it = posts_all_topics.find({key.crowd, key.user});
    m.P_all = it != posts_all_topics.end() ? it->second : 0;
  }
  return cells;
}

std::map<CellKey, WindowedCounters> accumulate(std::span<const ClassifiedEvent> events,
                                               const IndexConfig& cfg, Timestamp now) {
  auto k1 = accumulate(events, cfg.windows.qualification, now);
  auto k2 = accumulate(events, cfg.windows.interest, now);
  auto a1 = accumulate(events, cfg.windows.responsiveness, now);
  auto a2 = accumulate(events, cfg.windows.activity, now);

  std::map<CellKey, WindowedCounters> out;
  auto fold = [&out](std::map<CellKey, MetricCounters>& part, MetricCounters WindowedCounters::*slot) {
    for (auto& [key, m] : part) out[key].*slot = std::move(m);
  };
  fold(k1, &WindowedCounters::qualification);
  fold(k2, &WindowedCounters::interest);
  fold(a1, &WindowedCounters::responsiveness);
  fold(a2, &WindowedCounters::activity);
  return out;
}

void normalize(std::map<std::string, FeatureVector>& features) {
  if (features.empty()) return;
  constexpr int kAxes = 4;
  double lo[kAxes], hi[kAxes];
  auto axis = [](const FeatureVector& f, int i) {
    switch (i) {
      case 0: return f.K1;
      case 1: return f.K2;
      case 2: return f.A1;
      default: return f.A2;
    }
  };
  for (int i = 0; i < kAxes; ++i) {
    lo[i] = std::numeric_limits<double>::infinity();
    hi[i] = -std::numeric_limits<double>::infinity();
  }
  for (const auto& [user, f] : features) {
    for (int i = 0; i < kAxes; ++i) {
      lo[i] = std::min(lo[i], axis(f, i));
      hi[i] = std::max(hi[i], axis(f, i));
    }
  }
  for (auto& [user, f] : features) {
    double scaled[kAxes];
    for (int i = 0; i < kAxes; ++i) {
      scaled[i] = hi[i] > lo[i] ? (axis(f, i) - lo[i]) / (hi[i] - lo[i]) : 0.5;
    }
    f.K1n = scaled[0];
    f.K2n = scaled[1];
    f.A1n = scaled[2];
    f.A2n = scaled[3];
  }
}

}  // namespace crowdstar
