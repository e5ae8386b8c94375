#include "crowdstar/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace crowdstar {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

}  // namespace

IniFile IniFile::parse(std::istream& in, const std::string& origin) {
  IniFile file;
  file.origin_ = origin;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no += 1;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#' || stripped.front() == ';') continue;
    if (stripped.front() == '[') {
      if (stripped.back() != ']') {
        throw Error(origin + ":" + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(std::string_view(stripped).substr(1, stripped.size() - 2));
      if (section.empty()) {
        throw Error(origin + ":" + std::to_string(line_no) + ": empty section name");
      }
      if (file.sections_.contains(section)) {
        throw Error(origin + ":" + std::to_string(line_no) + ": duplicate section [" + section + "]");
      }
      file.sections_[section];
      continue;
    }
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw Error(origin + ":" + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(stripped).substr(0, eq));
    const std::string value = trim(std::string_view(stripped).substr(eq + 1));
    if (key.empty()) throw Error(origin + ":" + std::to_string(line_no) + ": empty key");
    if (section.empty()) {
      throw Error(origin + ":" + std::to_string(line_no) + ": key outside of any [section]");
    }
    auto [it, inserted] = file.sections_[section].emplace(key, value);
    if (!inserted) {
      throw Error(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key + "' in [" + section + "]");
    }
  }
  return file;
}

IniFile IniFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  return parse(in, path.string());
}

std::optional<std::string> IniFile::take(const std::string& section, const std::string& key) {
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return std::nullopt;
  auto kit = sit->second.find(key);
  if (kit == sit->second.end()) return std::nullopt;
  std::string value = kit->second;
  sit->second.erase(kit);
  if (sit->second.empty()) sections_.erase(sit);
  return value;
}

bool IniFile::has_section(const std::string& section) const { return sections_.contains(section); }

std::vector<std::string> IniFile::sections_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [name, keys] : sections_) {
    if (name.rfind(prefix, 0) == 0) out.push_back(name);
  }
  return out;
}

void IniFile::drop_section(const std::string& section) { sections_.erase(section); }

void IniFile::ensure_consumed() const {
  std::ostringstream leftovers;
  for (const auto& [section, keys] : sections_) {
    for (const auto& [key, value] : keys) leftovers << " [" << section << "]" << key;
    if (keys.empty()) leftovers << " [" << section << "]";
  }
  const std::string text = leftovers.str();
  if (!text.empty()) throw Error(origin_ + ": unknown config keys:" + text);
}

bool parse_bool(const std::string& value, const std::string& context) {
  if (value == "true" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "no" || value == "off") return false;
  throw Error(context + ": expected a boolean, got '" + value + "'");
}

std::int64_t parse_int(const std::string& value, const std::string& context) {
  std::int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(context + ": expected an integer, got '" + value + "'");
  }
  return out;
}

double parse_double(const std::string& value, const std::string& context) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw Error("");
    return out;
  } catch (...) {
    throw Error(context + ": expected a number, got '" + value + "'");
  }
}

std::optional<Duration> parse_window(const std::string& value, const std::string& context) {
  if (value == "forever" || value == "inf") return std::nullopt;
  if (value.empty()) throw Error(context + ": empty duration");
  Duration scale = 1;
  std::string digits = value;
  switch (value.back()) {
    case 'd': scale = kSecondsPerDay; digits.pop_back(); break;
    case 'h': scale = kSecondsPerHour; digits.pop_back(); break;
    case 'm': scale = 60; digits.pop_back(); break;
    case 's': scale = 1; digits.pop_back(); break;
    default: break;
  }
  const Duration n = parse_int(trim(digits), context);
  if (n <= 0) throw Error(context + ": duration must be positive");
  return n * scale;
}

std::vector<std::string> parse_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    std::string entry = trim(item);
    if (!entry.empty()) out.push_back(std::move(entry));
  }
  return out;
}

RouterConfig AppConfig::router_config() const {
  RouterConfig cfg;
  cfg.weights = weights;
  cfg.representative_count = representative_count;
  cfg.activity_gate_hours = activity_gate_hours;
  cfg.prune = prune;
  cfg.axes = axes;
  cfg.max_levels = max_levels;
  return cfg;
}

AppConfig default_config() {
  AppConfig cfg;
  cfg.simulator = sim::default_sim_config();
  cfg.topic_universe = cfg.simulator.topics;
  cfg.policies.emplace("twitter-like", twitter_like_policy("twitter-like"));
  cfg.policies.emplace("quora-like", quora_like_policy("quora-like"));
  return cfg;
}

namespace {

std::set<EventKind> parse_kind_set(const std::string& value, const std::string& context) {
  std::set<EventKind> out;
  for (const std::string& item : parse_list(value)) {
    auto kind = parse_event_kind(item);
    if (!kind) throw Error(context + ": unknown event kind '" + item + "'");
    out.insert(*kind);
  }
  return out;
}

CrowdPolicy parse_crowd_policy(IniFile& ini, const std::string& section, const CrowdId& crowd,
                               const std::string& style) {
  CrowdPolicy policy;
  if (style == "twitter") {
    policy = twitter_like_policy(crowd);
  } else if (style == "quora") {
    policy = quora_like_policy(crowd);
  } else {
    throw Error("[" + section + "] style must be 'twitter' or 'quora', got '" + style + "'");
  }
  if (auto v = ini.take(section, "correctness")) {
    if (*v == "label") {
      policy.correctness = {CorrectnessRule::Mode::explicit_label, policy.correctness.min_upvotes};
    } else if (v->rfind("upvotes:", 0) == 0) {
      policy.correctness = {CorrectnessRule::Mode::upvote_threshold,
                            static_cast<int>(parse_int(v->substr(8), "[" + section + "]correctness"))};
    } else {
      throw Error("[" + section + "] correctness must be 'label' or 'upvotes:<k>'");
    }
  }
  if (auto v = ini.take(section, "upvote_weighting")) {
    policy.upvote_weighting = parse_bool(*v, "[" + section + "]upvote_weighting");
  }
  if (auto v = ini.take(section, "topic_source")) {
    if (*v == "tags") {
      policy.topic_source = TopicSource::tags;
    } else if (*v == "text_match") {
      policy.topic_source = TopicSource::text_match;
    } else {
      throw Error("[" + section + "] topic_source must be 'tags' or 'text_match'");
    }
  }
  if (auto v = ini.take(section, "post_kinds")) {
    policy.post_kinds = parse_kind_set(*v, "[" + section + "]post_kinds");
  }
  if (auto v = ini.take(section, "original_kinds")) {
    policy.original_kinds = parse_kind_set(*v, "[" + section + "]original_kinds");
  }
  if (auto v = ini.take(section, "question_is_original")) {
    policy.question_is_original = parse_bool(*v, "[" + section + "]question_is_original");
  }
  if (auto v = ini.take(section, "answers_are_conversational")) {
    policy.answers_are_conversational = parse_bool(*v, "[" + section + "]answers_are_conversational");
  }
  if (auto v = ini.take(section, "ask_strategy")) {
    auto strategy = parse_ask_strategy(*v);
    if (!strategy) throw Error("[" + section + "] unknown ask_strategy '" + *v + "'");
    policy.message_template.strategy = *strategy;
  }
  if (auto v = ini.take(section, "ask_prefix")) policy.message_template.prefix = *v;
  if (auto v = ini.take(section, "ask_suffix")) policy.message_template.suffix = *v;
  if (auto v = ini.take(section, "max_length")) {
    policy.message_template.max_length =
        static_cast<std::size_t>(parse_int(*v, "[" + section + "]max_length"));
  }
  validate_policy(policy);
  return policy;
}

sim::ArchetypeSpec parse_archetype_spec(IniFile& ini, const std::string& section,
                                        sim::ArchetypeSpec base) {
  auto number = [&](const char* key, double& slot) {
    if (auto v = ini.take(section, key)) slot = parse_double(*v, "[" + section + "]" + key);
  };
  number("post_rate", base.post_rate);
  number("on_topic_fraction", base.on_topic_fraction);
  number("answer_prob", base.answer_prob);
  number("answer_correct_prob", base.answer_correct_prob);
  number("latency_hours", base.response_latency.scale_hours);
  number("latency_sigma", base.response_latency.sigma);
  number("conversational_fraction", base.conversational_fraction);
  number("repost_fraction", base.repost_fraction);
  for (double p : {base.on_topic_fraction, base.answer_prob, base.answer_correct_prob,
                   base.conversational_fraction, base.repost_fraction}) {
    if (p < 0.0 || p > 1.0) throw Error("[" + section + "] probabilities must be in [0, 1]");
  }
  if (base.post_rate < 0.0) throw Error("[" + section + "] post_rate must be >= 0");
  return base;
}

}  // namespace

AppConfig parse_config(std::istream& in, const std::string& origin) {
  IniFile ini = IniFile::parse(in, origin);
  AppConfig cfg = default_config();

  if (auto v = ini.take("topics", "universe")) {
    cfg.topic_universe.clear();
    for (const std::string& label : parse_list(*v)) {
      Topic t = Topic::of(label);
      if (t.empty()) throw Error("[topics] universe contains an empty label");
      cfg.topic_universe.push_back(std::move(t));
    }
  }

  const auto crowd_sections = ini.sections_with_prefix("crowd.");
  std::map<CrowdId, std::string> crowd_styles;
  if (!crowd_sections.empty()) cfg.policies.clear();
  for (const std::string& section : crowd_sections) {
    const CrowdId crowd = section.substr(6);
    if (crowd.empty()) throw Error("crowd section with empty id");
    crowd_styles[crowd] = ini.take(section, "style").value_or("twitter");
    cfg.policies.emplace(crowd, parse_crowd_policy(ini, section, crowd, crowd_styles[crowd]));
  }

  if (auto v = ini.take("index", "qualification_window")) {
    cfg.index.windows.qualification = parse_window(*v, "[index]qualification_window");
  }
  auto bounded_window = [&](const char* key, Duration& slot) {
    if (auto v = ini.take("index", key)) {
      auto w = parse_window(*v, std::string("[index]") + key);
      if (!w) throw Error(std::string("[index]") + key + " cannot be 'forever'");
      slot = *w;
    }
  };
  bounded_window("interest_window", cfg.index.windows.interest);
  bounded_window("responsiveness_window", cfg.index.windows.responsiveness);
  bool cap_given = false;
  if (auto v = ini.take("index", "activity_window")) {
    auto w = parse_window(*v, "[index]activity_window");
    if (!w) throw Error("[index]activity_window cannot be 'forever'");
    cfg.index.windows.activity = *w;
  }
  if (auto v = ini.take("index", "rt_floor_hours")) {
    cfg.index.rt_floor_hours = parse_double(*v, "[index]rt_floor_hours");
  }
  if (auto v = ini.take("index", "a2_cap_hours")) {
    cfg.index.a2_cap_hours = parse_double(*v, "[index]a2_cap_hours");
    cap_given = true;
  }
  if (!cap_given) cfg.index.a2_cap_hours = to_hours(cfg.index.windows.activity);
  cfg.index.validate();

  if (auto v = ini.take("prune", "mode")) {
    if (*v == "off") {
      cfg.prune = PruneThresholds::disabled();
    } else if (*v == "percentile") {
      cfg.prune = PruneThresholds::at_percentile(
          parse_double(ini.take("prune", "percentile").value_or("10"), "[prune]percentile"));
    } else if (*v == "absolute") {
      auto value = ini.take("prune", "absolute");
      if (!value) throw Error("[prune] mode=absolute requires absolute = <min>[, ...]");
      std::vector<double> mins;
      for (const std::string& item : parse_list(*value)) {
        mins.push_back(parse_double(item, "[prune]absolute"));
      }
      cfg.prune = PruneThresholds::absolute_min(std::move(mins));
    } else {
      throw Error("[prune] mode must be percentile, absolute or off");
    }
  } else if (auto p = ini.take("prune", "percentile")) {
    cfg.prune = PruneThresholds::at_percentile(parse_double(*p, "[prune]percentile"));
  }

  if (ini.has_section("weights")) {
    if (auto preset = ini.take("weights", "preset")) {
      auto w = ScoreWeights::preset(*preset);
      if (!w) throw Error("[weights] unknown preset '" + *preset + "'");
      cfg.weights = *w;
    }
    auto k1 = ini.take("weights", "K1");
    auto k2 = ini.take("weights", "K2");
    auto a1 = ini.take("weights", "A1");
    if (k1 || k2 || a1) {
      if (!(k1 && k2 && a1)) throw Error("[weights] K1, K2 and A1 must be given together");
      cfg.weights = ScoreWeights::normalized(parse_double(*k1, "[weights]K1"),
                                             parse_double(*k2, "[weights]K2"),
                                             parse_double(*a1, "[weights]A1"));
    }
  }

  if (auto v = ini.take("router", "representatives")) {
    cfg.representative_count = static_cast<int>(parse_int(*v, "[router]representatives"));
    if (cfg.representative_count < 1) throw Error("[router] representatives must be >= 1");
  }
  if (auto v = ini.take("router", "activity_gate_hours")) {
    cfg.activity_gate_hours = parse_double(*v, "[router]activity_gate_hours");
  }
  if (auto v = ini.take("router", "max_levels")) {
    cfg.max_levels = static_cast<int>(parse_int(*v, "[router]max_levels"));
    if (cfg.max_levels < 1) throw Error("[router] max_levels must be >= 1");
  }
  if (auto v = ini.take("router", "axes")) {
    const std::int64_t axes = parse_int(*v, "[router]axes");
    if (axes == 2) {
      cfg.axes = AxisMode::two;
    } else if (axes == 4) {
      cfg.axes = AxisMode::four;
    } else {
      throw Error("[router] axes must be 2 or 4");
    }
  }
  if (auto v = ini.take("router", "default_budget")) {
    cfg.default_budget = static_cast<int>(parse_int(*v, "[router]default_budget"));
    if (cfg.default_budget < 1) throw Error("[router] default_budget must be >= 1");
  }

  if (auto v = ini.take("paths", "state_dir")) cfg.state_dir = *v;

  if (auto v = ini.take("simulator", "seed")) {
    cfg.simulator.seed = static_cast<std::uint64_t>(parse_int(*v, "[simulator]seed"));
  }
  if (auto v = ini.take("simulator", "horizon_days")) {
    cfg.simulator.horizon_days = static_cast<int>(parse_int(*v, "[simulator]horizon_days"));
    if (cfg.simulator.horizon_days < 1) throw Error("[simulator] horizon_days must be >= 1");
  }
  if (auto v = ini.take("simulator", "clock_step")) {
    auto step = parse_window(*v, "[simulator]clock_step");
    if (!step) throw Error("[simulator] clock_step cannot be 'forever'");
    cfg.simulator.clock_step = *step;
  }
  if (auto v = ini.take("simulator", "topics")) {
    cfg.simulator.topics.clear();
    for (const std::string& label : parse_list(*v)) cfg.simulator.topics.push_back(Topic::of(label));
  } else {
    cfg.simulator.topics = cfg.topic_universe;
  }

  for (const std::string& section : ini.sections_with_prefix("simulator.archetype.")) {
    const std::string name = section.substr(std::string("simulator.archetype.").size());
    auto archetype = sim::parse_archetype(name);
    if (!archetype) throw Error("[" + section + "] unknown archetype");
    cfg.simulator.archetypes[*archetype] =
        parse_archetype_spec(ini, section, cfg.simulator.archetypes[*archetype]);
  }

  const auto sim_crowds = ini.sections_with_prefix("simulator.crowd.");
  if (sim_crowds.empty() && !crowd_sections.empty()) {
    // The crowd set was replaced without simulator mixes: re-key the default
    // mix onto the declared crowds so the defaults stay runnable.
    const auto default_mix = sim::default_sim_config().crowds.front().counts;
    cfg.simulator.crowds.clear();
    for (const auto& [crowd, policy] : cfg.policies) {
      sim::CrowdMix mix;
      mix.crowd = crowd;
      mix.counts = default_mix;
      mix.unsolicited_rate = crowd_styles[crowd] == "quora" ? 0.2 : 0.0;
      cfg.simulator.crowds.push_back(std::move(mix));
    }
  }
  if (!sim_crowds.empty()) cfg.simulator.crowds.clear();
  for (const std::string& section : sim_crowds) {
    sim::CrowdMix mix;
    mix.crowd = section.substr(std::string("simulator.crowd.").size());
    if (!cfg.policies.contains(mix.crowd)) {
      throw Error("[" + section + "] crowd has no [crowd." + mix.crowd + "] policy");
    }
    if (auto v = ini.take(section, "mix")) {
      for (const std::string& item : parse_list(*v)) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("[" + section + "] mix entries are <archetype>:<count>");
        auto archetype = sim::parse_archetype(trim(item.substr(0, colon)));
        if (!archetype) throw Error("[" + section + "] unknown archetype in mix: " + item);
        const auto count = parse_int(trim(item.substr(colon + 1)), "[" + section + "]mix");
        if (count < 0) throw Error("[" + section + "] mix counts must be >= 0");
        mix.counts.emplace_back(*archetype, static_cast<int>(count));
      }
    }
    if (auto v = ini.take(section, "unsolicited_rate")) {
      mix.unsolicited_rate = parse_double(*v, "[" + section + "]unsolicited_rate");
    }
    if (auto v = ini.take(section, "ask_fraction")) {
      mix.ask_fraction = parse_double(*v, "[" + section + "]ask_fraction");
    }
    cfg.simulator.crowds.push_back(std::move(mix));
  }

  // Every referenced crowd must have a policy; fail fast before any run.
  for (const sim::CrowdMix& mix : cfg.simulator.crowds) {
    if (!cfg.policies.contains(mix.crowd)) {
      throw Error("simulator crowd '" + mix.crowd + "' has no policy");
    }
  }
  if (cfg.policies.empty()) throw Error("config declares no crowds");

  ini.ensure_consumed();
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  return parse_config(in, path.string());
}

}  // namespace crowdstar
