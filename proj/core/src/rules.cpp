#include "spatial/rules.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <utility>

#include "rulepacks_embedded.hpp"

namespace spatial {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kEventNames{{
    {EventKind::user_detected, "user_detected"},
    {EventKind::email, "email"},
    {EventKind::calendar, "calendar"},
    {EventKind::news, "news"},
    {EventKind::weather, "weather"},
    {EventKind::traffic, "traffic"},
    {EventKind::iot, "iot"},
    {EventKind::voice_trigger, "voice_trigger"},
}};

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> words(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  if (from.empty()) return s;
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string display_name(const UserProfile& profile) {
  return profile.display_name.empty() ? profile.user_id : profile.display_name;
}

std::string render(std::string_view templ, const std::map<std::string, std::string>& vars) {
  std::string out;
  for (std::size_t i = 0; i < templ.size();) {
    if (templ[i] == '$') {
      std::size_t j = i + 1;
      while (j < templ.size() &&
             (std::isalnum(static_cast<unsigned char>(templ[j])) || templ[j] == '_')) {
        ++j;
      }
      const std::string key(templ.substr(i + 1, j - i - 1));
      if (auto it = vars.find(key); it != vars.end()) {
        out += it->second;
        i = j;
        continue;
      }
    }
    out.push_back(templ[i++]);
  }
  return out;
}

Importance importance_of_level(Priority p) {
  switch (p) {
    case Priority::reactive:
    case Priority::high:
      return Importance::high;
    case Priority::medium:
      return Importance::medium;
    case Priority::low:
      return Importance::low;
  }
  return Importance::medium;
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what) {
  throw ValidationError("rule pack line " + std::to_string(line) + ": " + what);
}

TypeSelector parse_selector(std::string_view s, std::size_t line) {
  TypeSelector sel;
  const auto colon = s.find(':');
  const auto type = parse_content_type(trim(s.substr(0, colon)));
  if (!type) fail_at(line, "unknown content type in '" + std::string(s) + "'");
  sel.type = *type;
  if (colon != std::string_view::npos) {
    std::string_view imp = trim(s.substr(colon + 1));
    if (!imp.empty() && imp.front() == '!') {
      sel.negate_importance = true;
      imp.remove_prefix(1);
    }
    const auto level = parse_importance(imp);
    if (!level) fail_at(line, "unknown importance in '" + std::string(s) + "'");
    sel.importance = *level;
  }
  return sel;
}

std::vector<Action> parse_outputs(std::string_view s, std::size_t line) {
  std::vector<Action> out;
  for (auto item : split(s, ',')) {
    if (item.empty()) continue;
    if (item == "speak") {
      out.push_back({ActionKind::speak, ""});
    } else if (item == "wake_animation") {
      out.push_back({ActionKind::wake_animation, ""});
    } else if (item.starts_with("led:")) {
      out.push_back({ActionKind::led_pattern, std::string(trim(item.substr(4)))});
    } else if (item.starts_with("iot:")) {
      out.push_back({ActionKind::iot_command, std::string(trim(item.substr(4)))});
    } else {
      fail_at(line, "unknown output '" + std::string(item) + "'");
    }
  }
  if (out.empty()) fail_at(line, "rule has no outputs");
  return out;
}

InteractionRule parse_rule(const std::vector<std::string_view>& f, std::size_t line) {
  if (f.size() < 11) fail_at(line, "rule record needs 11 fields, got " + std::to_string(f.size()));
  InteractionRule r;
  r.id = std::string(f[1]);
  if (r.id.empty()) fail_at(line, "empty rule id");
  const auto type = parse_content_type(f[2]);
  if (!type) fail_at(line, "unknown content type '" + std::string(f[2]) + "'");
  r.type = *type;
  if (f[3] != "auto") {
    const auto level = parse_priority(f[3]);
    if (!level) fail_at(line, "unknown level '" + std::string(f[3]) + "'");
    r.level = *level;
  }
  if (f[4] == "none") {
    r.classify = Classifier::none;
  } else if (f[4] == "calendar") {
    r.classify = Classifier::calendar;
  } else if (f[4] == "email") {
    r.classify = Classifier::email;
  } else if (f[4] == "news") {
    r.classify = Classifier::news;
  } else {
    fail_at(line, "unknown classifier '" + std::string(f[4]) + "'");
  }
  if (!r.level && r.classify == Classifier::none) {
    fail_at(line, "level 'auto' requires a classifier");
  }
  if ((r.level == Priority::reactive) != (r.type == ContentType::reactive)) {
    fail_at(line, "the reactive level is reserved for reactive content");
  }
  if (f[5] != "default") {
    try {
      std::size_t used = 0;
      const long long gap = std::stoll(std::string(f[5]), &used);
      if (used != f[5].size() || gap < 0) throw std::invalid_argument("gap");
      r.min_gap = gap;
    } catch (const std::exception&) {
      fail_at(line, "gap must be a non-negative integer or 'default'");
    }
  }
  if (f[6].starts_with("rule:")) {
    r.trigger.rule = std::string(trim(f[6].substr(5)));
  } else {
    const auto kind = parse_event_kind(f[6]);
    if (!kind) fail_at(line, "unknown trigger '" + std::string(f[6]) + "'");
    r.trigger.event = *kind;
  }
  try {
    r.when = Predicate::parse(f[7]);
  } catch (const ValidationError& e) {
    fail_at(line, e.what());
  }
  r.outputs = parse_outputs(f[8], line);
  if (f[9] != "-") {
    for (auto flag : split(f[9], ',')) {
      if (flag == "private_gate") {
        r.privacy_gate = true;
      } else if (flag == "batch") {
        r.batchable = true;
      } else {
        fail_at(line, "unknown flag '" + std::string(flag) + "'");
      }
    }
  }
  // The message is the remainder of the line and may itself contain '|'.
  std::string message(f[10]);
  for (std::size_t i = 11; i < f.size(); ++i) message += " | " + std::string(f[i]);
  r.message = std::move(message);
  return r;
}

void check_composition(const RulePack& pack) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < pack.rules.size(); ++i) {
    if (!index.emplace(pack.rules[i].id, i).second) {
      throw ValidationError("rule pack: duplicate rule id '" + pack.rules[i].id + "'");
    }
  }
  for (const auto& r : pack.rules) {
    if (!r.trigger.rule.empty() && !index.contains(r.trigger.rule)) {
      throw ValidationError("rule pack: rule '" + r.id + "' composes unknown rule '" +
                            r.trigger.rule + "'");
    }
  }
  // parent -> composed children; a back edge in DFS is a cycle.
  std::vector<int> state(pack.rules.size(), 0);
  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    state[i] = 1;
    for (std::size_t j = 0; j < pack.rules.size(); ++j) {
      if (pack.rules[j].trigger.rule != pack.rules[i].id) continue;
      if (state[j] == 1) {
        throw ValidationError("rule pack: composition cycle through '" + pack.rules[j].id + "'");
      }
      if (state[j] == 0) dfs(j);
    }
    state[i] = 2;
  };
  for (std::size_t i = 0; i < pack.rules.size(); ++i) {
    if (state[i] == 0) dfs(i);
  }
}

void check_ordering(const RulePack& pack) {
  // Expand selectors to concrete (type, importance) classes and look for cycles.
  constexpr std::array<Importance, 3> kLevels{Importance::high, Importance::medium,
                                              Importance::low};
  constexpr int kTypes = static_cast<int>(ContentType::reactive) + 1;
  auto node = [](ContentType t, Importance i) {
    return static_cast<int>(t) * 3 + static_cast<int>(i);
  };
  std::vector<std::vector<int>> edges(kTypes * 3);
  for (const auto& h : pack.ordering) {
    for (int ta = 0; ta < kTypes; ++ta) {
      for (Importance ia : kLevels) {
        if (!h.first.matches(static_cast<ContentType>(ta), ia)) continue;
        for (int tb = 0; tb < kTypes; ++tb) {
          for (Importance ib : kLevels) {
            if (!h.then.matches(static_cast<ContentType>(tb), ib)) continue;
            edges[static_cast<std::size_t>(node(static_cast<ContentType>(ta), ia))].push_back(
                node(static_cast<ContentType>(tb), ib));
          }
        }
      }
    }
  }
  std::vector<int> state(edges.size(), 0);
  std::function<void(int)> dfs = [&](int v) {
    state[static_cast<std::size_t>(v)] = 1;
    for (int w : edges[static_cast<std::size_t>(v)]) {
      if (state[static_cast<std::size_t>(w)] == 1) {
        throw ValidationError("rule pack: ordering hints form a cycle");
      }
      if (state[static_cast<std::size_t>(w)] == 0) dfs(w);
    }
    state[static_cast<std::size_t>(v)] = 2;
  };
  for (std::size_t v = 0; v < edges.size(); ++v) {
    if (state[v] == 0) dfs(static_cast<int>(v));
  }
}

struct Evaluator {
  const RulePack& pack;
  const TriggerEvent& event;
  const RuleContext& context;
  const UserProfile& profile;
  const RuleEnvironment& env;
  std::vector<TriggeredInteraction> out;

  Importance classify(const InteractionRule& rule, std::optional<Importance> inherited) const {
    const ServiceEvent* s = event.service ? &*event.service : nullptr;
    switch (rule.classify) {
      case Classifier::calendar:
        if (s && s->event_start_tick) {
          return calendar_priority(*s->event_start_tick, event.tick, env.clock).level;
        }
        return Importance::low;
      case Classifier::email:
        return s ? email_importance(*s, env.whitelist) : Importance::normal;
      case Classifier::news:
        return s ? news_priority(s->headline, s->tags, env.news_keywords) : Importance::normal;
      case Classifier::none:
        break;
    }
    if (inherited) return *inherited;
    return importance_of_level(rule.level.value_or(Priority::medium));
  }

  std::map<std::string, std::string> variables() const {
    const std::string name = display_name(profile);
    std::map<std::string, std::string> vars{{"User", name}, {"weather", env.weather_report}};
    if (event.service) {
      const ServiceEvent& s = *event.service;
      auto personal = [&](const std::string& text) { return replace_all(text, "[user]", name); };
      vars["sender"] = s.sender;
      vars["subject"] = personal(s.subject);
      vars["body"] = personal(s.body);
      vars["headline"] = personal(s.headline);
      vars["text"] = personal(s.text);
    }
    return vars;
  }

  void fire(const InteractionRule& rule, bool composed, std::optional<Importance> inherited) {
    const Importance importance = classify(rule, composed ? inherited : std::nullopt);
    const bool from_personal_service =
        !composed && event.service &&
        (event.kind == EventKind::email || event.kind == EventKind::calendar);
    const bool sensitive = from_personal_service && event.service->private_flag;

    RuleContext ctx = context;
    ctx.importance = importance;
    ctx.private_content = sensitive;
    if (!rule.when.evaluate(ctx)) return;

    TriggeredInteraction t;
    t.rule_id = rule.id;
    t.type = rule.type;
    t.importance = importance;
    t.priority = rule.level.value_or(priority_for(importance));
    t.content = render(rule.message, variables());
    t.privacy_sensitive = sensitive;
    t.alone_gate = sensitive && rule.privacy_gate;
    t.batchable = rule.batchable;
    t.min_gap = rule.min_gap;
    t.created_tick = event.tick;
    t.outputs = rule.outputs;
    if (!composed && event.service) {
      t.source_event = event.service->id;
      t.source_kind = event.kind;
    }
    out.push_back(std::move(t));

    for (const auto& child : pack.rules) {
      if (child.trigger.rule == rule.id) fire(child, true, importance);
    }
  }

  void run() {
    for (const auto& rule : pack.rules) {
      if (rule.trigger.rule.empty() && rule.trigger.event == event.kind) {
        fire(rule, false, std::nullopt);
      }
    }
  }
};

}  // namespace

std::string_view to_string(EventKind v) {
  for (const auto& [k, name] : kEventNames) {
    if (k == v) return name;
  }
  return "?";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (const auto& [k, name] : kEventNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

bool TypeSelector::matches(ContentType t, Importance i) const {
  if (t != type) return false;
  if (!importance) return true;
  return negate_importance ? i != *importance : i == *importance;
}

CalendarPriority calendar_priority(Tick event_start, Tick now, const SimClock& clock) {
  if (event_start < now) return {Importance::low, true};
  if (clock.hours_between(now, event_start) <= 2.0) return {Importance::high, false};
  if (clock.day_index(event_start) == clock.day_index(now)) return {Importance::medium, false};
  return {Importance::low, false};
}

Importance email_importance(const ServiceEvent& email, const std::set<std::string>& whitelist) {
  std::set<std::string> allowed;
  for (const auto& w : whitelist) {
    std::string l = lower(w);
    allowed.insert(l);
    if (l.size() > 1 && l.back() == 's') allowed.insert(l.substr(0, l.size() - 1));
  }
  bool listed = !email.sender_group.empty() && allowed.contains(lower(email.sender_group));
  for (const auto& w : words(email.sender)) listed = listed || allowed.contains(w);
  if (listed) return Importance::high;
  if (email.spam || email.newsletter) return Importance::low;
  return Importance::normal;
}

Importance news_priority(std::string_view headline, const std::vector<std::string>& tags,
                         const std::set<std::string>& keywords) {
  const std::string text = lower(headline);
  for (const auto& k : keywords) {
    const std::string key = lower(k);
    if (key.empty()) continue;
    if (text.find(key) != std::string::npos) return Importance::high;
    for (const auto& tag : tags) {
      if (lower(tag) == key) return Importance::high;
    }
  }
  return Importance::normal;
}

std::vector<TriggeredInteraction> evaluate(const RulePack& pack, const TriggerEvent& event,
                                           const RuleContext& context, const UserProfile& profile,
                                           const RuleEnvironment& env) {
  Evaluator ev{pack, event, context, profile, env, {}};
  ev.run();
  return std::move(ev.out);
}

RulePack parse_rulepack(std::string_view text, std::string name) {
  RulePack pack;
  pack.name = std::move(name);
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split(line, '|');
    if (fields.front() == "rule") {
      pack.rules.push_back(parse_rule(fields, line_no));
    } else if (fields.front() == "order") {
      if (fields.size() != 3) fail_at(line_no, "order record needs 3 fields");
      pack.ordering.push_back(
          {parse_selector(fields[1], line_no), parse_selector(fields[2], line_no)});
    } else {
      fail_at(line_no, "unknown record kind '" + std::string(fields.front()) + "'");
    }
  }
  check_composition(pack);
  check_ordering(pack);
  return pack;
}

RulePack load_rulepack(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open rule pack '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rulepack(buf.str(), path);
}

std::string_view l1_rulepack_text() { return embedded::kL1Rules; }
std::string_view l2_rulepack_text() { return embedded::kL2Rules; }

const RulePack& l1_rulepack() {
  static const RulePack pack = parse_rulepack(l1_rulepack_text(), "L1");
  return pack;
}

const RulePack& l2_rulepack() {
  static const RulePack pack = parse_rulepack(l2_rulepack_text(), "L2");
  return pack;
}

}  // namespace spatial
