#include "spatial/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "spatial/random.hpp"

namespace spatial {
namespace {

using nlohmann::json;

constexpr std::uint64_t kEmbeddingStream = 0x656d62;  // "emb"

[[noreturn]] void fail(const std::string& ptr, const std::string& what) {
  throw ValidationError("scenario " + (ptr.empty() ? std::string("/") : ptr) + ": " + what);
}

std::string child(const std::string& ptr, std::string_view key) {
  return ptr + "/" + std::string(key);
}

std::string child(const std::string& ptr, std::size_t index) {
  return ptr + "/" + std::to_string(index);
}

void expect_object(const json& j, const std::string& ptr,
                   std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(ptr, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(child(ptr, key), "unknown field");
    }
  }
}

const json* find(const json& obj, std::string_view key) {
  auto it = obj.find(std::string(key));
  return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& ptr, std::string_view key) {
  const json* v = find(obj, key);
  if (!v) fail(child(ptr, key), "required field missing");
  return *v;
}

Tick as_tick(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) fail(ptr, "expected an integer");
  const auto t = v.get<std::int64_t>();
  if (t < 0) fail(ptr, "must be non-negative");
  return t;
}

double as_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) fail(ptr, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(ptr, "must be finite");
  return d;
}

std::string as_string(const json& v, const std::string& ptr) {
  if (!v.is_string()) fail(ptr, "expected a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& ptr) {
  if (!v.is_boolean()) fail(ptr, "expected a boolean");
  return v.get<bool>();
}

const json& as_array(const json& v, const std::string& ptr) {
  if (!v.is_array()) fail(ptr, "expected an array");
  return v;
}

double probability(const json& v, const std::string& ptr) {
  const double p = as_number(v, ptr);
  if (p < 0.0 || p > 1.0) fail(ptr, "must be in [0, 1]");
  return p;
}

double non_negative(const json& v, const std::string& ptr) {
  const double d = as_number(v, ptr);
  if (d < 0.0) fail(ptr, "must be non-negative");
  return d;
}

int clock_minutes(const std::string& s, const std::string& ptr) {
  if (s.size() != 5 || s[2] != ':' || !std::isdigit(static_cast<unsigned char>(s[0])) ||
      !std::isdigit(static_cast<unsigned char>(s[1])) ||
      !std::isdigit(static_cast<unsigned char>(s[3])) ||
      !std::isdigit(static_cast<unsigned char>(s[4]))) {
    fail(ptr, "expected HH:MM");
  }
  const int h = (s[0] - '0') * 10 + (s[1] - '0');
  const int m = (s[3] - '0') * 10 + (s[4] - '0');
  if (h > 23 || m > 59) fail(ptr, "clock value out of range");
  return h * 60 + m;
}

std::set<std::string> string_set(const json& v, const std::string& ptr) {
  std::set<std::string> out;
  const json& arr = as_array(v, ptr);
  for (std::size_t i = 0; i < arr.size(); ++i) out.insert(as_string(arr[i], child(ptr, i)));
  return out;
}

Vec2 point(const json& obj, const std::string& ptr) {
  return {as_number(require(obj, ptr, "x"), child(ptr, "x")),
          as_number(require(obj, ptr, "y"), child(ptr, "y"))};
}

ScriptedPerson parse_person(const json& j, const std::string& ptr, Tick duration) {
  expect_object(j, ptr,
                {"id", "name", "enrolled", "embedding_seed", "embedding", "entry_tick",
                 "exit_tick", "waypoints", "activities"});
  ScriptedPerson p;
  p.id = as_string(require(j, ptr, "id"), child(ptr, "id"));
  if (p.id.empty()) fail(child(ptr, "id"), "must be non-empty");
  if (const json* v = find(j, "name")) p.name = as_string(*v, child(ptr, "name"));
  if (const json* v = find(j, "enrolled")) p.enrolled = as_bool(*v, child(ptr, "enrolled"));

  const json* seed = find(j, "embedding_seed");
  const json* values = find(j, "embedding");
  if ((seed != nullptr) == (values != nullptr)) {
    fail(ptr, "exactly one of embedding_seed and embedding is required");
  }
  if (seed) {
    if (!seed->is_number_unsigned() && !seed->is_number_integer()) {
      fail(child(ptr, "embedding_seed"), "expected an integer");
    }
    p.embedding = seeded_embedding(seed->get<std::uint64_t>());
  } else {
    const std::string vp = child(ptr, "embedding");
    const json& arr = as_array(*values, vp);
    if (arr.size() != kEmbeddingDim) {
      fail(vp, "expected " + std::to_string(kEmbeddingDim) + " components");
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      p.embedding.push_back(as_number(arr[i], child(vp, i)));
      norm += p.embedding.back() * p.embedding.back();
    }
    if (norm <= 0.0) fail(vp, "must be non-zero");
    for (double& x : p.embedding) x /= std::sqrt(norm);
  }

  p.entry_tick = 0;
  p.exit_tick = duration;
  if (const json* v = find(j, "entry_tick")) p.entry_tick = as_tick(*v, child(ptr, "entry_tick"));
  if (const json* v = find(j, "exit_tick")) p.exit_tick = as_tick(*v, child(ptr, "exit_tick"));
  if (p.exit_tick < p.entry_tick) fail(child(ptr, "exit_tick"), "precedes entry_tick");
  if (p.exit_tick > duration) fail(child(ptr, "exit_tick"), "beyond duration_ticks");

  const std::string wp = child(ptr, "waypoints");
  const json& wps = as_array(require(j, ptr, "waypoints"), wp);
  if (wps.empty()) fail(wp, "at least one waypoint is required");
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string ip = child(wp, i);
    expect_object(wps[i], ip, {"tick", "x", "y"});
    Waypoint w;
    w.tick = as_tick(require(wps[i], ip, "tick"), child(ip, "tick"));
    w.position = point(wps[i], ip);
    if (w.tick >= std::max<Tick>(duration, 1)) fail(child(ip, "tick"), "beyond duration_ticks");
    if (!p.waypoints.empty() && w.tick <= p.waypoints.back().tick) {
      fail(child(ip, "tick"), "waypoint ticks must increase");
    }
    p.waypoints.push_back(w);
  }

  if (const json* acts = find(j, "activities")) {
    const std::string ap = child(ptr, "activities");
    const json& arr = as_array(*acts, ap);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = child(ap, i);
      expect_object(arr[i], ip, {"start", "end", "engagement"});
      ActivityInterval a;
      a.start = as_tick(require(arr[i], ip, "start"), child(ip, "start"));
      a.end = as_tick(require(arr[i], ip, "end"), child(ip, "end"));
      const auto e = parse_engagement(as_string(require(arr[i], ip, "engagement"),
                                                child(ip, "engagement")));
      if (!e) fail(child(ip, "engagement"), "expected idle, conversing or task");
      a.engagement = *e;
      if (a.end <= a.start) fail(child(ip, "end"), "must follow start");
      if (a.end > duration) fail(child(ip, "end"), "beyond duration_ticks");
      if (!p.activities.empty() && a.start < p.activities.back().end) {
        fail(child(ip, "start"), "activities must be sorted and disjoint");
      }
      p.activities.push_back(a);
    }
  }
  return p;
}

ServiceEvent parse_service(const json& j, const std::string& ptr, Tick duration,
                           const Scenario& s) {
  expect_object(j, ptr,
                {"id", "kind", "tick", "sender", "sender_group", "subject", "body", "private",
                 "newsletter", "spam", "event_start_tick", "event_start", "headline", "tags",
                 "text"});
  ServiceEvent e;
  e.id = as_string(require(j, ptr, "id"), child(ptr, "id"));
  const auto kind = parse_event_kind(as_string(require(j, ptr, "kind"), child(ptr, "kind")));
  if (!kind || *kind == EventKind::user_detected || *kind == EventKind::voice_trigger) {
    fail(child(ptr, "kind"), "expected email, calendar, news, weather, traffic or iot");
  }
  e.kind = *kind;
  e.arrival_tick = as_tick(require(j, ptr, "tick"), child(ptr, "tick"));
  if (e.arrival_tick >= duration) fail(child(ptr, "tick"), "beyond duration_ticks");
  auto text = [&](const char* key, std::string& out) {
    if (const json* v = find(j, key)) out = as_string(*v, child(ptr, key));
  };
  text("sender", e.sender);
  text("sender_group", e.sender_group);
  text("subject", e.subject);
  text("body", e.body);
  text("headline", e.headline);
  text("text", e.text);
  if (const json* v = find(j, "private")) e.private_flag = as_bool(*v, child(ptr, "private"));
  if (const json* v = find(j, "newsletter")) e.newsletter = as_bool(*v, child(ptr, "newsletter"));
  if (const json* v = find(j, "spam")) e.spam = as_bool(*v, child(ptr, "spam"));
  if (const json* v = find(j, "tags")) {
    const std::string tp = child(ptr, "tags");
    const json& arr = as_array(*v, tp);
    for (std::size_t i = 0; i < arr.size(); ++i) e.tags.push_back(as_string(arr[i], child(tp, i)));
  }
  const json* start_tick = find(j, "event_start_tick");
  const json* start_clock = find(j, "event_start");
  if (start_tick && start_clock) fail(ptr, "event_start and event_start_tick are exclusive");
  if (start_tick) e.event_start_tick = as_tick(*start_tick, child(ptr, "event_start_tick"));
  if (start_clock) {
    // Same day as the arrival, at the given wall-clock time.
    const int minutes = clock_minutes(as_string(*start_clock, child(ptr, "event_start")),
                                      child(ptr, "event_start"));
    const double wall = s.start_minute_of_day * 60.0;
    const double arrival_sec = wall + static_cast<double>(e.arrival_tick) * s.tick_seconds;
    const double midnight = std::floor(arrival_sec / 86400.0) * 86400.0;
    const double target = midnight + minutes * 60.0;
    e.event_start_tick = static_cast<Tick>(std::llround((target - wall) / s.tick_seconds));
  }
  if (e.kind == EventKind::calendar && !e.event_start_tick) {
    fail(ptr, "calendar entries need event_start or event_start_tick");
  }
  if (e.kind != EventKind::email && e.kind != EventKind::calendar && e.private_flag) {
    fail(child(ptr, "private"), "only email and calendar entries can be private");
  }
  return e;
}

std::string content_type_list() {
  std::string out;
  for (int t = 0; t <= static_cast<int>(ContentType::reactive); ++t) {
    if (!out.empty()) out += ", ";
    out += to_string(static_cast<ContentType>(t));
  }
  return out;
}

}  // namespace

Vec2 ScriptedPerson::position(Tick tick) const {
  if (waypoints.empty()) return {};
  if (tick <= waypoints.front().tick) return waypoints.front().position;
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Waypoint& b = waypoints[i];
    if (tick <= b.tick) {
      const Waypoint& a = waypoints[i - 1];
      const double u = static_cast<double>(tick - a.tick) / static_cast<double>(b.tick - a.tick);
      return a.position + (b.position - a.position) * u;
    }
  }
  return waypoints.back().position;
}

Engagement ScriptedPerson::engagement(Tick tick) const {
  for (const auto& a : activities) {
    if (tick >= a.start && tick < a.end) return a.engagement;
  }
  return Engagement::idle;
}

std::optional<ConditionCounts> condition_counts(std::string_view condition) {
  if (condition == "condition1") return ConditionCounts{6, 4, 2, 2400};
  if (condition == "condition2") return ConditionCounts{16, 6, 4, 4800};
  return std::nullopt;
}

const ScriptedPerson* Scenario::person(std::string_view id) const {
  for (const auto& p : persons) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

Tick Scenario::duration_of(ContentType type) const {
  if (auto it = durations.find(type); it != durations.end()) return it->second;
  switch (type) {
    case ContentType::greeting:
    case ContentType::iot:
      return 4;
    case ContentType::email:
      return 16;
    case ContentType::traffic:
    case ContentType::tv:
      return 10;
    case ContentType::reactive:
      return 8;
    default:
      return 12;
  }
}

ConditionCounts count_messages(const Scenario& scenario) {
  ConditionCounts c;
  c.duration_ticks = scenario.duration_ticks;
  for (const auto& e : scenario.services) {
    if (e.kind == EventKind::email) {
      ++c.email;
    } else if (e.kind == EventKind::calendar) {
      ++c.calendar;
    } else {
      ++c.other;
    }
  }
  return c;
}

Embedding seeded_embedding(std::uint64_t seed) {
  auto rng = counter_rng({kEmbeddingStream, seed});
  std::normal_distribution<double> normal(0.0, 1.0);
  Embedding e(kEmbeddingDim);
  double norm = 0.0;
  for (double& x : e) {
    x = normal(rng);
    norm += x * x;
  }
  for (double& x : e) x /= std::sqrt(norm);
  return e;
}

void validate(const Scenario& s) {
  if (s.schema_version != kScenarioSchemaVersion) fail("/schema_version", "unsupported version");
  if (s.duration_ticks < 0) fail("/duration_ticks", "must be non-negative");
  if (!(s.tick_seconds > 0.0) || !std::isfinite(s.tick_seconds)) {
    fail("/tick_seconds", "must be positive");
  }
  if (s.persons.size() >= 900) fail("/persons", "at most 899 persons are supported");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < s.persons.size(); ++i) {
    if (!ids.insert(s.persons[i].id).second) {
      fail("/persons/" + std::to_string(i) + "/id", "duplicate person id");
    }
  }
  if (!s.persons.empty() || !s.user.empty()) {
    const ScriptedPerson* owner = s.person(s.user);
    if (!owner) fail("/user", "must name a scripted person");
    if (!owner->enrolled) fail("/user", "the device owner must be enrolled");
  }
  for (std::size_t i = 0; i < s.acoustic_events.size(); ++i) {
    const auto& a = s.acoustic_events[i];
    const std::string ptr = "/acoustic_events/" + std::to_string(i);
    if (a.tick >= s.duration_ticks) fail(ptr + "/tick", "beyond duration_ticks");
    if (!a.speaker.empty() && !s.person(a.speaker)) fail(ptr + "/speaker", "unknown person");
    if (!a.bearing && a.speaker.empty()) fail(ptr, "bearing or speaker is required");
    if (a.posterior < 0.0 || a.posterior > 1.0) fail(ptr + "/posterior", "must be in [0, 1]");
  }
  std::set<std::string> service_ids;
  for (std::size_t i = 0; i < s.services.size(); ++i) {
    const std::string ptr = "/services/" + std::to_string(i);
    if (s.services[i].arrival_tick >= s.duration_ticks) fail(ptr + "/tick", "beyond duration_ticks");
    if (!service_ids.insert(s.services[i].id).second) fail(ptr + "/id", "duplicate service id");
  }
  for (std::size_t i = 0; i < s.voice_triggers.size(); ++i) {
    if (s.voice_triggers[i].tick >= s.duration_ticks) {
      fail("/voice_triggers/" + std::to_string(i) + "/tick", "beyond duration_ticks");
    }
  }
  const NoiseConfig& n = s.noise;
  if (n.detection_prob < 0.0 || n.detection_prob > 1.0) fail("/noise/detection_prob", "must be in [0, 1]");
  if (n.detection_score <= 0.0 || n.detection_score > 1.0) fail("/noise/detection_score", "must be in (0, 1]");
  if (n.false_positive_rate < 0.0 || n.position_sigma < 0.0 || n.embedding_sigma < 0.0 ||
      n.bearing_sigma < 0.0) {
    fail("/noise", "rates and deviations must be non-negative");
  }
  if (s.condition) {
    const auto expected = condition_counts(*s.condition);
    if (!expected) fail("/condition", "expected condition1 or condition2");
    const ConditionCounts got = count_messages(s);
    if (got.email != expected->email || got.calendar != expected->calendar ||
        got.other != expected->other) {
      fail("/services", "message counts " + std::to_string(got.email) + "/" +
                            std::to_string(got.calendar) + "/" + std::to_string(got.other) +
                            " do not match " + *s.condition + " (" +
                            std::to_string(expected->email) + "/" +
                            std::to_string(expected->calendar) + "/" +
                            std::to_string(expected->other) + ")");
    }
    if (s.duration_ticks != expected->duration_ticks) {
      fail("/duration_ticks", "does not match " + *s.condition);
    }
  }
}

Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON at byte ") +
                          std::to_string(e.byte) + ": " + e.what());
  }
  const std::string r;
  expect_object(root, r,
                {"schema_version", "name", "condition", "duration_ticks", "tick_seconds",
                 "start_clock", "day_starts", "seed", "device", "user", "whitelist",
                 "news_keywords", "weather_report", "persons", "stationary_objects",
                 "acoustic_events", "services", "voice_triggers", "noise", "durations"});

  Scenario s;
  const json& version = require(root, r, "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kScenarioSchemaVersion) {
    fail("/schema_version", "expected " + std::to_string(kScenarioSchemaVersion));
  }
  s.duration_ticks = as_tick(require(root, r, "duration_ticks"), "/duration_ticks");
  if (const json* v = find(root, "name")) s.name = as_string(*v, "/name");
  if (const json* v = find(root, "condition"); v && !v->is_null()) {
    s.condition = as_string(*v, "/condition");
  }
  if (const json* v = find(root, "tick_seconds")) {
    s.tick_seconds = as_number(*v, "/tick_seconds");
    if (s.tick_seconds <= 0.0) fail("/tick_seconds", "must be positive");
  }
  if (const json* v = find(root, "start_clock")) {
    s.start_minute_of_day = clock_minutes(as_string(*v, "/start_clock"), "/start_clock");
  }
  if (const json* v = find(root, "day_starts")) {
    const json& arr = as_array(*v, "/day_starts");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = child("/day_starts", i);
      s.day_starts.push_back(as_tick(arr[i], ip));
      if (s.day_starts.back() >= std::max<Tick>(s.duration_ticks, 1)) {
        fail(ip, "beyond duration_ticks");
      }
    }
    std::sort(s.day_starts.begin(), s.day_starts.end());
  }
  if (const json* v = find(root, "seed")) {
    if (!v->is_number_integer()) fail("/seed", "expected an integer");
    s.seed = v->get<std::uint64_t>();
  }
  if (const json* v = find(root, "device")) {
    expect_object(*v, "/device", {"x", "y", "heading"});
    s.device_pose.position = point(*v, "/device");
    if (const json* h = find(*v, "heading")) s.device_pose.heading = as_number(*h, "/device/heading");
  }
  if (const json* v = find(root, "user")) s.user = as_string(*v, "/user");
  if (const json* v = find(root, "whitelist")) s.whitelist = string_set(*v, "/whitelist");
  if (const json* v = find(root, "news_keywords")) {
    s.news_keywords = string_set(*v, "/news_keywords");
  }
  if (const json* v = find(root, "weather_report")) {
    s.weather_report = as_string(*v, "/weather_report");
  }

  if (const json* v = find(root, "persons")) {
    const json& arr = as_array(*v, "/persons");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      s.persons.push_back(parse_person(arr[i], child("/persons", i), s.duration_ticks));
    }
  }
  if (const json* v = find(root, "stationary_objects")) {
    const json& arr = as_array(*v, "/stationary_objects");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = child("/stationary_objects", i);
      expect_object(arr[i], ip, {"label", "x", "y"});
      const auto label = parse_object_class(as_string(require(arr[i], ip, "label"), ip + "/label"));
      if (!label) fail(ip + "/label", "unknown object class");
      s.stationary_objects.push_back({*label, point(arr[i], ip)});
    }
  }
  if (const json* v = find(root, "acoustic_events")) {
    const json& arr = as_array(*v, "/acoustic_events");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = child("/acoustic_events", i);
      expect_object(arr[i], ip, {"tick", "label", "posterior", "bearing", "speaker"});
      ScriptedAcoustic a;
      a.tick = as_tick(require(arr[i], ip, "tick"), ip + "/tick");
      const auto label = parse_audio_label(as_string(require(arr[i], ip, "label"), ip + "/label"));
      if (!label) fail(ip + "/label", "unknown audio label");
      a.label = *label;
      if (const json* p = find(arr[i], "posterior")) a.posterior = probability(*p, ip + "/posterior");
      if (const json* b = find(arr[i], "bearing")) a.bearing = as_number(*b, ip + "/bearing");
      if (const json* sp = find(arr[i], "speaker")) a.speaker = as_string(*sp, ip + "/speaker");
      s.acoustic_events.push_back(std::move(a));
    }
    std::stable_sort(s.acoustic_events.begin(), s.acoustic_events.end(),
                     [](const auto& a, const auto& b) { return a.tick < b.tick; });
  }
  if (const json* v = find(root, "services")) {
    const json& arr = as_array(*v, "/services");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      s.services.push_back(parse_service(arr[i], child("/services", i), s.duration_ticks, s));
    }
  }
  if (const json* v = find(root, "voice_triggers")) {
    const json& arr = as_array(*v, "/voice_triggers");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string ip = child("/voice_triggers", i);
      expect_object(arr[i], ip, {"tick", "text"});
      VoiceTrigger t;
      t.tick = as_tick(require(arr[i], ip, "tick"), ip + "/tick");
      t.text = as_string(require(arr[i], ip, "text"), ip + "/text");
      if (t.tick >= s.duration_ticks) fail(ip + "/tick", "beyond duration_ticks");
      s.voice_triggers.push_back(std::move(t));
    }
    std::stable_sort(s.voice_triggers.begin(), s.voice_triggers.end(),
                     [](const auto& a, const auto& b) { return a.tick < b.tick; });
  }
  if (const json* v = find(root, "noise")) {
    expect_object(*v, "/noise",
                  {"detection_prob", "false_positive_rate", "position_sigma", "embedding_sigma",
                   "bearing_sigma", "detection_score"});
    NoiseConfig& n = s.noise;
    if (const json* x = find(*v, "detection_prob")) n.detection_prob = probability(*x, "/noise/detection_prob");
    if (const json* x = find(*v, "false_positive_rate")) {
      n.false_positive_rate = non_negative(*x, "/noise/false_positive_rate");
    }
    if (const json* x = find(*v, "position_sigma")) n.position_sigma = non_negative(*x, "/noise/position_sigma");
    if (const json* x = find(*v, "embedding_sigma")) n.embedding_sigma = non_negative(*x, "/noise/embedding_sigma");
    if (const json* x = find(*v, "bearing_sigma")) n.bearing_sigma = non_negative(*x, "/noise/bearing_sigma");
    if (const json* x = find(*v, "detection_score")) {
      n.detection_score = probability(*x, "/noise/detection_score");
      if (n.detection_score == 0.0) fail("/noise/detection_score", "must be positive");
    }
  }
  if (const json* v = find(root, "durations")) {
    if (!v->is_object()) fail("/durations", "expected an object");
    for (const auto& [key, value] : v->items()) {
      const auto type = parse_content_type(key);
      if (!type) fail("/durations/" + key, "unknown content type; expected one of " + content_type_list());
      const Tick d = as_tick(value, "/durations/" + key);
      if (d < 1) fail("/durations/" + key, "must be at least 1 tick");
      s.durations[*type] = d;
    }
  }

  std::stable_sort(s.services.begin(), s.services.end(),
                   [](const auto& a, const auto& b) { return a.arrival_tick < b.arrival_tick; });
  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open scenario '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace spatial
