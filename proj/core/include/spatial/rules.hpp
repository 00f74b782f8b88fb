#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "spatial/clock.hpp"
#include "spatial/predicate.hpp"
#include "spatial/types.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

enum class EventKind { user_detected, email, calendar, news, weather, traffic, iot, voice_trigger };

std::string_view to_string(EventKind v);
std::optional<EventKind> parse_event_kind(std::string_view s);

// Timed input from an external service. Only the fields relevant to `kind`
// are populated.
struct ServiceEvent {
  std::string id;
  EventKind kind = EventKind::email;
  Tick arrival_tick = 0;
  std::string sender;
  std::string sender_group;  // e.g. family, boss, friends
  std::string subject;
  std::string body;
  bool private_flag = false;  // email and calendar only
  bool newsletter = false;
  bool spam = false;
  std::optional<Tick> event_start_tick;  // calendar
  std::string headline;                  // news
  std::vector<std::string> tags;         // news
  std::string text;                      // weather/traffic/iot report, voice query
};

// What a rule fires on: a presence event, a service event, or (for
// composition) another rule's output.
struct RuleTrigger {
  std::optional<EventKind> event;
  std::string rule;  // non-empty for composed rules
};

enum class ActionKind { speak, wake_animation, led_pattern, iot_command };

struct Action {
  ActionKind kind = ActionKind::speak;
  std::string argument;
  friend bool operator==(const Action&, const Action&) = default;
};

enum class Classifier { none, calendar, email, news };

struct InteractionRule {
  std::string id;
  ContentType type = ContentType::email;
  std::optional<Priority> level;  // nullopt: queue follows the classified importance
  Classifier classify = Classifier::none;
  std::optional<Tick> min_gap;  // nullopt: scheduler default for the type
  RuleTrigger trigger;
  Predicate when;
  std::vector<Action> outputs;
  bool privacy_gate = false;  // privacy-sensitive output waits until the user is alone
  bool batchable = false;
  std::string message;  // template: $User $sender $subject $body $headline $text $weather
};

// "Deliver `first` before `then`" when both are waiting in the same queue.
struct TypeSelector {
  ContentType type = ContentType::email;
  std::optional<Importance> importance;
  bool negate_importance = false;

  [[nodiscard]] bool matches(ContentType t, Importance i) const;
};

struct OrderingHint {
  TypeSelector first;
  TypeSelector then;
};

struct RulePack {
  std::string name;
  std::vector<InteractionRule> rules;
  std::vector<OrderingHint> ordering;
};

struct TriggeredInteraction {
  std::uint64_t id = 0;  // assigned by the caller
  std::string rule_id;
  ContentType type = ContentType::email;
  Priority priority = Priority::medium;
  Importance importance = Importance::medium;
  std::string content;
  bool privacy_sensitive = false;
  bool alone_gate = false;
  bool batchable = false;
  std::optional<Tick> min_gap;
  Tick created_tick = 0;
  std::vector<Action> outputs;
  std::string source_event;  // service event id, empty for presence/composed output
  std::optional<EventKind> source_kind;

  friend bool operator==(const TriggeredInteraction&, const TriggeredInteraction&) = default;
};

struct TriggerEvent {
  EventKind kind = EventKind::user_detected;
  std::optional<ServiceEvent> service;
  Tick tick = 0;
};

struct RuleEnvironment {
  std::set<std::string> whitelist{"family", "boss", "friends"};
  std::set<std::string> news_keywords{"terrorist", "politics"};
  SimClock clock;
  std::string weather_report = "Today will be mostly sunny with a high of 18 degrees.";
};

struct CalendarPriority {
  Importance level = Importance::low;
  bool stale = false;
};

// Within two simulated hours (inclusive) -> high; later the same simulated
// day -> medium; otherwise low. Past events are low and flagged stale.
CalendarPriority calendar_priority(Tick event_start, Tick now, const SimClock& clock);

// Whitelisted sender -> high; spam or newsletter -> low; otherwise normal.
Importance email_importance(const ServiceEvent& email, const std::set<std::string>& whitelist);

// Any keyword among the tags or inside the headline (case-insensitive) -> high.
Importance news_priority(std::string_view headline, const std::vector<std::string>& tags,
                         const std::set<std::string>& keywords);

// Fires every rule whose trigger matches the event and whose predicate holds,
// then composed rules transitively, in pack order. Pure.
std::vector<TriggeredInteraction> evaluate(const RulePack& pack, const TriggerEvent& event,
                                           const RuleContext& context, const UserProfile& profile,
                                           const RuleEnvironment& env);

// Declarative text format, one record per line (fields separated by '|'):
//   rule  | id | type | level | classify | gap | trigger | when | outputs | flags | message
//   order | first[:importance] | then[:importance]
// Throws ValidationError with the line number on malformed records, unknown
// composition targets or composition cycles.
RulePack parse_rulepack(std::string_view text, std::string name = "custom");
RulePack load_rulepack(const std::string& path);

// Reference encodings of the push-like (L1) and context-aware (L2) packs.
const RulePack& l1_rulepack();
const RulePack& l2_rulepack();
std::string_view l1_rulepack_text();
std::string_view l2_rulepack_text();

}  // namespace spatial
