#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spatial/association.hpp"
#include "spatial/fusion.hpp"
#include "spatial/rules.hpp"
#include "spatial/scenario.hpp"
#include "spatial/scheduler.hpp"
#include "spatial/trace.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

enum class Fault { none, privacy };

struct RunOptions {
  Mode mode = Mode::L2;
  SchedulerConfig scheduler;  // ordering hints come from the rule pack when empty
  EnergyParams energy;
  OnlineParams online;
  PresenceConfig presence;
  IdentityParams identity;
  double accept_threshold = Gallery{}.accept_threshold;
  double background_margin = Gallery{}.background_margin;
  double pair_gate = kDefaultPairGate;
  Tick stranger_confirm_ticks = 10;  // unknown identity this long before greeting
  std::optional<RulePack> rules;     // built-in pack for the mode when empty
  bool trace_observations = true;
  Fault fault = Fault::none;  // test hook: deliberately break an invariant
};

struct Metrics {
  std::map<std::string, int> deliveries_by_type;  // counting batch members
  int delivery_events = 0;
  int proactive_delivery_events = 0;
  int reactive_delivery_events = 0;
  int interruptions_while_engaged = 0;  // proactive deliveries while not idle
  int privacy_sensitive_deliveries = 0;
  int privacy_leaks = 0;            // privacy-sensitive deliveries with logged occupancy > 1
  int privacy_leaks_true = 0;       // same, against ground-truth occupancy
  double mean_latency_ticks = 0.0;  // arrival to delivery over proactive members
  Tick max_wait_ticks = 0;
  int batch_count = 0;
  std::vector<int> batch_sizes;
  int chained_count = 0;
  int attention_cues = 0;
  int idle_deliveries = 0;
  double attention_cue_coverage = 0.0;  // deliveries with a preceding cue / deliveries
  double idle_cue_coverage = 1.0;       // idle deliveries cued exactly 2 s earlier / idle
  int messages_email = 0;               // delivered service messages by category
  int messages_calendar = 0;
  int messages_other = 0;
  int triggered = 0;
  int queued_at_end = 0;

  friend bool operator==(const Metrics&, const Metrics&) = default;
};

Payload to_json(const Metrics& m);
std::string metrics_table(const Metrics& m);

// Pure fold over the trace.
Metrics compute_metrics(const std::vector<TraceEvent>& trace, double tick_seconds);

// Returns one message per violated trace invariant; empty when the trace is
// sound.
std::vector<std::string> check_invariants(const std::vector<TraceEvent>& trace, Mode mode,
                                          double tick_seconds);

struct RunResult {
  std::vector<TraceEvent> trace;
  Metrics metrics;
  std::vector<std::string> violations;
};

RunResult run(const Scenario& scenario, const RunOptions& options);

// Type-checked `key=value` override of a scenario or run setting. Throws
// ValidationError for unknown keys or ill-typed values.
void apply_override(Scenario& scenario, RunOptions& options, std::string_view key,
                    std::string_view value);
std::vector<std::string> override_keys();

}  // namespace spatial
