#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "spatial/types.hpp"

namespace spatial {

enum class TraceKind {
  observation,
  association,
  trigger,
  enqueue,
  gate_hold,
  delivery,
  attention_cue,
  metric,
};

std::string_view to_string(TraceKind v);
std::optional<TraceKind> parse_trace_kind(std::string_view s);

// Insertion-ordered so serialized records have a stable key order.
using Payload = nlohmann::ordered_json;

struct TraceEvent {
  Tick tick = 0;
  TraceKind kind = TraceKind::metric;
  Payload payload = Payload::object();
};

// One JSON object per line: {"tick":..,"kind":..,"payload":{..}}.
std::string to_jsonl(const TraceEvent& event);
void write_trace(const std::vector<TraceEvent>& trace, std::ostream& out);
// Throws ValidationError naming the line number on malformed input.
std::vector<TraceEvent> read_trace(std::istream& in);

}  // namespace spatial
