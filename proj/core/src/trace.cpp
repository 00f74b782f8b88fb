#include "spatial/trace.hpp"

#include <array>
#include <istream>
#include <ostream>
#include <utility>

namespace spatial {
namespace {

constexpr std::array<std::pair<TraceKind, std::string_view>, 8> kNames{{
    {TraceKind::observation, "observation"},
    {TraceKind::association, "association"},
    {TraceKind::trigger, "trigger"},
    {TraceKind::enqueue, "enqueue"},
    {TraceKind::gate_hold, "gate_hold"},
    {TraceKind::delivery, "delivery"},
    {TraceKind::attention_cue, "attention_cue"},
    {TraceKind::metric, "metric"},
}};

}  // namespace

std::string_view to_string(TraceKind v) {
  for (const auto& [k, name] : kNames) {
    if (k == v) return name;
  }
  return "?";
}

std::optional<TraceKind> parse_trace_kind(std::string_view s) {
  for (const auto& [k, name] : kNames) {
    if (name == s) return k;
  }
  return std::nullopt;
}

std::string to_jsonl(const TraceEvent& event) {
  Payload record = Payload::object();
  record["tick"] = event.tick;
  record["kind"] = std::string(to_string(event.kind));
  record["payload"] = event.payload;
  return record.dump();
}

void write_trace(const std::vector<TraceEvent>& trace, std::ostream& out) {
  for (const auto& e : trace) out << to_jsonl(e) << '\n';
}

std::vector<TraceEvent> read_trace(std::istream& in) {
  std::vector<TraceEvent> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fail = [&](const std::string& what) {
      throw ValidationError("trace line " + std::to_string(line_no) + ": " + what);
    };
    Payload record;
    try {
      record = Payload::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      fail(e.what());
    }
    if (!record.is_object() || !record.contains("tick") || !record.contains("kind") ||
        !record.contains("payload") || !record["tick"].is_number_integer() ||
        !record["kind"].is_string()) {
      fail("expected {tick, kind, payload}");
    }
    const auto kind = parse_trace_kind(record["kind"].get<std::string>());
    if (!kind) fail("unknown kind");
    out.push_back({record["tick"].get<Tick>(), *kind, record["payload"]});
  }
  return out;
}

}  // namespace spatial
