#include "spatial/types.hpp"

#include <array>
#include <utility>

namespace spatial {
namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<ObjectClass, 5> kObjectClassNames{{
    {ObjectClass::person, "person"},
    {ObjectClass::tv, "tv"},
    {ObjectClass::sofa, "sofa"},
    {ObjectClass::door, "door"},
    {ObjectClass::other, "other"},
}};

constexpr NameTable<AudioLabel, 5> kAudioLabelNames{{
    {AudioLabel::speech, "speech"},
    {AudioLabel::door, "door"},
    {AudioLabel::footsteps, "footsteps"},
    {AudioLabel::tv, "tv"},
    {AudioLabel::other, "other"},
}};

constexpr NameTable<Engagement, 3> kEngagementNames{{
    {Engagement::idle, "idle"},
    {Engagement::conversing, "conversing"},
    {Engagement::task, "task"},
}};

constexpr NameTable<Mode, 2> kModeNames{{
    {Mode::L1, "L1"},
    {Mode::L2, "L2"},
}};

constexpr NameTable<Priority, 4> kPriorityNames{{
    {Priority::reactive, "reactive"},
    {Priority::high, "high"},
    {Priority::medium, "medium"},
    {Priority::low, "low"},
}};

constexpr NameTable<Importance, 3> kImportanceNames{{
    {Importance::high, "high"},
    {Importance::medium, "medium"},
    {Importance::low, "low"},
}};

constexpr NameTable<ContentType, 9> kContentTypeNames{{
    {ContentType::greeting, "greeting"},
    {ContentType::weather, "weather"},
    {ContentType::iot, "iot"},
    {ContentType::calendar, "calendar"},
    {ContentType::email, "email"},
    {ContentType::news, "news"},
    {ContentType::traffic, "traffic"},
    {ContentType::tv, "tv"},
    {ContentType::reactive, "reactive"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
std::optional<E> value_of(const NameTable<E, N>& table, std::string_view s) {
  for (const auto& [v, name] : table) {
    if (name == s) return v;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ObjectClass v) { return name_of(kObjectClassNames, v); }
std::string_view to_string(AudioLabel v) { return name_of(kAudioLabelNames, v); }
std::string_view to_string(Engagement v) { return name_of(kEngagementNames, v); }
std::string_view to_string(Mode v) { return name_of(kModeNames, v); }
std::string_view to_string(Priority v) { return name_of(kPriorityNames, v); }
std::string_view to_string(Importance v) { return name_of(kImportanceNames, v); }
std::string_view to_string(ContentType v) { return name_of(kContentTypeNames, v); }

std::optional<ObjectClass> parse_object_class(std::string_view s) {
  return value_of(kObjectClassNames, s);
}
std::optional<AudioLabel> parse_audio_label(std::string_view s) {
  return value_of(kAudioLabelNames, s);
}
std::optional<Engagement> parse_engagement(std::string_view s) {
  return value_of(kEngagementNames, s);
}
std::optional<Mode> parse_mode(std::string_view s) { return value_of(kModeNames, s); }
std::optional<Priority> parse_priority(std::string_view s) {
  return value_of(kPriorityNames, s);
}
std::optional<Importance> parse_importance(std::string_view s) {
  if (s == "normal") return Importance::normal;
  return value_of(kImportanceNames, s);
}
std::optional<ContentType> parse_content_type(std::string_view s) {
  return value_of(kContentTypeNames, s);
}

}  // namespace spatial
