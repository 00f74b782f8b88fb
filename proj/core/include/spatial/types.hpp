#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace spatial {

using Tick = std::int64_t;
using ObservationId = std::int64_t;
using TrajectoryId = std::int64_t;
using UserId = std::string;

inline constexpr std::size_t kEmbeddingDim = 128;
inline constexpr double kPi = 3.14159265358979323846;

using Embedding = std::vector<double>;
// Observations are copied into trajectories and results many times per
// solve; the feature vector itself is immutable once sensed.
using EmbeddingRef = std::shared_ptr<const Embedding>;

inline EmbeddingRef make_embedding(Embedding values) {
  return std::make_shared<const Embedding>(std::move(values));
}

// Raised for malformed input to any public operation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  [[nodiscard]] double squared_norm() const { return x * x + y * y; }
  [[nodiscard]] double norm() const { return std::sqrt(squared_norm()); }
};

struct Pose {
  Vec2 position;
  double heading = 0.0;  // radians, world frame
};

enum class ObjectClass { person, tv, sofa, door, other };
enum class AudioLabel { speech, door, footsteps, tv, other };
enum class Engagement { idle, conversing, task };
enum class Mode { L1, L2 };

// Scheduler queue levels; the numeric value is the queue index.
enum class Priority { reactive = 0, high = 1, medium = 2, low = 3 };
inline constexpr int kQueueCount = 4;

// Content classification shared by the email/news/calendar classifiers.
// `normal` is the same level as `medium`.
enum class Importance { high, medium, low, normal = medium };

enum class ContentType {
  greeting,
  weather,
  iot,
  calendar,
  email,
  news,
  traffic,
  tv,
  reactive,
};

std::string_view to_string(ObjectClass v);
std::string_view to_string(AudioLabel v);
std::string_view to_string(Engagement v);
std::string_view to_string(Mode v);
std::string_view to_string(Priority v);
std::string_view to_string(Importance v);
std::string_view to_string(ContentType v);

std::optional<ObjectClass> parse_object_class(std::string_view s);
std::optional<AudioLabel> parse_audio_label(std::string_view s);
std::optional<Engagement> parse_engagement(std::string_view s);
std::optional<Mode> parse_mode(std::string_view s);
std::optional<Priority> parse_priority(std::string_view s);
std::optional<Importance> parse_importance(std::string_view s);
std::optional<ContentType> parse_content_type(std::string_view s);

inline Priority priority_for(Importance importance) {
  switch (importance) {
    case Importance::high:
      return Priority::high;
    case Importance::medium:
      return Priority::medium;
    case Importance::low:
      return Priority::low;
  }
  return Priority::medium;
}

// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double angle) {
  double r = std::fmod(angle, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

// Smallest absolute difference between two angles, in [0, pi].
inline double angular_distance(double a, double b) {
  double d = wrap_two_pi(a - b);
  return d > kPi ? 2.0 * kPi - d : d;
}

}  // namespace spatial
