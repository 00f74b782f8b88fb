#pragma once

#include <array>
#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spatial/rules.hpp"
#include "spatial/types.hpp"
#include "spatial/world_model.hpp"

namespace spatial {

using JobId = std::uint64_t;

enum class JobKind { single, chained, batch };
std::string_view to_string(JobKind v);

// A queued interaction. Single jobs carry exactly one member; chained and
// batch jobs carry two or more, all of the same type.
struct ScheduledJob {
  JobId id = 0;
  JobKind kind = JobKind::single;
  ContentType type = ContentType::email;
  Priority priority = Priority::medium;
  Importance importance = Importance::medium;
  std::string summary;  // what is spoken
  bool privacy_sensitive = false;
  bool alone_gate = false;
  bool batchable = false;
  std::optional<Tick> min_gap;
  Tick enqueue_tick = 0;
  Tick age_start = 0;  // reset on promotion
  Tick duration = 1;   // ticks of speech
  std::vector<TriggeredInteraction> members;
};

enum class RecombinePolicy { same, promote, demote };

struct SchedulerConfig {
  Tick aging_threshold = 120;
  bool aging = true;
  std::map<ContentType, Tick> default_min_gap{
      {ContentType::email, 60}, {ContentType::news, 120}, {ContentType::weather, 600}};
  Tick cue_ticks = 4;       // logical delay between wake animation and speech
  Tick awake_linger = 20;   // the device stays awake this long after speaking
  bool hold_while_conversing = true;  // L2: conversing holds medium and low jobs
  bool hold_during_task = false;
  RecombinePolicy policy = RecombinePolicy::same;
  std::vector<OrderingHint> ordering;  // L2 only
};

// Per-tick view of the scene consumed by the delivery gates.
struct SchedulerContext {
  bool user_present = false;
  bool alone = false;
  Engagement engagement = Engagement::idle;
  const UserProfile* profile = nullptr;  // delivery history for spacing
};

enum class Gate { absent, not_alone, min_gap, engaged };
std::string_view to_string(Gate v);

struct GateHold {
  JobId job = 0;
  Gate reason = Gate::absent;
};

struct Delivery {
  ScheduledJob job;
  Tick tick = 0;
  bool from_idle = false;
  std::optional<Tick> cue_tick;
};

struct AttentionCue {
  Tick tick = 0;
  Tick speak_tick = 0;
};

struct TickResult {
  std::optional<Delivery> delivery;
  std::optional<AttentionCue> cue;
  // Holds are reported when a job's blocking gate changes, not every tick.
  std::vector<GateHold> holds;
  std::vector<JobId> promoted;
  std::vector<JobId> recombined;  // ids of jobs created by recombination
  std::optional<JobId> preempted;  // proactive speech cut short by a reactive job
  bool cue_cancelled = false;
};

struct QueueEntry {
  int queue = 0;
  JobId job = 0;
  Tick age = 0;
};

class Scheduler {
 public:
  explicit Scheduler(SchedulerConfig config = {});

  // Appends to the tail of the queue for the job's priority. Reactive content
  // always goes to queue 0 and queue 0 accepts nothing else. Returns the
  // assigned job id, also written into the member's `id`.
  JobId enqueue(TriggeredInteraction interaction, Tick now, Tick duration = 1);

  TickResult tick(Tick now, const SchedulerContext& context, Mode mode);

  // Merges same-type batchable jobs of one queue. Returns the ids of new jobs.
  std::vector<JobId> recombine(int queue, RecombinePolicy policy, Tick now);

  // Promotes non-reactive jobs waiting at least the aging threshold.
  std::vector<JobId> age(Tick now);

  // Accepts a job id or the id of a member inside a chained/batch job; the
  // latter shrinks the job in place and returns a single job holding the
  // removed member. Throws std::out_of_range when unknown.
  ScheduledJob remove(JobId id);

  [[nodiscard]] std::vector<QueueEntry> snapshot(Tick now) const;
  [[nodiscard]] const std::list<ScheduledJob>& queue(int index) const;
  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] bool speaking(Tick now) const { return now < busy_until_; }
  [[nodiscard]] const SchedulerConfig& config() const { return config_; }

 private:
  std::optional<Gate> blocking_gate(const ScheduledJob& job, Tick now,
                                    const SchedulerContext& context, Mode mode) const;
  std::optional<std::pair<int, std::list<ScheduledJob>::iterator>> select(
      Tick now, const SchedulerContext& context, Mode mode, std::vector<GateHold>* holds);
  Delivery deliver(int queue, std::list<ScheduledJob>::iterator it, Tick now, bool from_idle);
  std::string render_summary(const ScheduledJob& job) const;

  SchedulerConfig config_;
  std::array<std::list<ScheduledJob>, kQueueCount> queues_;
  std::map<JobId, Gate> last_hold_;
  std::map<ContentType, Tick> last_delivery_;
  JobId next_id_ = 1;
  Tick busy_until_ = 0;
  Tick awake_until_ = 0;
  std::optional<Tick> speak_tick_;  // pending attention cue
  Tick cue_tick_ = 0;
  bool speaking_proactive_ = false;
  JobId speaking_job_ = 0;
};

}  // namespace spatial
