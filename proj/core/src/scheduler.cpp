#include "spatial/scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace spatial {
namespace {

std::string batch_noun(ContentType type) {
  switch (type) {
    case ContentType::email:
      return "emails";
    case ContentType::calendar:
      return "calendar reminders";
    case ContentType::news:
      return "news updates";
    default:
      return std::string(to_string(type)) + " updates";
  }
}

// Lower enum value is more important.
Importance most_important(Importance a, Importance b) {
  return static_cast<int>(a) <= static_cast<int>(b) ? a : b;
}

}  // namespace

std::string_view to_string(JobKind v) {
  switch (v) {
    case JobKind::single:
      return "single";
    case JobKind::chained:
      return "chained";
    case JobKind::batch:
      return "batch";
  }
  return "?";
}

std::string_view to_string(Gate v) {
  switch (v) {
    case Gate::absent:
      return "absent";
    case Gate::not_alone:
      return "not_alone";
    case Gate::min_gap:
      return "min_gap";
    case Gate::engaged:
      return "engaged";
  }
  return "?";
}

Scheduler::Scheduler(SchedulerConfig config) : config_(std::move(config)) {
  if (config_.aging_threshold < 1) throw ValidationError("aging threshold must be >= 1");
  if (config_.cue_ticks < 0 || config_.awake_linger < 0) {
    throw ValidationError("cue and linger ticks must be >= 0");
  }
  for (const auto& [type, gap] : config_.default_min_gap) {
    if (gap < 0) throw ValidationError("min gap must be >= 0");
  }
}

JobId Scheduler::enqueue(TriggeredInteraction interaction, Tick now, Tick duration) {
  const int level = static_cast<int>(interaction.priority);
  if (level < 0 || level >= kQueueCount) throw ValidationError("unknown priority level");
  if (duration < 1) throw ValidationError("job duration must be >= 1 tick");
  if (interaction.min_gap && *interaction.min_gap < 0) throw ValidationError("negative min gap");
  if (interaction.type == ContentType::reactive) {
    interaction.priority = Priority::reactive;
  } else if (interaction.priority == Priority::reactive) {
    throw ValidationError("queue 0 is reserved for reactive content");
  }

  ScheduledJob job;
  job.id = next_id_++;
  interaction.id = job.id;
  job.kind = JobKind::single;
  job.type = interaction.type;
  job.priority = interaction.priority;
  job.importance = interaction.importance;
  job.summary = interaction.content;
  job.privacy_sensitive = interaction.privacy_sensitive;
  job.alone_gate = interaction.alone_gate;
  job.batchable = interaction.batchable;
  job.min_gap = interaction.min_gap;
  job.enqueue_tick = now;
  job.age_start = now;
  job.duration = duration;
  job.members.push_back(std::move(interaction));
  queues_[static_cast<std::size_t>(job.priority)].push_back(std::move(job));
  return next_id_ - 1;
}

std::optional<Gate> Scheduler::blocking_gate(const ScheduledJob& job, Tick now,
                                             const SchedulerContext& context, Mode mode) const {
  if (job.type == ContentType::reactive) return std::nullopt;
  if (!context.user_present) return Gate::absent;
  if (mode == Mode::L2 && job.alone_gate && !context.alone) return Gate::not_alone;

  Tick gap = 0;
  if (job.min_gap) {
    gap = *job.min_gap;
  } else if (auto it = config_.default_min_gap.find(job.type); it != config_.default_min_gap.end()) {
    gap = it->second;
  }
  if (gap > 0) {
    std::optional<Tick> last;
    if (auto it = last_delivery_.find(job.type); it != last_delivery_.end()) last = it->second;
    if (context.profile) {
      if (auto rec = last_of_type(*context.profile, job.type)) {
        last = std::max(last.value_or(rec->delivery_tick), rec->delivery_tick);
      }
    }
    if (last && now - *last < gap) return Gate::min_gap;
  }

  if (mode == Mode::L2 && job.priority >= Priority::medium) {
    const bool held =
        (context.engagement == Engagement::conversing && config_.hold_while_conversing) ||
        (context.engagement == Engagement::task && config_.hold_during_task);
    if (held) return Gate::engaged;
  }
  return std::nullopt;
}

std::optional<std::pair<int, std::list<ScheduledJob>::iterator>> Scheduler::select(
    Tick now, const SchedulerContext& context, Mode mode, std::vector<GateHold>* holds) {
  std::optional<std::pair<int, std::list<ScheduledJob>::iterator>> chosen;
  for (int q = 0; q < kQueueCount; ++q) {
    auto& queue = queues_[static_cast<std::size_t>(q)];
    std::vector<std::list<ScheduledJob>::iterator> ready;
    for (auto it = queue.begin(); it != queue.end(); ++it) {
      const auto gate = blocking_gate(*it, now, context, mode);
      if (!gate) {
        last_hold_.erase(it->id);
        ready.push_back(it);
        continue;
      }
      auto [slot, inserted] = last_hold_.try_emplace(it->id, *gate);
      if (inserted || slot->second != *gate) {
        slot->second = *gate;
        if (holds) holds->push_back({it->id, *gate});
      }
    }
    if (chosen || ready.empty()) continue;

    auto pick = ready.front();
    if (mode == Mode::L2 && !config_.ordering.empty()) {
      auto dominated = [&](const ScheduledJob& c) {
        for (auto d : ready) {
          if (d->id == c.id || d->type == c.type) continue;
          for (const auto& h : config_.ordering) {
            if (h.first.matches(d->type, d->importance) && h.then.matches(c.type, c.importance)) {
              return true;
            }
          }
        }
        return false;
      };
      for (auto c : ready) {
        if (!dominated(*c)) {
          pick = c;
          break;
        }
      }
    }
    chosen = std::make_pair(q, pick);
  }
  return chosen;
}

Delivery Scheduler::deliver(int queue, std::list<ScheduledJob>::iterator it, Tick now,
                            bool from_idle) {
  Delivery d;
  d.job = std::move(*it);
  queues_[static_cast<std::size_t>(queue)].erase(it);
  d.tick = now;
  d.from_idle = from_idle;
  last_hold_.erase(d.job.id);
  last_delivery_[d.job.type] = now;
  busy_until_ = now + d.job.duration;
  awake_until_ = busy_until_ + config_.awake_linger;
  speaking_proactive_ = d.job.type != ContentType::reactive;
  speaking_job_ = d.job.id;
  return d;
}

TickResult Scheduler::tick(Tick now, const SchedulerContext& context, Mode mode) {
  TickResult r;
  if (mode == Mode::L2) {
    for (int q = 1; q < kQueueCount; ++q) {
      auto ids = recombine(q, config_.policy, now);
      r.recombined.insert(r.recombined.end(), ids.begin(), ids.end());
    }
  }
  if (config_.aging) r.promoted = age(now);

  // The keyword phrase has woken the device, so reactive answers never cue.
  if (!queues_[0].empty()) {
    if (speaking(now) && speaking_proactive_) {
      r.preempted = speaking_job_;
      busy_until_ = now;
    }
    if (speaking(now)) return r;
    if (speak_tick_) {
      speak_tick_.reset();
      r.cue_cancelled = true;
    }
    r.delivery = deliver(0, queues_[0].begin(), now, false);
    return r;
  }
  if (speaking(now)) return r;

  if (speak_tick_) {
    if (now < *speak_tick_) return r;
    speak_tick_.reset();
    auto sel = select(now, context, mode, &r.holds);
    if (!sel) {
      r.cue_cancelled = true;
      return r;
    }
    r.delivery = deliver(sel->first, sel->second, now, true);
    r.delivery->cue_tick = cue_tick_;
    return r;
  }

  auto sel = select(now, context, mode, &r.holds);
  if (!sel) return r;
  const bool idle = now >= awake_until_;
  if (idle && config_.cue_ticks > 0) {
    cue_tick_ = now;
    speak_tick_ = now + config_.cue_ticks;
    r.cue = AttentionCue{now, *speak_tick_};
    return r;
  }
  r.delivery = deliver(sel->first, sel->second, now, idle);
  if (idle) r.delivery->cue_tick = now;
  return r;
}

std::string Scheduler::render_summary(const ScheduledJob& job) const {
  if (job.members.size() == 1) return job.members.front().content;
  if (job.kind == JobKind::chained) {
    std::string out;
    for (const auto& m : job.members) {
      if (!out.empty()) out += ' ';
      out += m.content;
    }
    return out;
  }
  return "the user has " + std::to_string(job.members.size()) + " " + batch_noun(job.type);
}

std::vector<JobId> Scheduler::recombine(int queue, RecombinePolicy policy, Tick now) {
  (void)now;
  if (queue < 1 || queue >= kQueueCount) throw ValidationError("recombine: queue out of range");
  auto& q = queues_[static_cast<std::size_t>(queue)];

  using Key = std::tuple<ContentType, bool, bool>;
  std::map<Key, std::vector<std::list<ScheduledJob>::iterator>> groups;
  std::vector<Key> order;
  for (auto it = q.begin(); it != q.end(); ++it) {
    if (!it->batchable) continue;
    Key key{it->type, it->importance == Importance::high, it->alone_gate};
    auto& g = groups[key];
    if (g.empty()) order.push_back(key);
    g.push_back(it);
  }

  std::vector<JobId> created;
  for (const Key& key : order) {
    auto& group = groups[key];
    if (group.size() < 2) continue;
    const bool high = std::get<1>(key);

    ScheduledJob merged;
    merged.id = next_id_++;
    merged.kind = high ? JobKind::chained : JobKind::batch;
    merged.type = std::get<0>(key);
    merged.importance = group.front()->importance;
    merged.alone_gate = std::get<2>(key);
    merged.batchable = true;
    merged.min_gap = group.front()->min_gap;
    merged.enqueue_tick = group.front()->enqueue_tick;
    merged.age_start = group.front()->age_start;
    merged.duration = 0;
    for (auto it : group) {
      merged.importance = most_important(merged.importance, it->importance);
      merged.privacy_sensitive = merged.privacy_sensitive || it->privacy_sensitive;
      merged.enqueue_tick = std::min(merged.enqueue_tick, it->enqueue_tick);
      merged.age_start = std::min(merged.age_start, it->age_start);
      merged.duration = high ? merged.duration + it->duration : std::max(merged.duration, it->duration);
      for (auto& m : it->members) merged.members.push_back(std::move(m));
    }
    merged.summary = render_summary(merged);

    int target = queue;
    if (policy == RecombinePolicy::promote) target = std::max(1, queue - 1);
    if (policy == RecombinePolicy::demote) target = std::min(kQueueCount - 1, queue + 1);
    merged.priority = static_cast<Priority>(target);

    auto& dest = queues_[static_cast<std::size_t>(target)];
    if (target == queue) {
      q.insert(group.front(), std::move(merged));
    } else {
      dest.push_back(std::move(merged));
    }
    for (auto it : group) {
      last_hold_.erase(it->id);
      q.erase(it);
    }
    created.push_back(next_id_ - 1);
  }
  return created;
}

std::vector<JobId> Scheduler::age(Tick now) {
  std::vector<JobId> promoted;
  for (int q = 2; q < kQueueCount; ++q) {
    auto& src = queues_[static_cast<std::size_t>(q)];
    auto& dst = queues_[static_cast<std::size_t>(q - 1)];
    for (auto it = src.begin(); it != src.end();) {
      if (now - it->age_start < config_.aging_threshold) {
        ++it;
        continue;
      }
      auto next = std::next(it);
      it->priority = static_cast<Priority>(q - 1);
      it->age_start = now;
      promoted.push_back(it->id);
      dst.splice(dst.end(), src, it);
      it = next;
    }
  }
  return promoted;
}

ScheduledJob Scheduler::remove(JobId id) {
  for (auto& q : queues_) {
    for (auto it = q.begin(); it != q.end(); ++it) {
      if (it->id == id) {
        ScheduledJob out = std::move(*it);
        q.erase(it);
        last_hold_.erase(id);
        return out;
      }
      if (it->members.size() < 2) continue;
      auto m = std::find_if(it->members.begin(), it->members.end(),
                            [&](const TriggeredInteraction& t) { return t.id == id; });
      if (m == it->members.end()) continue;

      ScheduledJob out;
      out.id = m->id;
      out.kind = JobKind::single;
      out.type = m->type;
      out.priority = it->priority;
      out.importance = m->importance;
      out.summary = m->content;
      out.privacy_sensitive = m->privacy_sensitive;
      out.alone_gate = m->alone_gate;
      out.batchable = m->batchable;
      out.min_gap = m->min_gap;
      out.enqueue_tick = it->enqueue_tick;
      out.age_start = it->age_start;
      out.duration = it->kind == JobKind::chained
                         ? std::max<Tick>(1, it->duration / static_cast<Tick>(it->members.size()))
                         : it->duration;
      out.members.push_back(std::move(*m));
      it->members.erase(m);

      if (it->kind == JobKind::chained) it->duration = std::max<Tick>(1, it->duration - out.duration);
      if (it->members.size() == 1) it->kind = JobKind::single;
      it->privacy_sensitive = std::any_of(it->members.begin(), it->members.end(),
                                          [](const auto& t) { return t.privacy_sensitive; });
      it->summary = render_summary(*it);
      return out;
    }
  }
  throw std::out_of_range("no queued job or member with id " + std::to_string(id));
}

std::vector<QueueEntry> Scheduler::snapshot(Tick now) const {
  std::vector<QueueEntry> out;
  for (int q = 0; q < kQueueCount; ++q) {
    for (const auto& job : queues_[static_cast<std::size_t>(q)]) {
      out.push_back({q, job.id, now - job.age_start});
    }
  }
  return out;
}

const std::list<ScheduledJob>& Scheduler::queue(int index) const {
  if (index < 0 || index >= kQueueCount) throw std::out_of_range("queue index");
  return queues_[static_cast<std::size_t>(index)];
}

std::size_t Scheduler::size() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

}  // namespace spatial
