#include "spatial/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "spatial/clock.hpp"
#include "spatial/sensor.hpp"

namespace spatial {
namespace {

constexpr double kCueSeconds = 2.0;

bool is_other_service(const std::string& kind) {
  return kind == "news" || kind == "weather" || kind == "traffic" || kind == "iot";
}

Payload member_json(const TriggeredInteraction& m) {
  Payload j = Payload::object();
  j["id"] = m.id;
  j["rule"] = m.rule_id;
  j["type"] = std::string(to_string(m.type));
  j["importance"] = std::string(to_string(m.importance));
  j["content"] = m.content;
  j["privacy_sensitive"] = m.privacy_sensitive;
  j["created"] = m.created_tick;
  j["source"] = m.source_event;
  j["source_kind"] = m.source_kind ? Payload(std::string(to_string(*m.source_kind))) : Payload();
  return j;
}

Payload snapshot_json(const std::vector<QueueEntry>& snapshot) {
  Payload arr = Payload::array();
  for (const auto& e : snapshot) arr.push_back(Payload::array({e.queue, e.job, e.age}));
  return arr;
}

Tick effective_gap(const ScheduledJob& job, const SchedulerConfig& config) {
  if (job.min_gap) return *job.min_gap;
  auto it = config.default_min_gap.find(job.type);
  return it == config.default_min_gap.end() ? 0 : it->second;
}

class Runner {
 public:
  Runner(const Scenario& scenario, const RunOptions& options)
      : sc_(scenario),
        opt_(options),
        pack_(options.rules ? *options.rules
                            : (options.mode == Mode::L1 ? l1_rulepack() : l2_rulepack())),
        sched_config_(make_scheduler_config()),
        scheduler_(sched_config_),
        assoc_(options.energy, options.online) {
    clock_.tick_seconds = sc_.tick_seconds;
    clock_.start_minute_of_day = sc_.start_minute_of_day;
    clock_.declared_day_starts = sc_.day_starts;
    gallery_.accept_threshold = options.accept_threshold;
    gallery_.background_margin = options.background_margin;
    for (const auto& p : sc_.persons) {
      if (p.enrolled) gallery_.entries[p.id] = p.embedding;
    }
    if (const ScriptedPerson* owner = sc_.person(sc_.user)) {
      owner_ = owner;
      profile_.user_id = owner->id;
      profile_.display_name = owner->name.empty() ? owner->id : owner->name;
      profile_.enrolled_embedding = owner->embedding;
    }
    env_.whitelist = sc_.whitelist;
    env_.news_keywords = sc_.news_keywords;
    env_.clock = clock_;
    env_.weather_report = sc_.weather_report;
    map_.device_pose = sc_.device_pose;
    map_.stationary_objects = sc_.stationary_objects;
  }

  std::vector<TraceEvent> run() {
    for (Tick t = 0; t < sc_.duration_ticks; ++t) step(t);
    if (!trace_.empty() || scheduler_.size() > 0) {
      Payload p = Payload::object();
      p["event"] = "end";
      Payload queued = Payload::array();
      for (int q = 0; q < kQueueCount; ++q) {
        for (const auto& job : scheduler_.queue(q)) {
          for (const auto& m : job.members) queued.push_back(m.content);
        }
      }
      p["queued"] = std::move(queued);
      p["queues"] = snapshot_json(scheduler_.snapshot(sc_.duration_ticks));
      emit(sc_.duration_ticks, TraceKind::metric, std::move(p));
    }
    return std::move(trace_);
  }

 private:
  SchedulerConfig make_scheduler_config() const {
    SchedulerConfig c = opt_.scheduler;
    if (opt_.mode == Mode::L1) {
      c.ordering.clear();
    } else if (c.ordering.empty()) {
      c.ordering = pack_.ordering;
    }
    return c;
  }

  void emit(Tick tick, TraceKind kind, Payload payload) {
    trace_.push_back({tick, kind, std::move(payload)});
  }

  void step(Tick t) {
    map_.clock = t;
    const SensorFrame frame = sensor_step(sc_, t);
    if (opt_.trace_observations) {
      for (const auto& o : frame.observations) {
        Payload p = Payload::object();
        p["id"] = o.id;
        p["x"] = o.position.x;
        p["y"] = o.position.y;
        p["score"] = o.detection_score;
        emit(t, TraceKind::observation, std::move(p));
      }
    }

    const AssociationResult& res = assoc_.update(t, frame.observations);
    if (res.solver_stats.solved) {
      map_ = apply_association(std::move(map_), res.trajectories);
      fold_identity();
      Payload p = Payload::object();
      p["trajectories"] = map_.trajectories.size();
      p["window"] = res.solver_stats.window_size;
      p["augmenting_paths"] = res.solver_stats.augmenting_paths;
      p["work"] = res.solver_stats.work;
      p["total_energy"] = res.total_energy;
      emit(t, TraceKind::association, std::move(p));
    }
    refresh_activity(map_, opt_.presence.presence_horizon);
    pair_audio(t, frame);

    const Engagement engagement = owner_ ? owner_->engagement(t) : Engagement::idle;
    const Presence pres = presence_predicates(map_, profile_, t, engagement, clock_.day_start(t),
                                              opt_.presence);
    RuleContext ctx;
    ctx.alone = pres.alone;
    ctx.user_present = pres.user_present;
    ctx.first_time = pres.first_time;
    ctx.first_time_today = pres.first_time_today;
    ctx.recognized = pres.user_present;
    ctx.engagement = engagement;
    ctx.minute_of_day = clock_.minute_of_day(t);

    if (pres.user_present && (pres.first_time || pres.first_time_today)) {
      fire(TriggerEvent{EventKind::user_detected, std::nullopt, t}, ctx, "user");
    }
    mark_seen(profile_, pres, t);
    if (stranger_in_view(t)) {
      RuleContext s = ctx;
      s.stranger = true;
      s.recognized = false;
      s.first_time = false;
      s.first_time_today = false;
      fire(TriggerEvent{EventKind::user_detected, std::nullopt, t}, s, "stranger");
    }

    while (next_service_ < sc_.services.size() && sc_.services[next_service_].arrival_tick == t) {
      const ServiceEvent& e = sc_.services[next_service_++];
      fire(TriggerEvent{e.kind, e, t}, ctx, e.id);
    }
    while (next_voice_ < sc_.voice_triggers.size() && sc_.voice_triggers[next_voice_].tick == t) {
      ServiceEvent e;
      e.id = "voice-" + std::to_string(next_voice_);
      e.kind = EventKind::voice_trigger;
      e.arrival_tick = t;
      e.text = sc_.voice_triggers[next_voice_++].text;
      fire(TriggerEvent{EventKind::voice_trigger, e, t}, ctx, e.id);
    }

    SchedulerContext sctx{pres.user_present, pres.alone, engagement, &profile_};
    TickResult tr = scheduler_.tick(t, sctx, opt_.mode);
    for (JobId id : tr.recombined) {
      Payload p = Payload::object();
      p["origin"] = "recombine";
      const ScheduledJob* job = find_job(id);
      p["job"] = id;
      if (job) {
        p["queue"] = static_cast<int>(job->priority);
        p["kind"] = std::string(to_string(job->kind));
        p["summary"] = job->summary;
        Payload ids = Payload::array();
        for (const auto& m : job->members) ids.push_back(m.id);
        p["members"] = std::move(ids);
      }
      emit(t, TraceKind::enqueue, std::move(p));
    }
    if (!tr.promoted.empty()) {
      Payload p = Payload::object();
      p["event"] = "aging";
      p["promoted"] = tr.promoted;
      emit(t, TraceKind::metric, std::move(p));
    }
    for (const auto& h : tr.holds) {
      Payload p = Payload::object();
      p["job"] = h.job;
      p["reason"] = std::string(to_string(h.reason));
      emit(t, TraceKind::gate_hold, std::move(p));
    }
    if (tr.cue) {
      Payload p = Payload::object();
      p["speak_tick"] = tr.cue->speak_tick;
      p["delay_seconds"] = static_cast<double>(tr.cue->speak_tick - tr.cue->tick) * sc_.tick_seconds;
      emit(t, TraceKind::attention_cue, std::move(p));
    }
    if (tr.cue_cancelled) {
      Payload p = Payload::object();
      p["event"] = "cue_cancelled";
      emit(t, TraceKind::metric, std::move(p));
    }
    if (tr.delivery) deliver(t, *tr.delivery, tr.preempted, pres);
  }

  const ScheduledJob* find_job(JobId id) const {
    for (int q = 0; q < kQueueCount; ++q) {
      for (const auto& job : scheduler_.queue(q)) {
        if (job.id == id) return &job;
      }
    }
    return nullptr;
  }

  void fold_identity() {
    for (auto& traj : map_.trajectories) {
      std::size_t first = traj.observations.size();
      while (first > 0 && traj.observations[first - 1].tick > traj.identity.last_tick) --first;
      for (std::size_t i = first; i < traj.observations.size(); ++i) {
        const Observation& o = traj.observations[i];
        const RecognitionResult face = classify_embedding(*o.appearance, gallery_);
        IdentityDecision decision{o.tick, face.user, face.user ? face.score : 0.0};
        if (auto v = voice_.find({traj.id, o.tick}); v != voice_.end()) {
          decision = fuse_decisions(decision, v->second);
        }
        accumulate_identity(traj.identity, decision, opt_.identity);
      }
    }
  }

  void pair_audio(Tick t, const SensorFrame& frame) {
    if (frame.acoustic.empty()) return;
    std::vector<Trajectory> persons;
    for (const auto& traj : map_.trajectories) {
      if (traj.active && !traj.empty() && traj.back().label == ObjectClass::person) {
        persons.push_back(traj);
      }
    }
    const auto pairs = pair_audio_visual(frame.acoustic, persons, map_, opt_.pair_gate);
    for (const auto& pair : pairs) {
      const AcousticEvent& e = frame.acoustic[pair.event_index];
      Payload p = Payload::object();
      p["acoustic"] = std::string(to_string(e.label));
      p["doa"] = e.doa;
      const Vec2 at = doa_to_cartesian(e.doa, map_.device_pose);
      p["x"] = at.x;
      p["y"] = at.y;
      p["trajectory"] = pair.trajectory ? Payload(*pair.trajectory) : Payload();
      if (pair.trajectory && e.speaker_embedding) {
        const RecognitionResult voice = classify_embedding(*e.speaker_embedding, gallery_);
        IdentityDecision d{t, voice.user, voice.user ? voice.score * e.posterior : 0.0};
        voice_[{*pair.trajectory, t}] = d;
        p["speaker"] = voice.user ? Payload(*voice.user) : Payload();
      }
      emit(t, TraceKind::observation, std::move(p));
    }
  }

  bool stranger_in_view(Tick t) {
    bool seen = false;
    for (const auto& traj : map_.trajectories) {
      if (!traj.active || traj.empty() || traj.identity.user) continue;
      if (traj.identity.last_tick - traj.observations.front().tick < opt_.stranger_confirm_ticks) {
        continue;
      }
      seen = true;
    }
    if (!seen) return false;
    const bool fresh = !last_stranger_ || t - *last_stranger_ > opt_.presence.regreet_absence;
    last_stranger_ = t;
    return fresh;
  }

  void fire(const TriggerEvent& event, const RuleContext& ctx, const std::string& source) {
    std::vector<TriggeredInteraction> out = evaluate(pack_, event, ctx, profile_, env_);
    Payload p = Payload::object();
    p["event"] = std::string(to_string(event.kind));
    p["source"] = source;
    Payload rules = Payload::array();
    for (const auto& i : out) rules.push_back(i.rule_id);
    p["fired"] = std::move(rules);
    emit(event.tick, TraceKind::trigger, std::move(p));

    for (auto& i : out) {
      if (opt_.fault == Fault::privacy) i.alone_gate = false;
      const Tick duration = sc_.duration_of(i.type);
      const JobId id = scheduler_.enqueue(i, event.tick, duration);
      i.id = id;
      Payload e = Payload::object();
      e["origin"] = "trigger";
      e["job"] = id;
      e["queue"] = static_cast<int>(i.type == ContentType::reactive ? Priority::reactive : i.priority);
      e["alone_gate"] = i.alone_gate;
      e["batchable"] = i.batchable;
      e["duration"] = duration;
      e["member"] = member_json(i);
      e["queues"] = snapshot_json(scheduler_.snapshot(event.tick));
      emit(event.tick, TraceKind::enqueue, std::move(e));
    }
  }

  void deliver(Tick t, const Delivery& d, std::optional<JobId> preempted, const Presence& pres) {
    const ScheduledJob& job = d.job;
    Payload p = Payload::object();
    p["job"] = job.id;
    p["kind"] = std::string(to_string(job.kind));
    p["type"] = std::string(to_string(job.type));
    p["queue"] = static_cast<int>(job.priority);
    p["summary"] = job.summary;
    p["privacy_sensitive"] = job.privacy_sensitive;
    p["min_gap"] = effective_gap(job, sched_config_);
    p["duration"] = job.duration;
    p["occupancy"] = pres.occupancy;
    p["occupancy_true"] = true_occupancy(sc_, t);
    p["alone"] = pres.alone;
    p["user_present"] = pres.user_present;
    p["engagement"] = std::string(to_string(pres.engaged));
    p["from_idle"] = d.from_idle;
    p["cue_tick"] = d.cue_tick ? Payload(*d.cue_tick) : Payload();
    p["preempted"] = preempted ? Payload(*preempted) : Payload();
    Payload members = Payload::array();
    for (const auto& m : job.members) members.push_back(member_json(m));
    p["members"] = std::move(members);
    p["queues"] = snapshot_json(scheduler_.snapshot(t));
    emit(t, TraceKind::delivery, std::move(p));

    record_interaction(profile_, InteractionRecord{job.type, t, job.priority,
                                                   job.kind != JobKind::single});
  }

  const Scenario& sc_;
  const RunOptions& opt_;
  RulePack pack_;
  SchedulerConfig sched_config_;
  Scheduler scheduler_;
  OnlineAssociator assoc_;
  SimClock clock_;
  Gallery gallery_;
  UserProfile profile_;
  const ScriptedPerson* owner_ = nullptr;
  RuleEnvironment env_;
  SemanticMap map_;
  std::map<std::pair<TrajectoryId, Tick>, IdentityDecision> voice_;
  std::optional<Tick> last_stranger_;
  std::size_t next_service_ = 0;
  std::size_t next_voice_ = 0;
  std::vector<TraceEvent> trace_;
};

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("override " + std::string(key) + ": '" + std::string(value) +
                          "' is not a valid number");
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  // from_chars for floating point is missing from older standard libraries.
  std::string s(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(out)) {
    throw ValidationError("override " + std::string(key) + ": '" + s + "' is not a valid number");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ValidationError("override " + std::string(key) + ": expected true or false");
}

Tick parse_ticks(std::string_view key, std::string_view value, Tick minimum) {
  const auto v = parse_number<Tick>(key, value);
  if (v < minimum) {
    throw ValidationError("override " + std::string(key) + ": must be >= " + std::to_string(minimum));
  }
  return v;
}

double parse_unit(std::string_view key, std::string_view value) {
  const double v = parse_double(key, value);
  if (v < 0.0 || v > 1.0) throw ValidationError("override " + std::string(key) + ": must be in [0, 1]");
  return v;
}

double parse_non_negative(std::string_view key, std::string_view value) {
  const double v = parse_double(key, value);
  if (v < 0.0) throw ValidationError("override " + std::string(key) + ": must be non-negative");
  return v;
}

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
  validate(scenario);
  Runner runner(scenario, options);
  RunResult r;
  r.trace = runner.run();
  r.metrics = compute_metrics(r.trace, scenario.tick_seconds);
  r.violations = check_invariants(r.trace, options.mode, scenario.tick_seconds);
  return r;
}

Metrics compute_metrics(const std::vector<TraceEvent>& trace, double tick_seconds) {
  Metrics m;
  const Tick cue_lag = static_cast<Tick>(std::llround(kCueSeconds / tick_seconds));
  std::set<std::pair<Tick, Tick>> cues;  // (cue tick, speak tick)
  double latency_sum = 0.0;
  int latency_count = 0;
  int cued = 0;
  int idle_cued = 0;
  for (const auto& e : trace) {
    const Payload& p = e.payload;
    switch (e.kind) {
      case TraceKind::enqueue:
        if (p.value("origin", "") == "trigger") ++m.triggered;
        break;
      case TraceKind::attention_cue:
        ++m.attention_cues;
        cues.insert({e.tick, p.at("speak_tick").get<Tick>()});
        break;
      case TraceKind::metric:
        if (p.value("event", "") == "end") m.queued_at_end = static_cast<int>(p.at("queued").size());
        break;
      case TraceKind::delivery: {
        ++m.delivery_events;
        const std::string type = p.at("type").get<std::string>();
        const bool reactive = type == "reactive";
        if (reactive) {
          ++m.reactive_delivery_events;
        } else {
          ++m.proactive_delivery_events;
          if (p.at("engagement").get<std::string>() != "idle") ++m.interruptions_while_engaged;
        }
        const std::string kind = p.at("kind").get<std::string>();
        const auto& members = p.at("members");
        if (kind == "batch") {
          ++m.batch_count;
          m.batch_sizes.push_back(static_cast<int>(members.size()));
        } else if (kind == "chained") {
          ++m.chained_count;
        }
        if (p.at("privacy_sensitive").get<bool>()) {
          ++m.privacy_sensitive_deliveries;
          if (p.at("occupancy").get<int>() > 1) ++m.privacy_leaks;
          if (p.at("occupancy_true").get<int>() > 1) ++m.privacy_leaks_true;
        }
        const bool has_cue = !p.at("cue_tick").is_null();
        if (has_cue) ++cued;
        if (p.at("from_idle").get<bool>()) {
          ++m.idle_deliveries;
          if (has_cue) {
            const Tick c = p.at("cue_tick").get<Tick>();
            if (e.tick - c == cue_lag && cues.contains({c, e.tick})) ++idle_cued;
          }
        }
        for (const auto& member : members) {
          ++m.deliveries_by_type[member.at("type").get<std::string>()];
          const auto& sk = member.at("source_kind");
          if (sk.is_string()) {
            const std::string s = sk.get<std::string>();
            if (s == "email") ++m.messages_email;
            if (s == "calendar") ++m.messages_calendar;
            if (is_other_service(s)) ++m.messages_other;
          }
          if (!reactive) {
            const Tick wait = e.tick - member.at("created").get<Tick>();
            latency_sum += static_cast<double>(wait);
            ++latency_count;
            m.max_wait_ticks = std::max(m.max_wait_ticks, wait);
          }
        }
        break;
      }
      default:
        break;
    }
  }
  if (latency_count > 0) m.mean_latency_ticks = latency_sum / latency_count;
  if (m.delivery_events > 0) {
    m.attention_cue_coverage = static_cast<double>(cued) / m.delivery_events;
  }
  if (m.idle_deliveries > 0) {
    m.idle_cue_coverage = static_cast<double>(idle_cued) / m.idle_deliveries;
  }
  return m;
}

std::vector<std::string> check_invariants(const std::vector<TraceEvent>& trace, Mode mode,
                                          double tick_seconds) {
  std::vector<std::string> out;
  auto violation = [&](Tick tick, const std::string& what) {
    out.push_back("tick " + std::to_string(tick) + ": " + what);
  };
  const Tick cue_lag = static_cast<Tick>(std::llround(kCueSeconds / tick_seconds));
  std::set<std::pair<Tick, Tick>> cues;
  std::multiset<std::string> triggered;
  std::multiset<std::string> accounted;
  std::map<std::string, Tick> last_delivery;
  bool ended = false;
  Tick previous = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceEvent& e = trace[i];
    const Payload& p = e.payload;
    if (i > 0 && e.tick < previous) violation(e.tick, "trace ticks decrease");
    previous = e.tick;
    switch (e.kind) {
      case TraceKind::enqueue:
        if (p.value("origin", "") == "trigger") {
          triggered.insert(p.at("member").at("content").get<std::string>());
        }
        break;
      case TraceKind::attention_cue:
        cues.insert({e.tick, p.at("speak_tick").get<Tick>()});
        break;
      case TraceKind::metric:
        if (p.value("event", "") == "end") {
          ended = true;
          for (const auto& c : p.at("queued")) accounted.insert(c.get<std::string>());
        }
        break;
      case TraceKind::delivery: {
        const bool alone = p.at("alone").get<bool>();
        const int occupancy = p.at("occupancy").get<int>();
        const std::string job = "job " + std::to_string(p.at("job").get<JobId>());
        if (alone && occupancy != 1) violation(e.tick, job + ": alone with occupancy " +
                                                           std::to_string(occupancy));
        if (mode == Mode::L2 && p.at("privacy_sensitive").get<bool>() &&
            (!alone || occupancy != 1)) {
          violation(e.tick, job + ": privacy-sensitive delivery while not alone");
        }
        if (p.at("from_idle").get<bool>()) {
          const auto& c = p.at("cue_tick");
          if (c.is_null() || e.tick - c.get<Tick>() != cue_lag ||
              !cues.contains({c.get<Tick>(), e.tick})) {
            violation(e.tick, job + ": idle delivery without a cue 2 s earlier");
          }
        }
        const std::string type = p.at("type").get<std::string>();
        const Tick gap = p.at("min_gap").get<Tick>();
        if (auto it = last_delivery.find(type); it != last_delivery.end() && gap > 0 &&
                                                e.tick - it->second < gap) {
          violation(e.tick, job + ": " + type + " delivered " +
                                std::to_string(e.tick - it->second) + " ticks after the last, gap " +
                                std::to_string(gap));
        }
        last_delivery[type] = e.tick;
        for (const auto& member : p.at("members")) {
          accounted.insert(member.at("content").get<std::string>());
        }
        break;
      }
      default:
        break;
    }
  }
  if (!trace.empty() && !ended) violation(previous, "trace has no end record");
  if (triggered != accounted) {
    violation(previous, "content conservation failed: " + std::to_string(triggered.size()) +
                            " triggered vs " + std::to_string(accounted.size()) +
                            " delivered or queued");
  }
  return out;
}

Payload to_json(const Metrics& m) {
  Payload j = Payload::object();
  Payload by_type = Payload::object();
  for (const auto& [k, v] : m.deliveries_by_type) by_type[k] = v;
  j["deliveries_by_type"] = std::move(by_type);
  j["delivery_events"] = m.delivery_events;
  j["proactive_delivery_events"] = m.proactive_delivery_events;
  j["reactive_delivery_events"] = m.reactive_delivery_events;
  j["interruptions_while_engaged"] = m.interruptions_while_engaged;
  j["privacy_sensitive_deliveries"] = m.privacy_sensitive_deliveries;
  j["privacy_leaks"] = m.privacy_leaks;
  j["privacy_leaks_true"] = m.privacy_leaks_true;
  j["mean_latency_ticks"] = m.mean_latency_ticks;
  j["max_wait_ticks"] = m.max_wait_ticks;
  j["batch_count"] = m.batch_count;
  j["batch_sizes"] = m.batch_sizes;
  j["chained_count"] = m.chained_count;
  j["attention_cues"] = m.attention_cues;
  j["idle_deliveries"] = m.idle_deliveries;
  j["attention_cue_coverage"] = m.attention_cue_coverage;
  j["idle_cue_coverage"] = m.idle_cue_coverage;
  j["messages"] = Payload{{"email", m.messages_email},
                          {"calendar", m.messages_calendar},
                          {"other", m.messages_other}};
  j["triggered"] = m.triggered;
  j["queued_at_end"] = m.queued_at_end;
  return j;
}

std::string metrics_table(const Metrics& m) {
  std::ostringstream out;
  auto row = [&](const std::string& name, const std::string& value) {
    out << std::left << std::setw(32) << name << value << '\n';
  };
  auto fixed = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << v;
    return s.str();
  };
  row("delivery_events", std::to_string(m.delivery_events));
  row("proactive_delivery_events", std::to_string(m.proactive_delivery_events));
  row("reactive_delivery_events", std::to_string(m.reactive_delivery_events));
  for (const auto& [type, n] : m.deliveries_by_type) row("  delivered " + type, std::to_string(n));
  row("messages email/calendar/other", std::to_string(m.messages_email) + "/" +
                                           std::to_string(m.messages_calendar) + "/" +
                                           std::to_string(m.messages_other));
  row("interruptions_while_engaged", std::to_string(m.interruptions_while_engaged));
  row("privacy_sensitive_deliveries", std::to_string(m.privacy_sensitive_deliveries));
  row("privacy_leaks", std::to_string(m.privacy_leaks));
  row("privacy_leaks_true", std::to_string(m.privacy_leaks_true));
  row("mean_latency_ticks", fixed(m.mean_latency_ticks));
  row("max_wait_ticks", std::to_string(m.max_wait_ticks));
  std::string sizes;
  for (int s : m.batch_sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
  row("batch_count", std::to_string(m.batch_count) + (sizes.empty() ? "" : " [" + sizes + "]"));
  row("chained_count", std::to_string(m.chained_count));
  row("attention_cues", std::to_string(m.attention_cues));
  row("attention_cue_coverage", fixed(m.attention_cue_coverage));
  row("idle_cue_coverage", fixed(m.idle_cue_coverage));
  row("triggered", std::to_string(m.triggered));
  row("queued_at_end", std::to_string(m.queued_at_end));
  return out.str();
}

std::vector<std::string> override_keys() {
  std::vector<std::string> keys{
      "seed",
      "noise.detection_prob",
      "noise.false_positive_rate",
      "noise.position_sigma",
      "noise.embedding_sigma",
      "noise.bearing_sigma",
      "scheduler.aging",
      "scheduler.aging_threshold",
      "scheduler.cue_ticks",
      "scheduler.awake_linger",
      "scheduler.hold_while_conversing",
      "scheduler.hold_during_task",
      "scheduler.policy",
      "association.window",
      "association.resolve_every",
      "association.entry_cost",
      "association.exit_cost",
      "presence.horizon",
      "presence.regreet_absence",
      "recognition.accept_threshold",
      "recognition.background_margin",
  };
  for (int t = 0; t <= static_cast<int>(ContentType::reactive); ++t) {
    keys.push_back("scheduler.min_gap." + std::string(to_string(static_cast<ContentType>(t))));
  }
  return keys;
}

void apply_override(Scenario& s, RunOptions& o, std::string_view key, std::string_view value) {
  if (key == "seed") {
    s.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "noise.detection_prob") {
    s.noise.detection_prob = parse_unit(key, value);
  } else if (key == "noise.false_positive_rate") {
    s.noise.false_positive_rate = parse_non_negative(key, value);
  } else if (key == "noise.position_sigma") {
    s.noise.position_sigma = parse_non_negative(key, value);
  } else if (key == "noise.embedding_sigma") {
    s.noise.embedding_sigma = parse_non_negative(key, value);
  } else if (key == "noise.bearing_sigma") {
    s.noise.bearing_sigma = parse_non_negative(key, value);
  } else if (key == "scheduler.aging") {
    o.scheduler.aging = parse_bool(key, value);
  } else if (key == "scheduler.aging_threshold") {
    o.scheduler.aging_threshold = parse_ticks(key, value, 1);
  } else if (key == "scheduler.cue_ticks") {
    o.scheduler.cue_ticks = parse_ticks(key, value, 0);
  } else if (key == "scheduler.awake_linger") {
    o.scheduler.awake_linger = parse_ticks(key, value, 0);
  } else if (key == "scheduler.hold_while_conversing") {
    o.scheduler.hold_while_conversing = parse_bool(key, value);
  } else if (key == "scheduler.hold_during_task") {
    o.scheduler.hold_during_task = parse_bool(key, value);
  } else if (key == "scheduler.policy") {
    if (value == "same") {
      o.scheduler.policy = RecombinePolicy::same;
    } else if (value == "promote") {
      o.scheduler.policy = RecombinePolicy::promote;
    } else if (value == "demote") {
      o.scheduler.policy = RecombinePolicy::demote;
    } else {
      throw ValidationError("override scheduler.policy: expected same, promote or demote");
    }
  } else if (key.starts_with("scheduler.min_gap.")) {
    const auto type = parse_content_type(key.substr(std::string_view("scheduler.min_gap.").size()));
    if (!type) throw ValidationError("override " + std::string(key) + ": unknown content type");
    o.scheduler.default_min_gap[*type] = parse_ticks(key, value, 0);
  } else if (key == "association.window") {
    o.online.window = parse_ticks(key, value, 1);
  } else if (key == "association.resolve_every") {
    o.online.resolve_every = parse_ticks(key, value, 1);
  } else if (key == "association.entry_cost") {
    o.energy.entry_cost = parse_non_negative(key, value);
  } else if (key == "association.exit_cost") {
    o.energy.exit_cost = parse_non_negative(key, value);
  } else if (key == "presence.horizon") {
    o.presence.presence_horizon = parse_ticks(key, value, 0);
  } else if (key == "presence.regreet_absence") {
    o.presence.regreet_absence = parse_ticks(key, value, 0);
  } else if (key == "recognition.accept_threshold") {
    o.accept_threshold = parse_non_negative(key, value);
  } else if (key == "recognition.background_margin") {
    o.background_margin = parse_non_negative(key, value);
  } else {
    throw ValidationError("unknown override key '" + std::string(key) + "'");
  }
}

}  // namespace spatial
