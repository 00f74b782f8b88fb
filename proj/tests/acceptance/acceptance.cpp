// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria (0 when all pass).

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "scheduler_stress.hpp"
#include "spatial/association.hpp"
#include "spatial/fusion.hpp"
#include "spatial/instances.hpp"
#include "spatial/scenario.hpp"
#include "spatial/sensor.hpp"
#include "spatial/simulator.hpp"

namespace {

using namespace spatial;

struct Outcome {
  bool pass = true;
  std::string detail;
};

Scenario bundled(const std::string& name) {
  return load_scenario(std::string(SPATIAL_SCENARIO_DIR) + "/" + name + ".json");
}

const RunResult& run_cached(const std::string& name, Mode mode) {
  static std::map<std::pair<std::string, Mode>, RunResult> cache;
  auto it = cache.find({name, mode});
  if (it == cache.end()) {
    RunOptions o;
    o.mode = mode;
    it = cache.emplace(std::pair{name, mode}, run(bundled(name), o)).first;
  }
  return it->second;
}

std::string serialize(const std::vector<TraceEvent>& trace) {
  std::ostringstream out;
  write_trace(trace, out);
  return out.str();
}

std::string fmt(double v, int precision = 3) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

// Every solver call made by this suite is re-evaluated here.
struct EnergyAudit {
  std::size_t calls = 0;
  std::size_t mismatches = 0;
  double worst = 0.0;
  void check(std::span<const Observation> all, const AssociationResult& r) {
    ++calls;
    const double ref = testing::reference_energy(all, r.trajectories);
    const double err = std::abs(ref - r.total_energy);
    worst = std::max(worst, err);
    if (!(err <= 1e-9)) ++mismatches;
  }
};

EnergyAudit g_audit;

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t energy_bad = 0, partition_bad = 0, observations = 0, nonempty = 0;
  const std::size_t count = 500;
  for (std::size_t i = 0; i < count; ++i) {
    const auto obs = random_instance(7 * 1000003ULL + i, 8);
    observations += obs.size();
    const auto model = build_energy(obs);
    const auto flow = solve(model);
    const auto exact = brute_force_map(model);
    g_audit.check(obs, flow);
    nonempty += !exact.trajectories.empty();
    g_audit.check(obs, exact);
    if (!(std::abs(flow.total_energy - exact.total_energy) <= 1e-9)) ++energy_bad;
    else if (partition_of(flow.trajectories) != partition_of(exact.trajectories)) ++partition_bad;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Outcome o;
  o.pass = energy_bad == 0 && partition_bad == 0 && secs < 60.0;
  o.detail = std::to_string(count) + " instances, " + std::to_string(observations) +
             " observations, " + std::to_string(nonempty) +
             " with non-empty optimum, energy mismatches " + std::to_string(energy_bad) +
             ", partition mismatches " + std::to_string(partition_bad) + ", " + fmt(secs) + " s";
  return o;
}

Outcome criterion2() {
  // Online solves over the sensor stream of both bundled scenarios.
  for (const char* name : {"condition1", "condition2"}) {
    const Scenario s = bundled(name);
    OnlineAssociator assoc;
    std::vector<Observation> all;
    for (Tick t = 0; t < s.duration_ticks; ++t) {
      const SensorFrame f = sensor_step(s, t);
      all.insert(all.end(), f.observations.begin(), f.observations.end());
      const auto& r = assoc.update(t, f.observations);
      if (r.solver_stats.solved) g_audit.check(all, r);
    }
    g_audit.check(all, assoc.flush());
  }
  Outcome o;
  o.pass = g_audit.mismatches == 0 && g_audit.calls > 0;
  o.detail = std::to_string(g_audit.calls) + " solver calls, " + std::to_string(g_audit.mismatches) +
             " mismatches, worst deviation " + fmt(g_audit.worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (const char* name : {"condition1", "condition2"}) {
    const Scenario s = bundled(name);
    int private_email = 0, private_calendar = 0;
    for (const auto& e : s.services) {
      if (!e.private_flag) continue;
      private_email += e.kind == EventKind::email;
      private_calendar += e.kind == EventKind::calendar;
    }
    Tick crowded = 0;
    for (Tick t = 0; t < s.duration_ticks; ++t) crowded += true_occupancy(s, t) >= 2;
    const bool setup = private_email == 6 && private_calendar == 2 && 2 * crowded == s.duration_ticks;
    const int l1 = run_cached(name, Mode::L1).metrics.privacy_leaks;
    const int l2 = run_cached(name, Mode::L2).metrics.privacy_leaks;
    o.pass = o.pass && setup && l2 == 0 && l1 >= 1;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + name + ": private " +
                std::to_string(private_email) + "+" + std::to_string(private_calendar) +
                ", shared ticks " + std::to_string(crowded) + "/" + std::to_string(s.duration_ticks) +
                ", leaks L1 " + std::to_string(l1) + " L2 " + std::to_string(l2);
  }
  return o;
}

// Delivered service messages by category and the trigger/accounted multisets.
struct Census {
  int email = 0, calendar = 0, other = 0;
  std::multiset<std::string> triggered, accounted;
};

Census census(const std::vector<TraceEvent>& trace) {
  Census c;
  for (const auto& e : trace) {
    const auto& p = e.payload;
    if (e.kind == TraceKind::enqueue && p.value("origin", "") == "trigger") {
      c.triggered.insert(p["member"]["content"].get<std::string>());
    }
    if (e.kind == TraceKind::metric && p.value("event", "") == "end") {
      for (const auto& q : p["queued"]) c.accounted.insert(q.get<std::string>());
    }
    if (e.kind != TraceKind::delivery) continue;
    for (const auto& m : p["members"]) {
      c.accounted.insert(m["content"].get<std::string>());
      if (!m["source_kind"].is_string()) continue;
      const std::string k = m["source_kind"].get<std::string>();
      if (k == "email") ++c.email;
      else if (k == "calendar") ++c.calendar;
      else if (k == "news" || k == "weather" || k == "traffic" || k == "iot") ++c.other;
    }
  }
  return c;
}

Outcome criterion4() {
  Outcome o;
  const std::map<std::string, std::array<int, 3>> want{{"condition1", {6, 4, 2}},
                                                       {"condition2", {16, 6, 4}}};
  for (const auto& [name, counts] : want) {
    for (Mode mode : {Mode::L1, Mode::L2}) {
      const auto& r = run_cached(name, mode);
      const Census c = census(r.trace);
      const bool ok = c.email == counts[0] && c.calendar == counts[1] && c.other == counts[2] &&
                      c.triggered == c.accounted && r.metrics.queued_at_end == 0;
      o.pass = o.pass && ok;
      o.detail += std::string(o.detail.empty() ? "" : "; ") + name + " " +
                  std::string(to_string(mode)) + " " + std::to_string(c.email) + "/" +
                  std::to_string(c.calendar) + "/" + std::to_string(c.other) +
                  (c.triggered == c.accounted ? " conserved" : " NOT conserved");
    }
  }
  return o;
}

std::multiset<std::string> service_contents(const std::vector<TraceEvent>& trace) {
  std::multiset<std::string> out;
  for (const auto& e : trace) {
    if (e.kind != TraceKind::delivery) continue;
    for (const auto& m : e.payload["members"]) {
      if (!m["source"].get<std::string>().empty()) out.insert(m["content"].get<std::string>());
    }
  }
  return out;
}

Outcome criterion5() {
  const auto& l1 = run_cached("condition2", Mode::L1);
  const auto& l2 = run_cached("condition2", Mode::L2);
  int l1_events = 0, l2_proactive = 0;
  int largest = 0;
  const std::regex batch_text("the user has ([0-9]+) emails");
  for (const auto& e : l1.trace) l1_events += e.kind == TraceKind::delivery;
  for (const auto& e : l2.trace) {
    if (e.kind != TraceKind::delivery) continue;
    const auto& p = e.payload;
    if (p["type"] != "reactive") ++l2_proactive;
    std::smatch m;
    const std::string summary = p["summary"].get<std::string>();
    if (p["kind"] == "batch" && std::regex_match(summary, m, batch_text)) {
      const int n = std::stoi(m[1].str());
      if (n == static_cast<int>(p["members"].size())) largest = std::max(largest, n);
    }
  }
  const bool same = service_contents(l1.trace) == service_contents(l2.trace);
  Outcome o;
  o.pass = l2_proactive <= l1_events && same && largest >= 2;
  o.detail = "L2 proactive events " + std::to_string(l2_proactive) + " vs L1 events " +
             std::to_string(l1_events) + ", service content multisets " +
             (same ? "equal" : "differ") + ", largest email batch " + std::to_string(largest);
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t violations = 0, deliveries = 0, preemptions = 0, promotions = 0;
  Tick worst = 0;
  std::uint64_t seed = 100;
  for (Mode mode : {Mode::L1, Mode::L2}) {
    for (bool gated : {false, true}) {
      for (int rep = 0; rep < 3; ++rep) {
        testing::StressConfig cfg;
        cfg.seed = seed++;
        cfg.mode = mode;
        cfg.gated = gated;
        cfg.arrival_prob = gated ? 0.04 : 0.09;  // open streams near saturation
        const auto r = testing::run_stress(cfg);
        violations += r.violations.size();
        for (const auto& v : r.violations) std::cerr << "  stress seed " << cfg.seed << ": " << v << '\n';
        deliveries += r.deliveries;
        preemptions += r.preemptions;
        promotions += r.promotions;
        if (!gated) worst = std::max(worst, r.max_wait);
      }
    }
  }
  o.pass = violations == 0 && preemptions > 0 && promotions > 0;
  o.detail = "12 streams x 10000 ticks, " + std::to_string(deliveries) + " deliveries, " +
             std::to_string(preemptions) + " preemptions, " + std::to_string(promotions) +
             " promotions, worst open-gate wait " + std::to_string(worst) + " ticks, " +
             std::to_string(violations) + " violations";
  return o;
}

Outcome criterion7() {
  Outcome o;
  int idle = 0, cued = 0;
  for (const char* name : {"condition1", "condition2"}) {
    const double tick_seconds = bundled(name).tick_seconds;
    for (Mode mode : {Mode::L1, Mode::L2}) {
      std::map<Tick, Tick> cues;  // cue tick -> speak tick
      for (const auto& e : run_cached(name, mode).trace) {
        if (e.kind == TraceKind::attention_cue) cues[e.tick] = e.payload["speak_tick"].get<Tick>();
        if (e.kind != TraceKind::delivery || !e.payload["from_idle"].get<bool>()) continue;
        ++idle;
        const auto& c = e.payload["cue_tick"];
        if (c.is_null()) continue;
        const auto it = cues.find(c.get<Tick>());
        const double lag = static_cast<double>(e.tick - c.get<Tick>()) * tick_seconds;
        if (it != cues.end() && it->second == e.tick && std::abs(lag - 2.0) < 1e-12) ++cued;
      }
    }
  }
  o.pass = idle > 0 && cued == idle;
  o.detail = std::to_string(cued) + "/" + std::to_string(idle) +
             " idle deliveries cued exactly 2 s earlier";
  return o;
}

Outcome criterion8() {
  Outcome o;
  double worst = 0.0;
  const Pose pose{{0.3, -0.7}, 1.1};
  for (int deg = 0; deg < 360; ++deg) {
    const double doa = deg * kPi / 180.0;
    worst = std::max(worst, angular_distance(bearing_from_device(doa_to_cartesian(doa, pose), pose), doa));
  }
  std::mt19937_64 rng(88);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  std::normal_distribution<double> jitter(0.0, 0.25);
  int instances = 0, mismatches = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    const std::size_t m = static_cast<std::size_t>((trial / 4) % 5);
    SemanticMap map;
    map.device_pose = {{0, 0}, ang(rng)};
    std::vector<Trajectory> tracks;
    std::vector<double> bearings;
    const auto look = testing::random_unit(rng);
    for (std::size_t j = 0; j < m; ++j) {
      bearings.push_back(ang(rng));
      Trajectory t;
      t.id = static_cast<TrajectoryId>(j + 1);
      t.observations.push_back(testing::make_observation(
          static_cast<ObservationId>(j), 0, project_to_floorplan(bearings[j], 2.5, map.device_pose), look));
      tracks.push_back(std::move(t));
    }
    std::vector<AcousticEvent> events(n);
    for (std::size_t i = 0; i < n; ++i) {
      events[i].doa = m > 0 && i % 3 != 2 ? wrap_two_pi(bearings[i % m] + jitter(rng)) : ang(rng);
    }
    std::vector<std::vector<double>> dist(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        dist[i][j] = angular_distance(events[i].doa, bearing_from_device(tracks[j].back().position, map.device_pose));
      }
    }
    const auto got = pair_audio_visual(events, tracks, map);
    const auto oracle = testing::enumerate_pairings(dist, m, kDefaultPairGate);
    double cost = 0.0;
    bool same = true;
    for (std::size_t i = 0; i < n; ++i) {
      const int j = got[i].trajectory ? static_cast<int>(*got[i].trajectory - 1) : -1;
      cost += j < 0 ? kDefaultPairGate : dist[i][static_cast<std::size_t>(j)];
      if (oracle.unique && j != oracle.best[i]) same = false;
    }
    ++instances;
    if (std::abs(cost - oracle.cost) > 1e-9 || !same) ++mismatches;
  }
  o.pass = worst <= 1e-9 && mismatches == 0;
  o.detail = "360 angles, worst round-trip error " + fmt(worst) + " rad; " +
             std::to_string(instances) + " pairing instances, " + std::to_string(mismatches) +
             " mismatches";
  return o;
}

Outcome criterion9() {
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<int> lead(0, 6);
  std::uniform_real_distribution<double> score(0.3, 1.0);
  int worst_changes = 0;
  const int sequences = 1000;
  for (int seq = 0; seq < sequences; ++seq) {
    IdentityTrack t;
    Tick tick = 1;
    // One confidence level per user and sequence; decisions alternate strictly.
    const double sa = score(rng);
    const double sb = score(rng);
    const int prefix = lead(rng);
    // A switch replaces one known identity with another; the first acquisition
    // from unknown is not a switch.
    int switches = 0;
    auto feed = [&](const char* who, double w) {
      const auto prior = t.user;
      accumulate_identity(t, {tick++, UserId(who), w});
      if (prior && t.user != prior) ++switches;
    };
    for (int k = 0; k < prefix; ++k) feed("a", sa);
    for (int k = 0; k < 300; ++k) feed(k % 2 ? "a" : "b", k % 2 ? sa : sb);
    worst_changes = std::max(worst_changes, switches);
  }

  // Monte-Carlo open-set protocol: 1000 seeded draws, noise 0.05 per component.
  std::mt19937_64 mc(2024);
  Gallery g;
  for (int u = 0; u < 5; ++u) g.entries["user" + std::to_string(u)] = testing::random_unit(mc);
  int frr = 0, far = 0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const std::string who = "user" + std::to_string(i % 5);
    if (classify_embedding(testing::perturb(g.entries[who], 0.05, mc), g).user != UserId(who)) ++frr;
    if (classify_embedding(testing::perturb(testing::random_unit(mc), 0.05, mc), g).user) ++far;
  }
  Outcome o;
  o.pass = worst_changes <= 1 && frr * 20 < draws && far * 20 < draws;
  o.detail = std::to_string(sequences) + " alternating sequences, max changes " +
             std::to_string(worst_changes) + "; FRR " + fmt(100.0 * frr / draws) + "%, FAR " +
             fmt(100.0 * far / draws) + "% over " + std::to_string(draws) + " draws";
  return o;
}

Outcome criterion10() {
  Outcome o;
  int pairs = 0, identical = 0;
  for (const char* name : {"condition1", "condition2", "empty"}) {
    const Scenario s = bundled(name);
    for (Mode mode : {Mode::L1, Mode::L2}) {
      RunOptions opt;
      opt.mode = mode;
      ++pairs;
      identical += serialize(run(s, opt).trace) == serialize(run(s, opt).trace);
    }
  }
  o.pass = identical == pairs;
  o.detail = std::to_string(identical) + "/" + std::to_string(pairs) +
             " (scenario, mode) pairs byte-identical across two runs";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"solver matches exhaustive MAP", criterion1},
      {"energy bookkeeping", criterion2},
      {"privacy gating", criterion3},
      {"message counts and conservation", criterion4},
      {"batching effect", criterion5},
      {"scheduler properties", criterion6},
      {"attention cue", criterion7},
      {"geometry and pairing", criterion8},
      {"identity stability and open-set rates", criterion9},
      {"determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << ": "
              << criteria[i].first << " (" << o.detail << ")" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed;
}
