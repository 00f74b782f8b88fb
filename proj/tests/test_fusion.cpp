#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spatial/fusion.hpp"

namespace spatial {
namespace {

using testing::make_observation;
using testing::perturb;
using testing::random_unit;

TEST(LinkKernel, MatchesScalarFormula) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> pos(-3.0, 3.0);
  const LinkParams p;
  for (int i = 0; i < 500; ++i) {
    const auto ea = random_unit(rng);
    const auto eb = perturb(ea, 0.1, rng);
    const Tick gap = 1 + static_cast<Tick>(i % 4);
    auto a = make_observation(1, 10, {pos(rng), pos(rng)}, ea);
    auto b = make_observation(2, 10 + gap, {pos(rng), pos(rng)}, eb,
                              0.9, i % 5 == 0 ? ObjectClass::tv : ObjectClass::person);
    double dot = 0, na = 0, nb = 0;
    for (std::size_t k = 0; k < kEmbeddingDim; ++k) {
      dot += ea[k] * eb[k];
      na += ea[k] * ea[k];
      nb += eb[k] * eb[k];
    }
    const double cos = dot / std::sqrt(na * nb);
    const double dx = a.position.x - b.position.x;
    const double dy = a.position.y - b.position.y;
    double expected = std::exp(-(dx * dx + dy * dy) / (2 * 0.25)) * std::pow((1 + cos) / 2, 2.0) *
                      (a.label == b.label ? 1.0 : 0.01) * std::pow(0.8, static_cast<double>(gap - 1));
    expected = std::max(expected, 2.2250738585072014e-308);
    EXPECT_NEAR(link_likelihood(a, b, p), expected, 1e-12 * std::max(1.0, expected));
  }
}

TEST(LinkKernel, IdenticalAdjacentObservationsLinkWithCertainty) {
  std::mt19937_64 rng(1);
  const auto e = random_unit(rng);
  EXPECT_DOUBLE_EQ(link_likelihood(make_observation(1, 0, {1, 1}, e), make_observation(2, 1, {1, 1}, e)),
                   1.0);
}

TEST(LinkKernel, RejectsTimeOrderAndDimension) {
  std::mt19937_64 rng(1);
  const auto e = random_unit(rng);
  EXPECT_THROW(link_likelihood(make_observation(1, 3, {}, e), make_observation(2, 3, {}, e)),
               ValidationError);
  auto bad = make_observation(2, 4, {}, e);
  bad.appearance = make_embedding(Embedding(5, 0.0));
  EXPECT_THROW(link_likelihood(make_observation(1, 3, {}, e), bad), ValidationError);
}

TEST(Cosine, ZeroVectorAndMismatch) {
  const std::vector<double> z(4, 0.0), a{1, 0, 0, 0}, b{0, 2, 0, 0}, c{-3, 0, 0, 0};
  EXPECT_EQ(cosine_similarity(z, a), 0.0);
  EXPECT_NEAR(cosine_similarity(a, b), 0.0, 1e-15);
  EXPECT_NEAR(cosine_similarity(a, c), -1.0, 1e-15);
  EXPECT_THROW(cosine_similarity(a, std::vector<double>(3, 1.0)), ValidationError);
}

TEST(Doa, RoundTripsThroughBearing) {
  const Pose pose{{0.5, -1.25}, 0.7};
  for (int deg = 0; deg < 360; ++deg) {
    const double doa = deg * kPi / 180.0;
    const Vec2 p = doa_to_cartesian(doa, pose);
    EXPECT_NEAR((p - pose.position).norm(), kAudioRadius, 1e-12);
    EXPECT_LT(angular_distance(bearing_from_device(p, pose), doa), 1e-9) << deg;
  }
}

struct PairingCase {
  std::vector<AcousticEvent> events;
  std::vector<Trajectory> tracks;
  SemanticMap map;
};

PairingCase random_pairing_case(std::mt19937_64& rng, std::size_t n_events, std::size_t n_tracks) {
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  std::uniform_real_distribution<double> r(0.5, 4.0);
  std::normal_distribution<double> jitter(0.0, 0.3);
  PairingCase c;
  c.map.device_pose = {{0.2, 0.1}, ang(rng)};
  std::vector<double> bearings;
  const auto e = random_unit(rng);
  for (std::size_t j = 0; j < n_tracks; ++j) {
    const double b = ang(rng);
    bearings.push_back(b);
    Trajectory t;
    t.id = static_cast<TrajectoryId>(j + 1);
    t.observations.push_back(make_observation(static_cast<ObservationId>(j), 0,
                                              project_to_floorplan(b, r(rng), c.map.device_pose), e));
    c.tracks.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < n_events; ++i) {
    AcousticEvent ev;
    ev.label = AudioLabel::speech;
    ev.doa = n_tracks > 0 && i % 3 != 2 ? wrap_two_pi(bearings[i % n_tracks] + jitter(rng)) : ang(rng);
    c.events.push_back(ev);
  }
  return c;
}

TEST(Pairing, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(4242);
  int unique_cases = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 4);
    const std::size_t m = static_cast<std::size_t>((trial / 4) % 5);
    const auto c = random_pairing_case(rng, n, m);
    const auto got = pair_audio_visual(c.events, c.tracks, c.map);
    ASSERT_EQ(got.size(), n);

    std::vector<std::vector<double>> dist(n, std::vector<double>(m));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        dist[i][j] = angular_distance(c.events[i].doa,
                                      bearing_from_device(c.tracks[j].back().position, c.map.device_pose));
      }
    }
    const auto oracle = testing::enumerate_pairings(dist, m, kDefaultPairGate);
    double cost = 0.0;
    std::vector<bool> used(m, false);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(got[i].event_index, i);
      if (!got[i].trajectory) {
        cost += kDefaultPairGate;
        continue;
      }
      const auto j = static_cast<std::size_t>(*got[i].trajectory - 1);
      EXPECT_FALSE(used[j]) << "trajectory paired twice";
      used[j] = true;
      EXPECT_LE(dist[i][j], kDefaultPairGate);
      EXPECT_NEAR(got[i].angular_distance, dist[i][j], 1e-12);
      cost += dist[i][j];
    }
    EXPECT_NEAR(cost, oracle.cost, 1e-9);
    if (oracle.unique) {
      ++unique_cases;
      for (std::size_t i = 0; i < n; ++i) {
        const int expected = oracle.best[i];
        const int actual = got[i].trajectory ? static_cast<int>(*got[i].trajectory - 1) : -1;
        EXPECT_EQ(actual, expected);
      }
    }
  }
  EXPECT_GT(unique_cases, 1000);
}

TEST(Pairing, EmptyInputs) {
  SemanticMap map;
  EXPECT_TRUE(pair_audio_visual({}, {}, map).empty());
  std::vector<AcousticEvent> ev(2);
  const auto out = pair_audio_visual(ev, {}, map);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_FALSE(out[0].trajectory);
  EXPECT_FALSE(out[1].trajectory);
}

TEST(OpenSet, AcceptsNearestOnlyWithinThresholdAndMargin) {
  std::mt19937_64 rng(12);
  Gallery g;
  g.entries["a"] = random_unit(rng);
  g.entries["b"] = random_unit(rng);
  auto r = classify_embedding(g.entries["a"], g);
  EXPECT_EQ(r.user, UserId("a"));
  EXPECT_NEAR(r.distance, 0.0, 1e-12);
  EXPECT_NEAR(r.score, 1.0, 1e-12);

  // Halfway between two entries: nearest by a hair, but inside the margin.
  Embedding mid(kEmbeddingDim);
  for (std::size_t k = 0; k < kEmbeddingDim; ++k) mid[k] = g.entries["a"][k] + g.entries["b"][k];
  EXPECT_FALSE(classify_embedding(mid, g).user.has_value());

  EXPECT_FALSE(classify_embedding(random_unit(rng), g).user.has_value());
  EXPECT_FALSE(classify_embedding(g.entries["a"], Gallery{}).user.has_value());
  EXPECT_THROW(classify_embedding(Embedding(3, 1.0), g), ValidationError);
}

// Monte-Carlo protocol for the open-set thresholds: 1000 seeded genuine and
// impostor draws with per-component noise 0.05.
TEST(OpenSet, MonteCarloErrorRatesBelowFivePercent) {
  std::mt19937_64 rng(2024);
  Gallery g;
  for (int u = 0; u < 5; ++u) g.entries["user" + std::to_string(u)] = random_unit(rng);
  int false_reject = 0;
  int false_accept = 0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    const std::string who = "user" + std::to_string(i % 5);
    const auto genuine = classify_embedding(perturb(g.entries[who], 0.05, rng), g);
    if (genuine.user != UserId(who)) ++false_reject;
    const auto impostor = classify_embedding(perturb(random_unit(rng), 0.05, rng), g);
    if (impostor.user) ++false_accept;
  }
  EXPECT_LT(false_reject, draws / 20);
  EXPECT_LT(false_accept, draws / 20);
}

// Straight EMA recursion for one user, written out per step.
TEST(Identity, ScoresFollowExponentialMovingAverage) {
  IdentityTrack t;
  const IdentityParams p;
  std::vector<double> evidence{1.0, 0.5, 0.0, 0.8, 1.0, 0.2};
  double expected = 0.0;
  for (std::size_t k = 0; k < evidence.size(); ++k) {
    IdentityDecision d{static_cast<Tick>(k + 1), UserId("a"), evidence[k]};
    accumulate_identity(t, d, p);
    expected = (1 - p.ema_alpha) * expected + p.ema_alpha * evidence[k];
    EXPECT_NEAR(t.scores["a"], expected, 1e-15);
  }
}

TEST(Identity, SwitchNeedsSustainedLead) {
  IdentityTrack t;
  for (Tick k = 1; k <= 2; ++k) accumulate_identity(t, {k, UserId("a"), 1.0});
  EXPECT_FALSE(t.user.has_value());
  accumulate_identity(t, {3, UserId("a"), 1.0});
  EXPECT_EQ(t.user, UserId("a"));
  EXPECT_EQ(t.changes, 1);
  // A single contrary decision cannot flip the incumbent.
  accumulate_identity(t, {4, UserId("b"), 1.0});
  EXPECT_EQ(t.user, UserId("a"));
  EXPECT_THROW(accumulate_identity(t, {4, UserId("a"), 1.0}), ValidationError);
}

TEST(Identity, AlternatingDecisionsChangeAtMostOnce) {
  // Each user keeps one confidence level for the whole sequence.
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> lead(0, 6);
  std::uniform_real_distribution<double> score(0.3, 1.0);
  for (int seq = 0; seq < 500; ++seq) {
    IdentityTrack t;
    Tick tick = 1;
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
    for (int k = 0; k < 200; ++k) feed(k % 2 ? "a" : "b", k % 2 ? sa : sb);
    EXPECT_LE(switches, 1) << "sequence " << seq;
  }
}

TEST(Identity, SwitchRequiresConsecutiveLeadOverHysteresis) {
  // Per-tick random weights: every change must follow k ticks in which the
  // new user's average led the incumbent by more than h.
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  const IdentityParams params;
  for (int seq = 0; seq < 200; ++seq) {
    IdentityTrack t;
    std::map<UserId, double> ema;
    std::vector<std::optional<UserId>> leader;  // user leading the incumbent by > h, per tick
    for (Tick tick = 1; tick <= 300; ++tick) {
      const UserId who = score(rng) < 0.5 ? "a" : "b";
      const double w = score(rng);
      for (auto& [u, v] : ema) v *= 1.0 - params.ema_alpha;
      ema[who] += params.ema_alpha * w;
      const auto before = t.user;
      const double inc = before ? ema[*before] : 0.0;
      std::optional<UserId> lead_now;
      for (const auto& [u, v] : ema) {
        if (before && u == *before) continue;
        if (v > inc + params.hysteresis && (!lead_now || v > ema[*lead_now])) lead_now = u;
      }
      leader.push_back(lead_now);
      accumulate_identity(t, {tick, who, w}, params);
      if (t.user != before) {
        ASSERT_GE(leader.size(), static_cast<std::size_t>(params.confirm_ticks));
        for (int k = 1; k <= params.confirm_ticks; ++k) {
          EXPECT_EQ(leader[leader.size() - static_cast<std::size_t>(k)], t.user) << "tick " << tick;
        }
        leader.clear();
      }
    }
  }
}

TEST(Identity, FusionPrefersPositiveThenScoreThenFace) {
  const IdentityDecision face{5, UserId("a"), 0.6};
  const IdentityDecision voice{5, UserId("b"), 0.7};
  const IdentityDecision unknown{5, std::nullopt, 0.9};
  EXPECT_EQ(fuse_decisions(face, voice).user, UserId("b"));
  EXPECT_EQ(fuse_decisions(face, IdentityDecision{5, UserId("b"), 0.6}).user, UserId("a"));
  EXPECT_EQ(fuse_decisions(unknown, voice).user, UserId("b"));
  EXPECT_EQ(fuse_decisions(face, unknown).user, UserId("a"));
  EXPECT_EQ(fuse_decisions(std::nullopt, voice).user, UserId("b"));
  EXPECT_THROW(fuse_decisions(std::nullopt, std::nullopt), ValidationError);
  EXPECT_THROW(fuse_decisions(face, IdentityDecision{6, UserId("b"), 0.7}), ValidationError);
}

}  // namespace
}  // namespace spatial
