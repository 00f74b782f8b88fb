#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "spatial/clock.hpp"
#include "spatial/world_model.hpp"

namespace spatial {
namespace {

using testing::make_observation;
using testing::random_unit;

Trajectory person_track(TrajectoryId id, Tick last, std::optional<UserId> user = {},
                        ObjectClass label = ObjectClass::person) {
  static std::mt19937_64 rng(5);
  Trajectory t;
  t.id = id;
  t.observations.push_back(make_observation(id * 100, last, {0, 0}, random_unit(rng), 0.9, label));
  t.identity.user = std::move(user);
  return t;
}

TEST(Geometry, ProjectionMatchesHandComputedPoints) {
  Pose pose{{1.0, 2.0}, kPi / 2};
  Vec2 a = project_to_floorplan(0.0, 2.0, pose);
  EXPECT_NEAR(a.x, 1.0, 1e-12);
  EXPECT_NEAR(a.y, 4.0, 1e-12);
  Vec2 b = project_to_floorplan(kPi / 2, 1.0, pose);
  EXPECT_NEAR(b.x, 0.0, 1e-12);
  EXPECT_NEAR(b.y, 2.0, 1e-12);
  Vec2 c = project_to_floorplan(kPi / 4, std::sqrt(2.0), Pose{});
  EXPECT_NEAR(c.x, 1.0, 1e-12);
  EXPECT_NEAR(c.y, 1.0, 1e-12);
}

TEST(Geometry, BearingIsInverseOfProjection) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(-10.0, 10.0);
  std::uniform_real_distribution<double> range(0.1, 8.0);
  for (int i = 0; i < 1000; ++i) {
    Pose pose{{ang(rng) / 3, ang(rng) / 3}, ang(rng)};
    const double bearing = ang(rng);
    const Vec2 p = project_to_floorplan(bearing, range(rng), pose);
    const double back = bearing_from_device(p, pose);
    EXPECT_GE(back, 0.0);
    EXPECT_LT(back, 2 * kPi);
    EXPECT_LT(angular_distance(back, bearing), 1e-9);
  }
}

TEST(Geometry, ProjectionRejectsBadInput) {
  EXPECT_THROW(project_to_floorplan(0.0, 0.0, Pose{}), ValidationError);
  EXPECT_THROW(project_to_floorplan(0.0, -1.0, Pose{}), ValidationError);
  EXPECT_THROW(project_to_floorplan(std::nan(""), 1.0, Pose{}), ValidationError);
  Pose bad;
  bad.heading = INFINITY;
  EXPECT_THROW(project_to_floorplan(0.0, 1.0, bad), ValidationError);
}

TEST(Geometry, AngleHelpers) {
  EXPECT_DOUBLE_EQ(wrap_two_pi(-kPi / 2), 1.5 * kPi);
  EXPECT_DOUBLE_EQ(wrap_two_pi(2 * kPi), 0.0);
  EXPECT_NEAR(angular_distance(0.1, 2 * kPi - 0.1), 0.2, 1e-12);
  EXPECT_NEAR(angular_distance(0.0, kPi), kPi, 1e-12);
}

TEST(Observation, ValidationRejectsMalformedValues) {
  std::mt19937_64 rng(1);
  auto ok = make_observation(1, 0, {0, 0}, random_unit(rng));
  EXPECT_NO_THROW(validate(ok));
  auto bad = ok;
  bad.detection_score = 1.5;
  EXPECT_THROW(validate(bad), ValidationError);
  bad = ok;
  bad.tick = -1;
  EXPECT_THROW(validate(bad), ValidationError);
  bad = ok;
  bad.appearance = make_embedding(Embedding(3, 1.0));
  EXPECT_THROW(validate(bad), ValidationError);
  bad = ok;
  bad.appearance.reset();
  EXPECT_THROW(validate(bad), ValidationError);
}

TEST(Trajectories, StructuralChecks) {
  std::mt19937_64 rng(2);
  const auto e = random_unit(rng);
  Trajectory a{1, {make_observation(10, 0, {}, e), make_observation(11, 1, {}, e)}, {}, false};
  Trajectory b{2, {make_observation(20, 0, {}, e)}, {}, false};
  EXPECT_NO_THROW(validate_trajectories(std::vector{a, b}));

  Trajectory shared{2, {make_observation(11, 3, {}, e)}, {}, false};
  EXPECT_THROW(validate_trajectories(std::vector{a, shared}), ValidationError);
  Trajectory backwards{3, {make_observation(30, 2, {}, e), make_observation(31, 2, {}, e)}, {}, false};
  EXPECT_THROW(validate_trajectories(std::vector{backwards}), ValidationError);
  EXPECT_THROW(validate_trajectories(std::vector{a, a}), ValidationError);
}

TEST(SemanticMap, ApplyAssociationCarriesIdentityByTrajectoryId) {
  SemanticMap map;
  map.clock = 42;
  auto old = person_track(7, 10, UserId("alice"));
  old.identity.changes = 1;
  map.trajectories = {old};
  auto fresh = person_track(7, 11);
  auto other = person_track(8, 11);
  const SemanticMap out = apply_association(map, {fresh, other});
  ASSERT_EQ(out.trajectories.size(), 2u);
  EXPECT_EQ(out.trajectories[0].identity, old.identity);
  EXPECT_FALSE(out.trajectories[1].identity.user.has_value());
  EXPECT_EQ(out.clock, 42);
}

TEST(Presence, OccupancyCountsActivePersonsOnly) {
  SemanticMap map;
  map.clock = 100;
  map.trajectories = {person_track(1, 100, UserId("u")), person_track(2, 69), person_track(3, 70),
                      person_track(4, 100, {}, ObjectClass::tv)};
  refresh_activity(map, 30);
  EXPECT_EQ(occupancy(map), 2);  // tracks 1 and 3
  UserProfile profile;
  profile.user_id = "u";
  const Presence p = presence_predicates(map, profile, 100, Engagement::idle, 0);
  EXPECT_EQ(p.occupancy, 2);
  EXPECT_TRUE(p.user_present);
  EXPECT_FALSE(p.alone);
  EXPECT_EQ(p.user_trajectory, 1);
}

// alone <=> user present and nobody else active, over random scenes.
TEST(Presence, AloneImpliesOccupancyOneProperty) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> count(0, 4);
  std::uniform_int_distribution<Tick> age(0, 60);
  std::bernoulli_distribution is_user(0.3);
  for (int trial = 0; trial < 2000; ++trial) {
    SemanticMap map;
    map.clock = 200;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      map.trajectories.push_back(
          person_track(i + 1, 200 - age(rng), is_user(rng) ? std::optional<UserId>("u") : std::nullopt));
    }
    UserProfile profile;
    profile.user_id = "u";
    const Presence p = presence_predicates(map, profile, 200, Engagement::idle, 0);
    int active = 0;
    bool user_active = false;
    for (const auto& t : map.trajectories) {
      if (200 - t.back().tick <= 30) {
        ++active;
        user_active = user_active || t.identity.user == UserId("u");
      }
    }
    EXPECT_EQ(p.occupancy, active);
    EXPECT_EQ(p.user_present, user_active);
    EXPECT_EQ(p.alone, user_active && active == 1);
    if (p.alone) EXPECT_EQ(p.occupancy, 1);
  }
}

TEST(Presence, FirstTimeAndFirstTimeToday) {
  SemanticMap map;
  map.trajectories = {person_track(1, 500, UserId("u"))};
  UserProfile profile;
  profile.user_id = "u";
  Presence p = presence_predicates(map, profile, 500, Engagement::idle, 0);
  EXPECT_TRUE(p.first_time);
  EXPECT_TRUE(p.first_time_today);
  mark_seen(profile, p, 500);
  EXPECT_EQ(profile.last_seen_tick, 500);

  map.trajectories = {person_track(1, 520, UserId("u"))};
  p = presence_predicates(map, profile, 520, Engagement::idle, 0);
  EXPECT_FALSE(p.first_time);
  EXPECT_FALSE(p.first_time_today);

  // Absent for more than the re-greet window, then a new day.
  map.trajectories = {person_track(1, 600, UserId("u"))};
  p = presence_predicates(map, profile, 600, Engagement::idle, 0);
  EXPECT_TRUE(p.first_time);
  EXPECT_FALSE(p.first_time_today);
  p = presence_predicates(map, profile, 600, Engagement::idle, 550);
  EXPECT_TRUE(p.first_time_today);
}

TEST(Presence, AbsentUserIsNeverFirstTime) {
  SemanticMap map;
  map.trajectories = {person_track(1, 10)};
  UserProfile profile;
  profile.user_id = "u";
  const Presence p = presence_predicates(map, profile, 10, Engagement::conversing, 0);
  EXPECT_FALSE(p.user_present);
  EXPECT_FALSE(p.first_time);
  EXPECT_EQ(p.engaged, Engagement::conversing);
  UserProfile copy = profile;
  mark_seen(copy, p, 10);
  EXPECT_FALSE(copy.last_seen_tick.has_value());
}

TEST(History, BoundedEvictionMatchesLinearReference) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> type(0, 8);
  UserProfile profile;
  profile.history_capacity = 7;
  std::vector<InteractionRecord> all;
  for (Tick t = 0; t < 200; ++t) {
    InteractionRecord r{static_cast<ContentType>(type(rng)), t, Priority::low, false};
    record_interaction(profile, r);
    all.push_back(r);
    ASSERT_EQ(profile.history.size(), std::min<std::size_t>(all.size(), 7));
    for (std::size_t k = 0; k < profile.history.size(); ++k) {
      EXPECT_EQ(profile.history[k].delivery_tick,
                all[all.size() - profile.history.size() + k].delivery_tick);
    }
    for (int ty = 0; ty <= 8; ++ty) {
      std::optional<Tick> expected;
      for (std::size_t k = all.size() - profile.history.size(); k < all.size(); ++k) {
        if (all[k].interaction_type == static_cast<ContentType>(ty)) expected = all[k].delivery_tick;
      }
      const auto got = last_of_type(profile, static_cast<ContentType>(ty));
      EXPECT_EQ(got ? std::optional<Tick>(got->delivery_tick) : std::nullopt, expected);
    }
  }
}

TEST(History, RejectsOutOfOrderRecords) {
  UserProfile profile;
  record_interaction(profile, {ContentType::email, 10, Priority::low, false});
  EXPECT_THROW(record_interaction(profile, {ContentType::email, 9, Priority::low, false}),
               ValidationError);
  EXPECT_THROW(record_interaction(profile, {ContentType::email, -1, Priority::low, false}),
               ValidationError);
  EXPECT_NO_THROW(record_interaction(profile, {ContentType::news, 10, Priority::low, false}));
}

TEST(Clock, MinuteOfDayAndDayBoundaries) {
  SimClock c;
  c.tick_seconds = 0.5;
  c.start_minute_of_day = 23 * 60 + 59;  // 23:59
  EXPECT_EQ(c.minute_of_day(0), 23 * 60 + 59);
  EXPECT_EQ(c.minute_of_day(120), 0);  // one minute later
  EXPECT_EQ(c.day_index(119), 0);
  EXPECT_EQ(c.day_index(120), 1);
  EXPECT_EQ(c.day_start(119), 0);
  EXPECT_EQ(c.day_start(500), 120);
  EXPECT_EQ(c.ticks_for_seconds(2.0), 4);
  EXPECT_DOUBLE_EQ(c.hours_between(0, 7200), 1.0);

  // A declared day start on a midnight is not counted twice.
  c.declared_day_starts = {120, 300};
  EXPECT_EQ(c.day_index(200), 1);
  EXPECT_EQ(c.day_index(300), 2);
  EXPECT_EQ(c.day_start(301), 300);
}

TEST(Clock, DayStartForSortedStarts) {
  const std::vector<Tick> starts{100, 400};
  EXPECT_EQ(day_start_for(starts, 50), 0);
  EXPECT_EQ(day_start_for(starts, 100), 100);
  EXPECT_EQ(day_start_for(starts, 399), 100);
  EXPECT_EQ(day_start_for(starts, 1000), 400);
}

}  // namespace
}  // namespace spatial
