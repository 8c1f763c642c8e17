#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "collective/bodies.hpp"
#include "collective/scenario.hpp"
#include "support.hpp"

using namespace collective;
using collective::fixtures::Rng;
using collective::fixtures::uniform;

namespace {

constexpr DirIndex R = 0;
constexpr DirIndex L = 1;

Scenario ring6() { return load_scenario(collective::fixtures::source_path("scenarios/ring6_clock.json")); }

RationalVector rv(std::initializer_list<long> xs) {
  RationalVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::shared_ptr<const Dynamics> quiet_line(std::size_t colours = 1) {
  std::vector<Colour> cs;
  for (std::size_t c = 0; c < colours; ++c) cs.push_back({int(c) + 1, "c" + std::to_string(c + 1), {{}, R}});
  return std::make_shared<const Dynamics>(Dynamics{make_standard_environment(1), cs, 3});
}

LatticeCoord at1(std::int64_t x) { return LatticeCoord::from_counts({x, 0}); }

}  // namespace

TEST(Bodies, RingAverages) {
  const auto sc = ring6();
  const auto trace = run(sc.initial_state(), 6);
  const Body& clock = sc.body("clock");
  EXPECT_EQ(avg_position(trace, clock, 0), rv({1}));
  EXPECT_EQ(avg_position(trace, clock, 1), rv({1}));
  EXPECT_EQ(velocity(trace, clock, 0), rv({0}));
  EXPECT_EQ(avg_position(trace, sc.body("a"), 3), rv({-1}));
  RationalVector total = rv({0});
  for (std::int64_t t = 0; t < 6; ++t) total = total + velocity(trace, clock, t);
  EXPECT_EQ(total, rv({0}));
  EXPECT_THROW(velocity(trace, clock, 6), std::out_of_range);
}

TEST(Bodies, RingStateChanges) {
  const auto sc = ring6();
  const auto trace = run(sc.initial_state(), 6);
  const Body& clock = sc.body("clock");
  EXPECT_TRUE(changes_external_state(trace, clock, 0));
  EXPECT_FALSE(changes_external_state(trace, clock, 1));
  EXPECT_FALSE(changes_external_state(trace, clock, 2));
  EXPECT_TRUE(changes_external_state(trace, clock, 3));
  // a and c always move in opposite directions
  for (std::int64_t t = 0; t <= 6; ++t) EXPECT_FALSE(all_codirected(trace, clock, t));
}

TEST(Bodies, CheckBody) {
  const auto trace = run(ring6().initial_state(), 2);
  EXPECT_THROW(check_body(trace, Body{"none", {}}), std::out_of_range);
  EXPECT_THROW(check_body(trace, Body{"ghost", {7}}), std::out_of_range);
  EXPECT_THROW(avg_position(trace, Body{"ghost", {1, 9}}, 0), std::out_of_range);
  EXPECT_NO_THROW(check_body(trace, Body{"ok", {2, 1}}));
}

TEST(Bodies, OppositeMoversCancel) {
  const auto world = make_world(quiet_line(), {{1, 0, at1(0), R}, {2, 0, at1(50), L}});
  const auto trace = run(world, 5);
  const Body pair{"pair", {1, 2}};
  EXPECT_EQ(velocity(trace, pair, 0), rv({0}));
  EXPECT_EQ(velocity(trace, Body{"one", {1}}, 3), rv({1}));
  EXPECT_EQ(embedded_speed(trace, pair, 0), 0.0);
  EXPECT_DOUBLE_EQ(embedded_speed(trace, Body{"one", {1}}, 0), 1.0);
}

TEST(Bodies, SameExternalStateExamples) {
  const auto env = make_standard_environment(1);
  const ExternalSnapshot r0{{0, {0}, R}};
  const ExternalSnapshot r5{{0, {5}, R}};
  const ExternalSnapshot l5{{0, {5}, L}};
  EXPECT_EQ(same_external_state(env, r0, r5), 5);
  EXPECT_EQ(same_external_state(env, r5, r0), -5);
  EXPECT_FALSE(same_external_state(env, r0, l5).has_value());
  EXPECT_EQ(same_external_state(env, r0, r0), 0);
  EXPECT_FALSE(same_external_state(env, r0, r5, 4).has_value());

  const auto sc = ring6();
  const auto trace = run(sc.initial_state(), 6);
  EXPECT_EQ(same_external_state(env, external_snapshot(trace, sc.body("clock"), 0),
                                external_snapshot(trace, sc.body("clock"), 6)),
            0);
  // R and L movers spreading apart: one shift serves both
  const ExternalSnapshot spread0{{0, {0}, R}, {0, {1}, L}};
  const ExternalSnapshot spread2{{0, {-1}, L}, {0, {2}, R}};
  EXPECT_EQ(same_external_state(env, spread0, spread2), 2);
  const ExternalSnapshot mismatched{{0, {-1}, L}, {0, {3}, R}};
  EXPECT_FALSE(same_external_state(env, spread0, mismatched).has_value());
}

TEST(Bodies, DetectPeriodExamples) {
  const auto sc = ring6();
  const auto trace = run(sc.initial_state(), 12);
  const auto cert = detect_period(trace, sc.body("clock"));
  ASSERT_TRUE(cert.has_value());
  EXPECT_EQ(cert->period, 6);
  EXPECT_EQ(cert->t0, 0);
  EXPECT_EQ(cert->displacement, IntVector{0});
  EXPECT_EQ(cert->turns_per_period, 4);
  EXPECT_TRUE(verify_certificate(trace, sc.body("clock"), *cert));

  const auto straight = run(make_world(quiet_line(), {{1, 0, at1(3), L}}), 8);
  const auto line_cert = detect_period(straight, Body{"s", {1}});
  ASSERT_TRUE(line_cert.has_value());
  EXPECT_EQ(line_cert->period, 1);
  EXPECT_EQ(line_cert->displacement, IntVector{-1});
  EXPECT_EQ(line_cert->turns_per_period, 0);

  const auto apart = run(make_world(quiet_line(), {{1, 0, at1(0), L}, {2, 0, at1(1), R}}), 8);
  EXPECT_FALSE(detect_period(apart, Body{"apart", {1, 2}}).has_value());

  const auto together = run(make_world(quiet_line(), {{1, 0, at1(0), R}, {2, 0, at1(4), R}}), 8);
  const auto co = detect_period(together, Body{"co", {1, 2}});
  ASSERT_TRUE(co.has_value());
  EXPECT_EQ(co->period, 1);
  EXPECT_EQ(co->displacement, IntVector{1});

  // horizon too short for two periods
  const auto short_trace = run(sc.initial_state(), 6);
  EXPECT_FALSE(detect_period(short_trace, sc.body("clock")).has_value());

  PeriodicityCertificate wrong = *cert;
  wrong.period = 5;
  EXPECT_FALSE(verify_certificate(trace, sc.body("clock"), wrong));
}

TEST(Bodies, ProperTimeAssignment) {
  PeriodicityCertificate clock{0, 6, {0}, 4};
  EXPECT_EQ(assign_proper_time(clock, 6).rate, 1);
  EXPECT_EQ(assign_proper_time(clock, 1).rate, Rational(1, 6));
  EXPECT_EQ(assign_proper_time(clock, 1).proper_time(Rational(3)), Rational(1, 2));
  PeriodicityCertificate straight{0, 1, {1}, 0};
  EXPECT_TRUE(assign_proper_time(straight, 5).degenerate());
  EXPECT_THROW(assign_proper_time(clock, 0), std::invalid_argument);
  EXPECT_THROW(assign_proper_time(clock, -1), std::invalid_argument);
}

TEST(Bodies, KinematicsRows) {
  const auto sc = ring6();
  const auto trace = run(sc.initial_state(), 6);
  const auto rows = kinematics(trace, sc.body("clock"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_TRUE(rows[0].changed_state);
  EXPECT_FALSE(rows[1].changed_state);
  EXPECT_FALSE(rows[1].codirected);
  EXPECT_EQ(rows[1].position, rv({1}));
  EXPECT_EQ(rows[1].velocity, rv({0}));
}

TEST(BodiesProperty, SpeedBoundAndCodirection) {
  Rng rng(31);
  for (int iter = 0; iter < 80; ++iter) {
    const auto shape = collective::fixtures::random_shape(rng);
    const auto world = collective::fixtures::random_world(rng, shape);
    const auto trace = run(world, 20);
    const Body everyone{"all", collective::fixtures::all_ids(trace)};
    Body some{"some", {}};
    for (int id : everyone.members) {
      if (uniform(rng, 0, 1) == 1 || some.members.empty()) some.members.push_back(id);
    }
    for (std::int64_t t = 0; t < 20; ++t) {
      for (const Body* b : std::initializer_list<const Body*>{&everyone, &some}) {
        const double speed = embedded_speed(trace, *b, t);
        EXPECT_LE(speed, 1.0 + 1e-12);
        EXPECT_EQ(std::abs(speed - 1.0) <= 1e-12, all_codirected(trace, *b, t));
      }
      if (all_codirected(trace, everyone, t)) {
        EXPECT_FALSE(changes_external_state(trace, everyone, t));
      }
      // OR over members
      bool any = false;
      for (int id : some.members) any = any || trace.track(id).turned[t];
      EXPECT_EQ(changes_external_state(trace, some, t), any);
    }
  }
}

TEST(BodiesProperty, SameExternalStateReflexiveAndSymmetric) {
  Rng rng(32);
  for (int iter = 0; iter < 80; ++iter) {
    const auto shape = collective::fixtures::random_shape(rng);
    const auto trace = run(collective::fixtures::random_world(rng, shape), 12);
    const Body b{"all", collective::fixtures::all_ids(trace)};
    const auto t1 = uniform(rng, 0, 12);
    const auto t2 = uniform(rng, 0, 12);
    const auto a = external_snapshot(trace, b, t1);
    const auto c = external_snapshot(trace, b, t2);
    EXPECT_EQ(same_external_state(trace.environment(), a, a), 0);
    const auto fwd = same_external_state(trace.environment(), a, c);
    const auto back = same_external_state(trace.environment(), c, a);
    ASSERT_EQ(fwd.has_value(), back.has_value());
    if (fwd) {
      EXPECT_EQ(*fwd, -*back);
    }
  }
}

namespace {

// Brute force: configuration(t+P) is configuration(t) moved by one fixed
// displacement for every t in [t0, horizon-P]. Translation keeps the
// lexicographic order, so the least entries must correspond.
std::optional<IntVector> periodic_at(const Trace& trace, const Body& b, std::int64_t t0, std::int64_t p) {
  std::optional<IntVector> delta;
  for (std::int64_t t = t0; t + p <= trace.horizon(); ++t) {
    auto now = external_snapshot(trace, b, t);
    auto later = external_snapshot(trace, b, t + p);
    const auto by_position = [](const SnapshotEntry& x, const SnapshotEntry& y) {
      return std::tie(x.position, x.colour, x.dir) < std::tie(y.position, y.colour, y.dir);
    };
    std::sort(now.begin(), now.end(), by_position);
    std::sort(later.begin(), later.end(), by_position);
    IntVector d(now[0].position.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = later[0].position[k] - now[0].position[k];
    if (delta && *delta != d) return std::nullopt;
    delta = d;
    for (auto& e : now) {
      for (std::size_t k = 0; k < d.size(); ++k) e.position[k] += d[k];
    }
    if (now != later) return std::nullopt;
  }
  return delta;
}

}  // namespace

TEST(BodiesProperty, DetectPeriodMatchesBruteForce) {
  Rng rng(33);
  int found = 0;
  const std::int64_t horizon = 40;
  for (int iter = 0; iter < 80; ++iter) {
    auto shape = collective::fixtures::random_shape(rng);
    shape.torus = true;
    shape.side = uniform(rng, 2, 4);
    shape.elements = static_cast<int>(uniform(rng, 1, 4));
    const auto trace = run(collective::fixtures::random_world(rng, shape), horizon);
    const Body b{"all", collective::fixtures::all_ids(trace)};
    std::optional<std::pair<std::int64_t, std::int64_t>> expected;
    std::optional<IntVector> expected_delta;
    for (std::int64_t t0 = 0; t0 <= horizon && !expected; ++t0) {
      for (std::int64_t p = 1; t0 + 2 * p <= horizon; ++p) {
        if (auto d = periodic_at(trace, b, t0, p)) {
          expected = {t0, p};
          expected_delta = d;
          break;
        }
      }
    }
    const auto cert = detect_period(trace, b);
    ASSERT_EQ(cert.has_value(), expected.has_value()) << "iter " << iter;
    if (!cert) continue;
    ++found;
    EXPECT_EQ(cert->t0, expected->first);
    EXPECT_EQ(cert->period, expected->second);
    EXPECT_EQ(cert->displacement, *expected_delta);
    EXPECT_TRUE(verify_certificate(trace, b, *cert));
  }
  EXPECT_GT(found, 40);
}
