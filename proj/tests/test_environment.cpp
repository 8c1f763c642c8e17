#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "collective/environment.hpp"
#include "support.hpp"

using namespace collective;
using collective::fixtures::Rng;
using collective::fixtures::uniform;

namespace {

LatticeCoord at(IntVector counts) { return LatticeCoord::from_counts(std::move(counts)); }

bool has_violation(const ValidationReport& r, const std::string& needle) {
  for (const auto& v : r.violations) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Environment, StandardOneDimensional) {
  const auto env = make_standard_environment(1);
  ASSERT_EQ(env.direction_count(), 2u);
  EXPECT_EQ(env.directions().vector(0), IntVector{1});
  EXPECT_EQ(env.directions().vector(1), IntVector{-1});
  EXPECT_EQ(env.directions().name(0), "R");
  EXPECT_EQ(env.directions().name(1), "L");
}

TEST(Environment, StandardTwoDimensional) {
  const auto env = make_standard_environment(2);
  const auto& d = env.directions();
  EXPECT_EQ(d.vector(0), (IntVector{1, 0}));
  EXPECT_EQ(d.vector(1), (IntVector{0, 1}));
  EXPECT_EQ(d.vector(2), (IntVector{-1, -1}));
  // sum and pairwise independence, checked directly
  for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(d.vector(0)[k] + d.vector(1)[k] + d.vector(2)[k], 0);
  for (DirIndex a = 0; a < 3; ++a) {
    for (DirIndex b = a + 1; b < 3; ++b) {
      EXPECT_NE(d.vector(a)[0] * d.vector(b)[1] - d.vector(a)[1] * d.vector(b)[0], 0);
    }
  }
  EXPECT_TRUE(check_actual_direction_count(d).ok());
}

TEST(Environment, RingOfSixHasSixVerticesAndTwelveArcs) {
  const auto env = make_standard_environment(1, Topology::ring(6));
  std::set<LatticeCoord> vertices;
  LatticeCoord v = LatticeCoord::origin(1);
  for (int i = 0; i < 20; ++i) {
    vertices.insert(v);
    v = env.step_vertex(v, 0);
  }
  EXPECT_EQ(vertices.size(), 6u);
  EXPECT_EQ(env.vertex_count(), 6);
  EXPECT_EQ(*env.vertex_count() * static_cast<std::int64_t>(env.direction_count()), 12);
}

TEST(Environment, InvalidTorusBases) {
  EXPECT_THROW(make_standard_environment(1, Topology::ring(1)), std::invalid_argument);
  EXPECT_THROW(make_standard_environment(1, Topology::ring(0)), std::invalid_argument);
  EXPECT_THROW(make_standard_environment(2, Topology::torus({{2, 0}, {4, 0}})), std::invalid_argument);
  EXPECT_THROW(make_standard_environment(2, Topology::torus({{2, 0}})), std::invalid_argument);
  // a generator equal to a single step would make an arc a loop
  EXPECT_THROW(make_standard_environment(2, Topology::torus({{1, 0}, {0, 3}})), std::invalid_argument);
  EXPECT_NO_THROW(make_standard_environment(1, Topology::ring(2)));
}

TEST(Environment, DirectionCountValidation) {
  EXPECT_TRUE(check_actual_direction_count(standard_directions(1)).ok());
  EXPECT_TRUE(check_actual_direction_count(standard_directions(3)).ok());

  const DirectionSet four(2, {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {-1, 0}}, {"d", {0, -1}}});
  const auto r4 = check_actual_direction_count(four);
  EXPECT_FALSE(r4.ok());
  EXPECT_TRUE(has_violation(r4, "m ≠ n+1")) << r4.summary();

  const DirectionSet degenerate(2, {{"a", {1, 0}}, {"b", {-1, 0}}, {"c", {0, 0}}});
  const auto rz = check_actual_direction_count(degenerate);
  EXPECT_TRUE(has_violation(rz, "zero/dependent directions")) << rz.summary();

  const DirectionSet unbalanced(1, {{"a", {1}}, {"b", {-2}}});
  EXPECT_TRUE(has_violation(check_actual_direction_count(unbalanced), "do not sum to zero"));

  const DirectionSet repeated(2, {{"a", {1, 1}}, {"b", {1, 1}}, {"c", {-2, -2}}});
  EXPECT_FALSE(check_actual_direction_count(repeated).ok());
}

TEST(Environment, StepVertexExamples) {
  const auto line = make_standard_environment(1);
  EXPECT_EQ(line.step_vertex(at({0, 0}), 0), at({1, 0}));
  const auto ring = make_standard_environment(1, Topology::ring(6));
  EXPECT_EQ(ring.step_vertex(at({5, 0}), 0), at({0, 0}));
  const auto plane = make_standard_environment(2);
  const auto v = plane.step_vertex(at({0, 0, 0}), 2);
  EXPECT_EQ(plane.lattice_point(v), (IntVector{-1, -1}));
  EXPECT_EQ(v.counts().back(), 0);
}

TEST(Environment, CanonicalForm) {
  EXPECT_EQ(at({4, 1}), at({3, 0}));
  EXPECT_EQ(at({4, 1}).counts(), (IntVector{3, 0}));
  EXPECT_EQ(at({1, 1, 1}), LatticeCoord::origin(2));
  EXPECT_EQ(at({1, 1, 1}).to_string(), "0;0;0");
}

TEST(Environment, EuclideanExamples) {
  const auto line = make_standard_environment(1);
  EXPECT_DOUBLE_EQ(line.euclidean_position(at({3, 0}))[0], 3.0);
  const auto plane = make_standard_environment(2);
  const auto origin = plane.euclidean_position(at({1, 1, 1}));
  EXPECT_EQ(origin[0], 0.0);
  EXPECT_EQ(origin[1], 0.0);
  const auto e1 = plane.euclidean_position(at({1, 0, 0}));
  EXPECT_NEAR(e1[0], 1.0, 1e-12);
  EXPECT_NEAR(e1[1], 0.0, 1e-12);
}

TEST(Environment, EmbeddingIsUnitAndBalanced) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto env = make_standard_environment(n);
    std::vector<double> sum(n, 0.0);
    for (DirIndex d = 0; d <= n; ++d) {
      double norm = 0;
      for (std::size_t k = 0; k < n; ++k) {
        norm += env.embedding(d)[k] * env.embedding(d)[k];
        sum[k] += env.embedding(d)[k];
      }
      EXPECT_NEAR(norm, 1.0, 1e-12);
    }
    for (double s : sum) EXPECT_NEAR(s, 0.0, 1e-12);
    // equal pairwise angles: dot = -1/n
    for (DirIndex a = 0; a <= n; ++a) {
      for (DirIndex b = a + 1; b <= n; ++b) {
        double dot = 0;
        for (std::size_t k = 0; k < n; ++k) dot += env.embedding(a)[k] * env.embedding(b)[k];
        EXPECT_NEAR(dot, -1.0 / double(n), 1e-12);
      }
    }
  }
}

TEST(EnvironmentProperty, StepIsBijectiveAndConsistentWithQuotient) {
  Rng rng(5);
  for (int iter = 0; iter < 300; ++iter) {
    const auto n = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto side = uniform(rng, 2, 7);
    std::vector<IntVector> basis;
    for (std::size_t i = 0; i < n; ++i) {
      IntVector col(n, 0);
      col[i] = side;
      if (i + 1 < n) col[i + 1] = uniform(rng, -side, side);
      basis.push_back(col);
    }
    const bool torus = iter % 2 == 0;
    const auto env = make_standard_environment(n, torus ? Topology::torus(basis) : Topology::infinite());
    IntVector counts(n + 1);
    for (auto& c : counts) c = uniform(rng, -20, 20);
    const auto raw = at(counts);
    const auto v = env.reduce(raw);
    EXPECT_EQ(env.reduce(v), v);
    const auto d = static_cast<DirIndex>(uniform(rng, 0, static_cast<std::int64_t>(n)));
    // stepping commutes with reduction
    EXPECT_EQ(env.step_vertex(raw, d), env.step_vertex(v, d));
    EXPECT_EQ(env.step_vertex(v, d), env.reduce(env.translate(v, d)));
    // subtracting the direction undoes the step
    const auto back = env.reduce(env.step_vertex(v, d) - env.unit(d));
    EXPECT_EQ(back, v);
    // adding (k,...,k) never changes the class
    IntVector shifted = counts;
    const auto k = uniform(rng, -5, 5);
    for (auto& c : shifted) c += k;
    EXPECT_EQ(at(shifted), raw);
    if (torus) {
      const auto period = env.period_along(d);
      ASSERT_TRUE(period.has_value());
      auto w = v;
      for (std::int64_t s = 0; s < *period; ++s) {
        w = env.step_vertex(w, d);
        if (s + 1 < *period) {
          EXPECT_NE(w, v);
        }
      }
      EXPECT_EQ(w, v);
    } else {
      const auto before = env.euclidean_position(v);
      const auto after = env.euclidean_position(env.step_vertex(v, d));
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(after[i] - before[i], env.embedding(d)[i], 1e-12);
    }
  }
}

TEST(EnvironmentProperty, RationalPointRoundTrip) {
  Rng rng(9);
  for (int iter = 0; iter < 100; ++iter) {
    const auto n = static_cast<std::size_t>(uniform(rng, 1, 3));
    const auto env = make_standard_environment(n);
    IntVector counts(n + 1);
    for (auto& c : counts) c = uniform(rng, -9, 9);
    const auto v = at(counts);
    const auto point = env.rational_point(v);
    const auto back = env.counts_of_point(point);
    ASSERT_EQ(back.size(), n);
    for (std::size_t k = 0; k < n; ++k) EXPECT_EQ(back[k], Rational(static_cast<long>(v.counts()[k])));
  }
}
