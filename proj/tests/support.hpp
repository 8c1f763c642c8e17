#ifndef COLLECTIVE_TESTS_SUPPORT_HPP
#define COLLECTIVE_TESTS_SUPPORT_HPP

// Generators and helpers shared by the unit and acceptance tests.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "collective/bodies.hpp"
#include "collective/engine.hpp"
#include "collective/rational.hpp"

namespace collective::fixtures {

using Rng = std::mt19937_64;

inline std::filesystem::path source_path(const std::string& relative) {
  return std::filesystem::path(COLLECTIVE_SOURCE_DIR) / relative;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng, std::int64_t lo, std::int64_t hi, std::int64_t max_den = 12) {
  const auto den = uniform(rng, 1, max_den);
  const auto num = uniform(rng, lo * den, hi * den);
  Rational q(static_cast<long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

struct WorldShape {
  std::size_t dimension = 1;
  bool torus = true;
  std::int64_t side = 6;  // torus side length
  int colours = 2;
  int elements = 4;
  int cap = 3;
};

inline WorldShape random_shape(Rng& rng) {
  WorldShape s;
  s.dimension = static_cast<std::size_t>(uniform(rng, 1, 2));
  s.torus = uniform(rng, 0, 3) != 0;
  s.side = uniform(rng, 3, s.dimension == 1 ? 12 : 6);
  s.colours = static_cast<int>(uniform(rng, 1, 3));
  s.elements = static_cast<int>(uniform(rng, 1, 8));
  return s;
}

inline Topology make_topology(const WorldShape& s) {
  if (!s.torus) return Topology::infinite();
  std::vector<IntVector> basis;
  for (std::size_t i = 0; i < s.dimension; ++i) {
    IntVector col(s.dimension, 0);
    col[i] = s.side;
    basis.push_back(col);
  }
  return Topology::torus(basis);
}

inline OutputRule random_rule(Rng& rng, std::size_t dirs, int colours, int cap) {
  OutputRule rule;
  const auto clauses = uniform(rng, 0, 3);
  for (std::int64_t i = 0; i < clauses; ++i) {
    Clause clause;
    const auto atoms = uniform(rng, 1, 2);
    for (std::int64_t a = 0; a < atoms; ++a) {
      GuardAtom atom;
      atom.dir = static_cast<DirIndex>(uniform(rng, 0, static_cast<std::int64_t>(dirs) - 1));
      atom.colour = static_cast<ColourIndex>(uniform(rng, 0, colours - 1));
      atom.kind = uniform(rng, 0, 3) == 0 ? GuardAtom::Kind::Zero : GuardAtom::Kind::AtLeast;
      atom.threshold = static_cast<int>(uniform(rng, 1, cap));
      clause.guard.push_back(atom);
    }
    clause.output = static_cast<DirIndex>(uniform(rng, 0, static_cast<std::int64_t>(dirs) - 1));
    rule.clauses.push_back(clause);
  }
  rule.fallback = static_cast<DirIndex>(uniform(rng, 0, static_cast<std::int64_t>(dirs) - 1));
  return rule;
}

inline std::shared_ptr<const Dynamics> random_dynamics(Rng& rng, const WorldShape& s) {
  std::vector<Colour> colours;
  for (int c = 0; c < s.colours; ++c) {
    colours.push_back({c + 1, "c" + std::to_string(c + 1), random_rule(rng, s.dimension + 1, s.colours, s.cap)});
  }
  return std::make_shared<const Dynamics>(
      Dynamics{make_standard_environment(s.dimension, make_topology(s)), colours, s.cap});
}

inline std::vector<InitialPlacement> random_population(Rng& rng, const WorldShape& s, int first_id = 1) {
  const std::int64_t span = s.torus ? s.side - 1 : 6;
  std::vector<InitialPlacement> pop;
  for (int i = 0; i < s.elements; ++i) {
    IntVector counts(s.dimension + 1, 0);
    for (std::size_t k = 0; k < s.dimension; ++k) counts[k] = uniform(rng, s.torus ? 0 : -span, span);
    pop.push_back({first_id + i, static_cast<ColourIndex>(uniform(rng, 0, s.colours - 1)),
                   LatticeCoord::from_counts(counts),
                   static_cast<DirIndex>(uniform(rng, 0, static_cast<std::int64_t>(s.dimension)))});
  }
  return pop;
}

inline WorldState random_world(Rng& rng, const WorldShape& s) {
  return make_world(random_dynamics(rng, s), random_population(rng, s));
}

inline std::vector<int> all_ids(const Trace& trace) {
  std::vector<int> ids;
  for (const auto& tr : trace.tracks()) ids.push_back(tr.elem_id);
  return ids;
}

// Ring of random circumference where colours 1 and 2 bounce off each other
// (the ring-6 rules); sustained oscillation is common.
inline WorldState random_bouncing_ring(Rng& rng) {
  constexpr DirIndex R = 0, L = 1;
  OutputRule one;
  one.clauses.push_back({{GuardAtom{L, 1, GuardAtom::Kind::AtLeast, 1}}, L});
  one.clauses.push_back({{GuardAtom{R, 1, GuardAtom::Kind::AtLeast, 1}}, R});
  one.fallback = R;
  OutputRule two;
  two.clauses.push_back({{GuardAtom{R, 0, GuardAtom::Kind::AtLeast, 1}}, R});
  two.clauses.push_back({{GuardAtom{L, 0, GuardAtom::Kind::AtLeast, 1}}, L});
  two.fallback = L;
  const auto side = uniform(rng, 4, 12);
  auto dyn = std::make_shared<const Dynamics>(
      Dynamics{make_standard_environment(1, Topology::ring(side)), {{1, "one", one}, {2, "two", two}}, 3});
  std::vector<InitialPlacement> pop;
  const auto count = uniform(rng, 2, 5);
  for (int i = 0; i < count; ++i) {
    pop.push_back({i + 1, static_cast<ColourIndex>(i % 2 == 0 ? 0 : uniform(rng, 0, 1)),
                   LatticeCoord::from_counts({uniform(rng, 0, side - 1), 0}),
                   static_cast<DirIndex>(uniform(rng, 0, 1))});
  }
  return make_world(dyn, pop);
}

struct PeriodicCase {
  WorldState world;
  Body body;
  PeriodicityCertificate cert;
};

/// Periodic bodies with at least one turn per period and room for three
/// periods within the horizon. At most one body (the largest periodic member
/// subset) is taken from each generated world.
inline std::vector<PeriodicCase> periodic_bodies(Rng& rng, std::size_t count, std::int64_t horizon,
                                                 bool drifting_only = false) {
  std::vector<PeriodicCase> out;
  for (int iter = 0; out.size() < count && iter < 200000; ++iter) {
    WorldState world = [&] {
      if (iter % 2 == 0) return random_bouncing_ring(rng);
      auto shape = random_shape(rng);
      shape.torus = true;
      shape.side = uniform(rng, 3, 6);
      shape.elements = static_cast<int>(uniform(rng, 2, 5));
      return random_world(rng, shape);
    }();
    const Trace trace = run(world, horizon);
    const auto ids = all_ids(trace);
    std::optional<PeriodicCase> best;
    for (unsigned mask = 1; mask < (1u << ids.size()); ++mask) {
      Body body{"b", {}};
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if ((mask >> i) & 1u) body.members.push_back(ids[i]);
      }
      if (best && best->body.members.size() >= body.members.size()) continue;
      const auto cert = detect_period(trace, body);
      if (!cert || cert->turns_per_period == 0 || cert->t0 + 3 * cert->period > horizon) continue;
      bool drift = false;
      for (auto d : cert->displacement) drift = drift || d != 0;
      if (drifting_only && !drift) continue;
      best = PeriodicCase{world, body, *cert};
    }
    if (best) out.push_back(*best);
  }
  return out;
}

}  // namespace collective::fixtures

#endif  // COLLECTIVE_TESTS_SUPPORT_HPP
