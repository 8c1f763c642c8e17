#ifndef COLLECTIVE_ENGINE_HPP
#define COLLECTIVE_ENGINE_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "collective/automata.hpp"
#include "collective/environment.hpp"
#include "collective/rational.hpp"

namespace collective {

/// Static part of a world: where bodies live and how each colour reacts.
struct Dynamics {
  Environment environment;
  std::vector<Colour> colours;
  int saturation_cap = 3;
};

struct Placement {
  int elem_id = 0;
  ColourIndex colour = 0;
  Arc arc;               // head reduced into the fundamental domain
  LatticeCoord winding;  // unwrapped head = arc.head + winding

  LatticeCoord unwrapped_head() const { return arc.head + winding; }
};

struct InitialPlacement {
  int elem_id = 0;
  ColourIndex colour = 0;
  LatticeCoord head;  // unreduced; its offset from the reduced head becomes the winding
  DirIndex dir = 0;
};

struct WorldState {
  std::shared_ptr<const Dynamics> dynamics;
  std::int64_t t = 0;
  std::vector<Placement> placements;  // sorted by elem_id

  const Environment& environment() const { return dynamics->environment; }
};

/// Validates ids, colours and directions and sorts by elem_id.
/// Throws std::invalid_argument.
WorldState make_world(std::shared_ptr<const Dynamics> dynamics,
                      std::vector<InitialPlacement> population, std::int64_t t = 0);

struct StepOptions {
  bool parallel = true;
};

/// Saturated count matrix at `vertex` (reduced coordinates). Linear scan.
NeighbourhoodState neighbourhood(const WorldState& world, const LatticeCoord& vertex);

/// Next direction of every placement, in placement order, computed against
/// the frozen time-t world.
std::vector<DirIndex> decide_directions(const WorldState& world, StepOptions options = {});

/// Moves every placement onto the arc leaving its head in the given direction.
WorldState apply_directions(const WorldState& world, const std::vector<DirIndex>& next_dirs);

WorldState step(const WorldState& world, StepOptions options = {});

namespace reference {

/// Serial O(N^2) step: one full neighbourhood scan per placement. Kept as the
/// oracle for the indexed kernel.
WorldState step(const WorldState& world);

}  // namespace reference

struct ElementTrack {
  int elem_id = 0;
  ColourIndex colour = 0;
  std::vector<DirIndex> dirs;       // dir(b(t)), t = 0..T
  std::vector<LatticeCoord> heads;  // unwrapped head of b(t)
  std::vector<bool> turned;         // dir(b(t+1)) != dir(b(t)); entry T uses one step of lookahead
};

class Trace {
 public:
  Trace(WorldState initial, std::int64_t horizon, std::vector<ElementTrack> tracks);

  const WorldState& initial() const { return initial_; }
  const Environment& environment() const { return initial_.environment(); }
  std::int64_t horizon() const { return horizon_; }
  const std::vector<ElementTrack>& tracks() const { return tracks_; }
  const ElementTrack& track(int elem_id) const;
  bool contains(int elem_id) const;

  /// Unwrapped tail of b(t): the element's position at integer time t.
  LatticeCoord tail(int elem_id, std::int64_t t) const;
  /// Lattice point of tail(elem_id, t).
  IntVector position(int elem_id, std::int64_t t) const;
  /// World state at t with placements rebuilt from the recorded tracks.
  WorldState state_at(std::int64_t t) const;

 private:
  WorldState initial_;
  std::int64_t horizon_;
  std::vector<ElementTrack> tracks_;
};

/// Applies `horizon` steps. Throws std::invalid_argument if horizon < 1.
Trace run(const WorldState& initial, std::int64_t horizon, StepOptions options = {});

/// Unwrapped heads rebuilt from the initial head and the direction sequence.
std::vector<LatticeCoord> reconstruct_heads(const Environment& env, const LatticeCoord& initial_head,
                                            const std::vector<DirIndex>& dirs);

struct InterpolatedPosition {
  RationalVector point;  // unwrapped lattice point
  std::vector<double> euclidean;
};

/// Position at real time t: tail(b(floor t)) + frac(t) * vector(dir).
/// Throws std::out_of_range outside [0, horizon].
InterpolatedPosition interpolate(const Trace& trace, int elem_id, const Rational& t);

}  // namespace collective

#endif  // COLLECTIVE_ENGINE_HPP
