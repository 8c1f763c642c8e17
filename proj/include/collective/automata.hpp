#ifndef COLLECTIVE_AUTOMATA_HPP
#define COLLECTIVE_AUTOMATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "collective/environment.hpp"

namespace collective {

using ColourIndex = std::size_t;

/// Count matrix p[d][c]: bodies of colour c on the direction-d arc ending at
/// one vertex, clamped to the saturation cap.
class NeighbourhoodState {
 public:
  NeighbourhoodState(std::size_t directions, std::size_t colours, int cap);

  std::size_t direction_count() const { return directions_; }
  std::size_t colour_count() const { return colours_; }
  int cap() const { return cap_; }

  int at(DirIndex d, ColourIndex c) const { return counts_.at(d * colours_ + c); }
  /// Saturating increment.
  void add(DirIndex d, ColourIndex c, int amount = 1);
  void set(DirIndex d, ColourIndex c, int value);

  bool operator==(const NeighbourhoodState&) const = default;

 private:
  std::size_t directions_;
  std::size_t colours_;
  int cap_;
  std::vector<int> counts_;
};

struct GuardAtom {
  enum class Kind { AtLeast, Zero };

  DirIndex dir = 0;
  ColourIndex colour = 0;
  Kind kind = Kind::AtLeast;
  int threshold = 1;  // only for AtLeast

  bool holds(const NeighbourhoodState& nb) const;
};

struct Clause {
  std::vector<GuardAtom> guard;  // conjunction; empty guard always matches
  DirIndex output = 0;
};

/// First-match rule; total on saturated neighbourhood states.
struct OutputRule {
  std::vector<Clause> clauses;
  DirIndex fallback = 0;
};

struct Colour {
  int id = 1;
  std::string name;
  OutputRule rule;
};

/// Output direction of the stateless automaton. Throws std::invalid_argument
/// if the rule refers to directions or colours outside the state matrix.
DirIndex evaluate(const OutputRule& rule, const NeighbourhoodState& nb);

/// True iff every arc other than the body's own (direction own_dir) is empty.
bool is_vacuum(const NeighbourhoodState& nb, DirIndex own_dir);

ValidationReport validate_colour_set(const std::vector<Colour>& colours, const Environment& env,
                                     int cap);

}  // namespace collective

#endif  // COLLECTIVE_AUTOMATA_HPP
