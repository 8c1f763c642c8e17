#ifndef COLLECTIVE_SCENARIO_HPP
#define COLLECTIVE_SCENARIO_HPP

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "collective/bodies.hpp"
#include "collective/engine.hpp"

namespace collective {

/// Schema or validation failure; the message starts with the offending field
/// path, e.g. "population[1].dir: unknown direction 'X'".
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PopulationEntry {
  int id = 0;
  std::string name;
  ColourIndex colour = 0;
  LatticeCoord head;  // counts over the first n directions, unreduced
  DirIndex dir = 0;
};

struct Scenario {
  std::string name;
  std::shared_ptr<const Dynamics> dynamics;
  std::vector<PopulationEntry> population;
  std::vector<Body> bodies;
  std::int64_t horizon = 1;

  const Environment& environment() const { return dynamics->environment; }
  WorldState initial_state() const;
  const Body& body(std::string_view name) const;
};

Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

/// Same scenario with every initial head shifted by `offset` (counts over the
/// first n directions).
Scenario translated(const Scenario& scenario, const IntVector& offset);

Scenario with_saturation_cap(const Scenario& scenario, int cap);

}  // namespace collective

#endif  // COLLECTIVE_SCENARIO_HPP
