#include "collective/engine.hpp"

namespace collective::reference {

WorldState step(const WorldState& world) {
  const Dynamics& dyn = *world.dynamics;
  std::vector<DirIndex> next;
  next.reserve(world.placements.size());
  for (const auto& p : world.placements) {
    const NeighbourhoodState nb = neighbourhood(world, p.arc.head);
    next.push_back(is_vacuum(nb, p.arc.dir) ? p.arc.dir : evaluate(dyn.colours[p.colour].rule, nb));
  }
  return apply_directions(world, next);
}

}  // namespace collective::reference
