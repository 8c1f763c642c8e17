#include "collective/engine.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <set>
#include <stdexcept>

namespace collective {

WorldState make_world(std::shared_ptr<const Dynamics> dynamics,
                      std::vector<InitialPlacement> population, std::int64_t t) {
  if (!dynamics) throw std::invalid_argument("world without dynamics");
  const Environment& env = dynamics->environment;
  const auto report = validate_colour_set(dynamics->colours, env, dynamics->saturation_cap);
  if (!report.ok()) throw std::invalid_argument("invalid colour set: " + report.summary());

  std::set<int> ids;
  std::vector<Placement> placements;
  placements.reserve(population.size());
  for (auto& p : population) {
    if (!ids.insert(p.elem_id).second) {
      throw std::invalid_argument("duplicate elem_id " + std::to_string(p.elem_id));
    }
    if (p.colour >= dynamics->colours.size()) {
      throw std::invalid_argument("elem " + std::to_string(p.elem_id) + " has unknown colour");
    }
    if (p.dir >= env.direction_count()) {
      throw std::invalid_argument("elem " + std::to_string(p.elem_id) + " has unknown direction");
    }
    if (p.head.dimension() != env.dimension()) {
      throw std::invalid_argument("elem " + std::to_string(p.elem_id) + " head has wrong dimension");
    }
    const LatticeCoord reduced = env.reduce(p.head);
    placements.push_back({p.elem_id, p.colour, Arc{reduced, p.dir}, p.head - reduced});
  }
  std::sort(placements.begin(), placements.end(),
            [](const Placement& a, const Placement& b) { return a.elem_id < b.elem_id; });
  return WorldState{std::move(dynamics), t, std::move(placements)};
}

NeighbourhoodState neighbourhood(const WorldState& world, const LatticeCoord& vertex) {
  const Dynamics& dyn = *world.dynamics;
  NeighbourhoodState nb(dyn.environment.direction_count(), dyn.colours.size(), dyn.saturation_cap);
  for (const auto& p : world.placements) {
    if (p.arc.head == vertex) nb.add(p.arc.dir, p.colour);
  }
  return nb;
}

std::vector<DirIndex> decide_directions(const WorldState& world, StepOptions options) {
  const Dynamics& dyn = *world.dynamics;
  const auto& placements = world.placements;
  const std::size_t count = placements.size();

  // Group placements by the vertex their arc ends in.
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ha = placements[a].arc.head;
    const auto& hb = placements[b].arc.head;
    return ha != hb ? ha < hb : a < b;
  });
  std::vector<std::size_t> group_start;
  for (std::size_t i = 0; i < count; ++i) {
    if (i == 0 || placements[order[i]].arc.head != placements[order[i - 1]].arc.head) {
      group_start.push_back(i);
    }
  }
  group_start.push_back(count);
  const auto groups = static_cast<std::int64_t>(group_start.size()) - 1;

  std::vector<DirIndex> next(count);
  std::exception_ptr failure;
#if defined(COLLECTIVE_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 16) if (options.parallel && groups > 1)
#endif
  for (std::int64_t g = 0; g < groups; ++g) {
    try {
      NeighbourhoodState nb(dyn.environment.direction_count(), dyn.colours.size(),
                            dyn.saturation_cap);
      for (std::size_t i = group_start[g]; i < group_start[g + 1]; ++i) {
        const auto& p = placements[order[i]];
        nb.add(p.arc.dir, p.colour);
      }
      for (std::size_t i = group_start[g]; i < group_start[g + 1]; ++i) {
        const auto& p = placements[order[i]];
        next[order[i]] = is_vacuum(nb, p.arc.dir) ? p.arc.dir
                                                   : evaluate(dyn.colours[p.colour].rule, nb);
      }
    } catch (...) {
#if defined(COLLECTIVE_HAVE_OPENMP)
#pragma omp critical(collective_step_failure)
#endif
      failure = std::current_exception();
    }
  }
  (void)options;
  if (failure) std::rethrow_exception(failure);
  return next;
}

WorldState apply_directions(const WorldState& world, const std::vector<DirIndex>& next_dirs) {
  const Environment& env = world.environment();
  if (next_dirs.size() != world.placements.size()) {
    throw std::invalid_argument("direction batch does not match population");
  }
  WorldState out{world.dynamics, world.t + 1, {}};
  out.placements.reserve(world.placements.size());
  for (std::size_t i = 0; i < next_dirs.size(); ++i) {
    const Placement& p = world.placements[i];
    const LatticeCoord unwrapped = env.translate(p.unwrapped_head(), next_dirs[i]);
    const LatticeCoord reduced = env.reduce(unwrapped);
    out.placements.push_back({p.elem_id, p.colour, Arc{reduced, next_dirs[i]}, unwrapped - reduced});
  }
  return out;
}

WorldState step(const WorldState& world, StepOptions options) {
  return apply_directions(world, decide_directions(world, options));
}

Trace::Trace(WorldState initial, std::int64_t horizon, std::vector<ElementTrack> tracks)
    : initial_(std::move(initial)), horizon_(horizon), tracks_(std::move(tracks)) {}

bool Trace::contains(int elem_id) const {
  const auto it = std::lower_bound(tracks_.begin(), tracks_.end(), elem_id,
                                   [](const ElementTrack& a, int id) { return a.elem_id < id; });
  return it != tracks_.end() && it->elem_id == elem_id;
}

const ElementTrack& Trace::track(int elem_id) const {
  const auto it = std::lower_bound(tracks_.begin(), tracks_.end(), elem_id,
                                   [](const ElementTrack& a, int id) { return a.elem_id < id; });
  if (it == tracks_.end() || it->elem_id != elem_id) {
    throw std::out_of_range("unknown elem_id " + std::to_string(elem_id));
  }
  return *it;
}

LatticeCoord Trace::tail(int elem_id, std::int64_t t) const {
  if (t < 0 || t > horizon_) throw std::out_of_range("time outside trace horizon");
  const auto& tr = track(elem_id);
  return tr.heads[t] - environment().unit(tr.dirs[t]);
}

IntVector Trace::position(int elem_id, std::int64_t t) const {
  return environment().lattice_point(tail(elem_id, t));
}

WorldState Trace::state_at(std::int64_t t) const {
  if (t < 0 || t > horizon_) throw std::out_of_range("time outside trace horizon");
  const Environment& env = environment();
  WorldState out{initial_.dynamics, initial_.t + t, {}};
  for (const auto& tr : tracks_) {
    const LatticeCoord reduced = env.reduce(tr.heads[t]);
    out.placements.push_back({tr.elem_id, tr.colour, Arc{reduced, tr.dirs[t]}, tr.heads[t] - reduced});
  }
  return out;
}

Trace run(const WorldState& initial, std::int64_t horizon, StepOptions options) {
  if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  std::vector<ElementTrack> tracks;
  for (const auto& p : initial.placements) {
    ElementTrack tr{p.elem_id, p.colour, {}, {}, {}};
    tr.dirs.reserve(horizon + 1);
    tr.heads.reserve(horizon + 1);
    tr.turned.reserve(horizon + 1);
    tracks.push_back(std::move(tr));
  }
  WorldState world = initial;
  for (std::int64_t t = 0; t <= horizon; ++t) {
    const auto next = decide_directions(world, options);
    for (std::size_t i = 0; i < world.placements.size(); ++i) {
      const Placement& p = world.placements[i];
      tracks[i].dirs.push_back(p.arc.dir);
      tracks[i].heads.push_back(p.unwrapped_head());
      tracks[i].turned.push_back(next[i] != p.arc.dir);
    }
    if (t < horizon) world = apply_directions(world, next);
  }
  return Trace(initial, horizon, std::move(tracks));
}

std::vector<LatticeCoord> reconstruct_heads(const Environment& env, const LatticeCoord& initial_head,
                                            const std::vector<DirIndex>& dirs) {
  std::vector<LatticeCoord> heads;
  if (dirs.empty()) return heads;
  heads.reserve(dirs.size());
  heads.push_back(initial_head);
  for (std::size_t t = 1; t < dirs.size(); ++t) heads.push_back(env.translate(heads.back(), dirs[t]));
  return heads;
}

InterpolatedPosition interpolate(const Trace& trace, int elem_id, const Rational& t) {
  if (t < 0 || t > trace.horizon()) throw std::out_of_range("interpolation time outside [0, horizon]");
  const Environment& env = trace.environment();
  const mpz_class whole = t.get_num() / t.get_den();  // floor for t >= 0
  const auto step_index = static_cast<std::int64_t>(whole.get_si());
  const Rational frac = t - Rational(whole);
  const auto& tr = trace.track(elem_id);
  RationalVector point = env.rational_point(trace.tail(elem_id, step_index));
  if (frac != 0) {
    const auto& v = env.directions().vector(tr.dirs[step_index]);
    for (std::size_t k = 0; k < point.size(); ++k) point[k] += frac * Rational(static_cast<long>(v[k]));
  }
  return {point, env.euclidean_of_point(point)};
}

}  // namespace collective
