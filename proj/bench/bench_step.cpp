// Step kernel comparison on a dense ring and a 2-D torus.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "collective/engine.hpp"

namespace {

using namespace collective;

// Colour 1 drifts; colour 2 reverses whenever anything sits on its head
// along its own direction.
std::vector<Colour> bench_colours(std::size_t dirs) {
  Colour drift{1, "drift", {{}, 0}};
  OutputRule bounce;
  for (DirIndex d = 0; d < dirs; ++d) {
    bounce.clauses.push_back({{GuardAtom{d, 0, GuardAtom::Kind::AtLeast, 2}},
                              static_cast<DirIndex>((d + 1) % dirs)});
  }
  bounce.fallback = 0;
  Colour bouncer{2, "bounce", bounce};
  return {drift, bouncer};
}

WorldState make_bench_world(std::size_t n, std::int64_t side, int elements) {
  std::vector<IntVector> basis;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector col(n, 0);
    col[i] = side;
    basis.push_back(col);
  }
  auto dyn = std::make_shared<Dynamics>(Dynamics{
      make_standard_environment(n, Topology::torus(basis)), bench_colours(n + 1), 3});
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> coord(0, side - 1);
  std::uniform_int_distribution<int> dir(0, static_cast<int>(n));
  std::uniform_int_distribution<int> colour(0, 1);
  std::vector<InitialPlacement> pop;
  for (int i = 1; i <= elements; ++i) {
    IntVector counts(n + 1, 0);
    for (std::size_t k = 0; k < n; ++k) counts[k] = coord(rng);
    pop.push_back({i, static_cast<ColourIndex>(colour(rng)), LatticeCoord::from_counts(counts),
                   static_cast<DirIndex>(dir(rng))});
  }
  return make_world(dyn, pop);
}

void BM_Reference(benchmark::State& state) {
  const auto world = make_bench_world(2, 64, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::step(world));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IndexedSerial(benchmark::State& state) {
  const auto world = make_bench_world(2, 64, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(step(world, StepOptions{false}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_IndexedParallel(benchmark::State& state) {
  const auto world = make_bench_world(2, 64, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(step(world, StepOptions{true}));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_Reference)->RangeMultiplier(4)->Range(64, 4096);
BENCHMARK(BM_IndexedSerial)->RangeMultiplier(4)->Range(64, 16384);
BENCHMARK(BM_IndexedParallel)->RangeMultiplier(4)->Range(64, 16384);

}  // namespace

BENCHMARK_MAIN();
