#include <benchmark/benchmark.h>

#include "majoloop/block.hpp"
#include "majoloop/lattice.hpp"
#include "majoloop/pairing.hpp"
#include "majoloop/rng.hpp"

using namespace majoloop;

static void BM_Measure(benchmark::State& state) {
    const int32_t n = 4096;
    Rng rng(12345);
    for (auto _ : state) {
        state.PauseTiming();
        PairingTable pt(n);
        for (int32_t i = 0; i < n; i += 2) pt.pair(i, i + 1, 0);
        state.ResumeTiming();
        for (int64_t k = 0; k < state.range(0); ++k) {
            int32_t a = static_cast<int32_t>(rng.next_below(n));
            int32_t b = static_cast<int32_t>(rng.next_below(n));
            if (a != b) pt.measure(a, b);
        }
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Measure)->Arg(1 << 12)->Arg(1 << 16);

static void BM_MakeLayer(benchmark::State& state) {
    const int32_t l = static_cast<int32_t>(state.range(0));
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, l, l);
    Rng rng(999);
    for (auto _ : state) {
        benchmark::DoNotOptimize(make_layer(spec, rng));
    }
    state.SetItemsProcessed(state.iterations() * spec.n_sites());
}
BENCHMARK(BM_MakeLayer)->Arg(16)->Arg(64)->Arg(128);

static void BM_Compose(benchmark::State& state) {
    const int32_t l = static_cast<int32_t>(state.range(0));
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, l, l);
    Rng rng(7);
    CircuitBlock a = make_layer(spec, rng);
    CircuitBlock b = make_layer(spec, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose(a, b, 1, 2));
    }
    state.SetItemsProcessed(state.iterations() * spec.n_sites());
}
BENCHMARK(BM_Compose)->Arg(16)->Arg(64)->Arg(128);

static void BM_CloseBoundary(benchmark::State& state) {
    const int32_t l = static_cast<int32_t>(state.range(0));
    LatticeSpec spec = build_lattice(Geometry::Honeycomb, l, l);
    Rng rng(8);
    CircuitBlock blk = compose(make_layer(spec, rng), make_layer(spec, rng), 0, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(close_boundary(blk, ClosurePolicy::MixedBottom));
    }
}
BENCHMARK(BM_CloseBoundary)->Arg(16)->Arg(64)->Arg(128);
