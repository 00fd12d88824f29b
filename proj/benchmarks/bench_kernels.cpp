#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "fracdim/covering.hpp"
#include "fracdim/setgen.hpp"
#include "fracdim/spectra.hpp"

using namespace fracdim;

static void BM_GridCountCantor(benchmark::State& state) {
    const auto p = gen_cantor_midpoints(static_cast<int>(state.range(0)));
    const double delta = std::pow(3.0, -static_cast<double>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(grid_count(p, delta).count);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}
BENCHMARK(BM_GridCountCantor)->Arg(10)->Arg(14)->Arg(16);

static void BM_GridCount2d(benchmark::State& state) {
    const auto p = gen_uniform_grid(state.range(0), 2);
    for (auto _ : state) benchmark::DoNotOptimize(grid_count(p, 0.013).count);
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(p.size()));
}
BENCHMARK(BM_GridCount2d)->Arg(100)->Arg(400);

static void BM_LineLocalCount(benchmark::State& state) {
    const auto p = gen_example_E(static_cast<int>(state.range(0)));
    const LineIndex index(p);
    const int n = static_cast<int>(state.range(0)) / 2;
    const double d = example_delta(n);
    for (auto _ : state) benchmark::DoNotOptimize(index.local_count(n, n * d, d));
}
BENCHMARK(BM_LineLocalCount)->Arg(500)->Arg(2000);

static void BM_CountCellsMany(benchmark::State& state) {
    const auto p = gen_poly_sequence(1.0, state.range(0));
    const LineIndex index(p);
    std::vector<double> centers(index.sorted().begin(), index.sorted().end());
    std::vector<std::size_t> order(centers.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto ranges = index.ball_ranges(centers, order, 0.01);
    for (auto _ : state) benchmark::DoNotOptimize(index.count_cells_many(ranges, 1e-5).size());
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(ranges.size()));
}
BENCHMARK(BM_CountCellsMany)->Arg(10000)->Arg(100000);

static void BM_CoverCurve(benchmark::State& state) {
    const auto p = gen_poly_sequence(1.0, state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(default_cover_curve(p).entries.size());
}
BENCHMARK(BM_CoverCurve)->Arg(10000)->Arg(100000);

static void BM_SpectrumPoint(benchmark::State& state) {
    const auto p = gen_Ek(2, static_cast<int>(state.range(0)));
    const SpectrumConfig cfg;
    const auto radii = radius_schedule(0.5, resolution_floor(p, cfg), extent(p), cfg, true);
    const auto centers = select_centers(p, cfg);
    for (auto _ : state) benchmark::DoNotOptimize(assouad_spectrum_point(p, 0.5, radii, centers, cfg).raw);
}
BENCHMARK(BM_SpectrumPoint)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);

static void BM_ComputeSpectrumCantor(benchmark::State& state) {
    const auto p = gen_cantor_midpoints(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_spectrum(p).points.size());
}
BENCHMARK(BM_ComputeSpectrumCantor)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
