#include <benchmark/benchmark.h>

#include <numeric>

#include "shp/instance.hpp"
#include "shp/pip.hpp"

namespace {

void BM_solve_partition(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    auto inst = shp::synthetic_state(side, side, 1, 3);
    std::vector<int> region(inst.graph.num_blocks());
    std::iota(region.begin(), region.end(), 0);
    const double p_hat = static_cast<double>(inst.graph.total_population()) / 2.0;
    shp::CenterSet cs{{0, inst.graph.num_blocks() - 1}, {1, 1}};
    for (auto _ : state) {
        auto res = shp::solve_partition(inst.graph, region, cs, 1.0, 0.05, p_hat);
        benchmark::DoNotOptimize(res.objective);
    }
}
BENCHMARK(BM_solve_partition)->Arg(6)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_shortest_paths(benchmark::State& state) {
    const int side = static_cast<int>(state.range(0));
    auto inst = shp::synthetic_state(side, side, 1, 3);
    std::vector<int> region(inst.graph.num_blocks());
    std::iota(region.begin(), region.end(), 0);
    for (auto _ : state) {
        auto d = shp::shortest_path_distances(inst.graph, region, 0);
        benchmark::DoNotOptimize(d.back());
    }
}
BENCHMARK(BM_shortest_paths)->Arg(12)->Arg(24)->Unit(benchmark::kMicrosecond);

}  // namespace
