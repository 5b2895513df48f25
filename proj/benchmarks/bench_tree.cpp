#include <benchmark/benchmark.h>

#include "shp/instance.hpp"
#include "shp/tree.hpp"

namespace {

void BM_generate_tree(benchmark::State& state) {
    auto inst = shp::synthetic_state(8, 8, 1, 3);
    auto spec = shp::ProblemSpec::make(inst.graph, 4, 0.05);
    shp::TreeConfig cfg;
    cfg.w_root = static_cast<int>(state.range(0));
    cfg.w = 2;
    cfg.seed = 5;
    for (auto _ : state) {
        auto tree = shp::generate_tree(inst.graph, spec, cfg);
        benchmark::DoNotOptimize(tree.successes);
    }
}
BENCHMARK(BM_generate_tree)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_count_plans(benchmark::State& state) {
    auto inst = shp::synthetic_state(8, 8, 1, 3);
    auto spec = shp::ProblemSpec::make(inst.graph, 4, 0.05);
    shp::TreeConfig cfg;
    cfg.w_root = 4;
    cfg.w = 3;
    cfg.seed = 5;
    auto tree = shp::generate_tree(inst.graph, spec, cfg);
    for (auto _ : state) {
        auto c = shp::count_plans(tree);
        benchmark::DoNotOptimize(c.decimal.size());
    }
}
BENCHMARK(BM_count_plans);

}  // namespace
