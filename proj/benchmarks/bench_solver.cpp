#include <benchmark/benchmark.h>

#include "shp/rng.hpp"
#include "shp/solver.hpp"

namespace {

shp::BinaryLinearProgram random_program(int n, int m, std::uint64_t seed) {
    shp::Rng rng(seed);
    shp::BinaryLinearProgram p;
    for (int j = 0; j < n; ++j) p.add_binary(rng.uniform(-10, 10));
    for (int r = 0; r < m; ++r) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j)
            if (rng.uniform() < 0.3) row.emplace_back(j, std::round(rng.uniform(-5, 5)));
        if (row.empty()) row.emplace_back(0, 1.0);
        p.add_row(std::move(row), r % 2 ? shp::Relation::LE : shp::Relation::GE,
                  std::round(rng.uniform(-2, 6)));
    }
    return p;
}

void BM_solve_exact(benchmark::State& state) {
    const auto p = random_program(static_cast<int>(state.range(0)),
                                  static_cast<int>(state.range(0)) / 2, 7);
    for (auto _ : state) {
        auto out = shp::solve_exact(p);
        benchmark::DoNotOptimize(out.objective);
    }
}
BENCHMARK(BM_solve_exact)->Arg(16)->Arg(32)->Arg(64);

}  // namespace
