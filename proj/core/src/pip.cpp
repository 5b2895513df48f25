#include "shp/pip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace shp {

double epsilon_schedule(double epsilon_p, int s) {
    if (s < 2) throw ValidationError("epsilon schedule undefined for s < 2 (leaves never split)");
    int ceil_log2 = 0;
    int v = 1;
    while (v < s) {
        v <<= 1;
        ++ceil_log2;
    }
    return epsilon_p / static_cast<double>(std::max(1, ceil_log2));
}

std::vector<std::vector<int>> build_pred_sets(const AdjacencyGraph& graph,
                                              const std::vector<int>& region, int center) {
    const int n = static_cast<int>(region.size());
    const auto dist = shortest_path_distances(graph, region, center);
    for (double d : dist)
        if (!std::isfinite(d))
            throw ValidationError("region is not connected from the chosen center");

    std::unordered_map<int, int> pos;
    pos.reserve(region.size());
    for (int i = 0; i < n; ++i) pos[region[i]] = i;

    std::vector<std::vector<int>> sets(n);
    for (int j = 0; j < n; ++j) {
        if (region[j] == center) continue;
        for (int nb : graph.neighbors(region[j])) {
            auto it = pos.find(nb);
            if (it == pos.end()) continue;
            if (dist[it->second] < dist[j]) sets[j].push_back(it->second);
        }
        std::sort(sets[j].begin(), sets[j].end());
    }
    return sets;
}

PartitionInstance make_partition_instance(const AdjacencyGraph& graph,
                                          const std::vector<int>& region,
                                          const CenterSet& centers, double alpha,
                                          double epsilon, double ideal_population) {
    PartitionInstance inst;
    inst.region = region;
    std::sort(inst.region.begin(), inst.region.end());
    inst.centers = centers;
    inst.alpha = alpha;
    inst.epsilon = epsilon;
    inst.ideal_population = ideal_population;
    for (int b : inst.region) inst.populations.push_back(static_cast<double>(graph.block(b).population));
    for (int c : centers.blocks) {
        inst.distances.push_back(shortest_path_distances(graph, inst.region, c));
        inst.pred_sets.push_back(build_pred_sets(graph, inst.region, c));
    }
    return inst;
}

BinaryLinearProgram build_pip(const PartitionInstance& inst) {
    const int n = static_cast<int>(inst.region.size());
    const int z = inst.centers.size();
    BinaryLinearProgram p;

    auto var = [&](int c, int j) { return c * n + j; };
    for (int c = 0; c < z; ++c)
        for (int j = 0; j < n; ++j)
            p.add_binary(std::pow(inst.distances[c][j], inst.alpha) * inst.populations[j]);

    // center self-assignment fixed on
    std::vector<int> center_pos(z);
    for (int c = 0; c < z; ++c) {
        const auto it = std::lower_bound(inst.region.begin(), inst.region.end(),
                                         inst.centers.blocks[c]);
        center_pos[c] = static_cast<int>(it - inst.region.begin());
        p.fix_binary(var(c, center_pos[c]), 1);
    }

    // each block to exactly one subregion
    for (int j = 0; j < n; ++j) {
        std::vector<std::pair<int, double>> row;
        for (int c = 0; c < z; ++c) row.emplace_back(var(c, j), 1.0);
        p.add_row(std::move(row), Relation::EQ, 1.0);
    }
    // population bounds: p_hat * (s_i +- epsilon), absolute tolerance
    for (int c = 0; c < z; ++c) {
        std::vector<std::pair<int, double>> row;
        for (int j = 0; j < n; ++j)
            row.emplace_back(var(c, j), inst.populations[j]);
        auto upper = row;
        p.add_row(std::move(upper), Relation::LE,
                  inst.ideal_population * (inst.centers.capacities[c] + inst.epsilon));
        p.add_row(std::move(row), Relation::GE,
                  inst.ideal_population * (inst.centers.capacities[c] - inst.epsilon));
    }
    // contiguity: a block joins a center only behind a strictly closer neighbor
    for (int c = 0; c < z; ++c) {
        for (int j = 0; j < n; ++j) {
            if (j == center_pos[c]) continue;
            std::vector<std::pair<int, double>> row;
            for (int k : inst.pred_sets[c][j]) row.emplace_back(var(c, k), 1.0);
            row.emplace_back(var(c, j), -1.0);
            p.add_row(std::move(row), Relation::GE, 0.0);
        }
    }
    return p;
}

PartitionResult solve_partition(const AdjacencyGraph& graph, const std::vector<int>& region,
                                const CenterSet& centers, double alpha, double epsilon,
                                double ideal_population, const SolveLimits& limits) {
    auto inst = make_partition_instance(graph, region, centers, alpha, epsilon, ideal_population);
    auto program = build_pip(inst);
    PartitionResult result;
    result.solve = solve_exact(program, limits);
    if (result.solve.status == SolveStatus::Limit) {
        result.status = PartitionStatus::Limit;
        return result;
    }
    if (result.solve.status == SolveStatus::Infeasible) {
        result.status = PartitionStatus::Infeasible;
        return result;
    }

    const int n = static_cast<int>(inst.region.size());
    const int z = centers.size();
    result.subregions.assign(z, {});
    for (int c = 0; c < z; ++c)
        for (int j = 0; j < n; ++j)
            if (result.solve.x[c * n + j] > 0.5) result.subregions[c].push_back(inst.region[j]);

    // post-hoc verification of contiguity and balance
    for (int c = 0; c < z; ++c) {
        if (result.subregions[c].empty() || !is_contiguous(graph, result.subregions[c])) {
            result.status = PartitionStatus::Infeasible;
            return result;
        }
        double pop = 0.0;
        for (int b : result.subregions[c]) pop += static_cast<double>(graph.block(b).population);
        const double lo = ideal_population * (centers.capacities[c] - epsilon);
        const double hi = ideal_population * (centers.capacities[c] + epsilon);
        const double slack = 1e-9 * ideal_population;
        if (pop < lo - slack || pop > hi + slack) {
            result.status = PartitionStatus::Infeasible;
            return result;
        }
    }
    result.objective = result.solve.objective;
    result.status = PartitionStatus::Optimal;
    return result;
}

}  // namespace shp
