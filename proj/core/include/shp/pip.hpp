#pragma once

#include <vector>

#include "shp/centers.hpp"
#include "shp/graph.hpp"
#include "shp/solver.hpp"

namespace shp {

// Population tolerance tightened toward the root: epsilon_p / ceil(log2 s).
double epsilon_schedule(double epsilon_p, int s);

// S_ij for one center: per region position j, the region positions of
// neighbors of j strictly closer to the center (shortest-path distance).
// The center's own entry is unused.
std::vector<std::vector<int>> build_pred_sets(const AdjacencyGraph& graph,
                                              const std::vector<int>& region, int center);

struct PartitionInstance {
    std::vector<int> region;   // sorted block ids
    CenterSet centers;
    double alpha = 1.0;        // dispersion cost exponent in [1, 2]
    double epsilon = 0.01;     // effective tolerance for this node
    double ideal_population = 0.0;
    std::vector<double> populations;  // region order
    // per center: shortest-path distance to every region block (region order)
    std::vector<std::vector<double>> distances;
    // per center: S_ij per region position
    std::vector<std::vector<std::vector<int>>> pred_sets;
};

PartitionInstance make_partition_instance(const AdjacencyGraph& graph,
                                          const std::vector<int>& region,
                                          const CenterSet& centers, double alpha,
                                          double epsilon, double ideal_population);

// Variables x[c*n + j]; rows: n assignment equalities, 2z population bounds
// at p_hat*(s_i +- epsilon), nz - z contiguity rows; center self-assignments
// fixed to 1 via bounds.
BinaryLinearProgram build_pip(const PartitionInstance& instance);

enum class PartitionStatus { Optimal, Infeasible, Limit };

struct PartitionResult {
    PartitionStatus status = PartitionStatus::Infeasible;
    std::vector<std::vector<int>> subregions;  // per center, sorted block ids
    double objective = 0.0;
    SolveOutcome solve;
};

PartitionResult solve_partition(const AdjacencyGraph& graph, const std::vector<int>& region,
                                const CenterSet& centers, double alpha, double epsilon,
                                double ideal_population, const SolveLimits& limits = {});

}  // namespace shp
