#pragma once

#include <optional>
#include <vector>

#include "shp/elections.hpp"
#include "shp/solver.hpp"
#include "shp/tree.hpp"

namespace shp {

enum class Sense { Min, Max };

// Linear plan objective: a cost per leaf node (costs for non-leaf ids are
// ignored). Valid whenever the objective is a sum of per-district terms and
// no cross-district constraints are imposed.
struct LinearPlanObjective {
    std::vector<double> leaf_cost;  // indexed by tree node id
    Sense sense = Sense::Min;
};

struct DpResult {
    double value = 0.0;
    std::vector<int> plan;  // leaf node ids
};

// Optimal plan by tree dynamic programming; ties broken by the first sample
// in generation order.
DpResult tree_dp(const SampleTree& tree, const LinearPlanObjective& objective);

struct MspInstance {
    std::vector<const DistrictColumn*> columns;  // one root partition's columns
    std::vector<double> costs;                   // c_j per column
    int k = 0;
    int num_blocks = 0;
    std::vector<LinearConstraint> extra;  // over column indicator variables
};

// Set partitioning: exact cover of blocks, exactly k columns, minimize
// |sum c_j x_j| via the auxiliary-variable linearization.
BinaryLinearProgram build_msp(const MspInstance& instance);

struct MspOutcome {
    int root_partition = -1;
    SolveStatus status = SolveStatus::Infeasible;
    double objective = 0.0;              // |sum c_j| of the chosen plan
    std::vector<int> plan_columns;       // column ids in the instance's column set
    double expected_seats = 0.0;         // sum of win probabilities
    std::int64_t nodes = 0;
    double wall_seconds = 0.0;
    bool skipped_trivial = false;
};

// One MSP per root partition, skipping trivial subtrees whose root split
// already has k leaves. Failures are isolated per root.
std::vector<MspOutcome> solve_all_msps(const SampleTree& tree, const ColumnSet& columns,
                                       const std::vector<double>& column_costs,
                                       const std::vector<double>& column_win_probs,
                                       const SolveLimits& limits, int parallelism = 1);

// Sparse block-district matrix A (a_ij = 1 iff block i in column j).
struct BlockDistrictMatrix {
    int rows = 0;  // blocks
    int cols = 0;  // columns
    std::vector<std::vector<int>> col_blocks;  // per column, sorted block ids

    std::vector<int> row_counts() const;
};

BlockDistrictMatrix block_district_matrix(const ColumnSet& columns, int num_blocks);

}  // namespace shp
