#include "shp/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <unordered_map>

namespace shp {

namespace {

bool sample_alive(const std::vector<TreeNode>& nodes, const std::vector<int>& sample) {
    return !sample.empty() && nodes[sample[0]].status != NodeStatus::Dead;
}

}  // namespace

DpResult tree_dp(const SampleTree& tree, const LinearPlanObjective& objective) {
    if (tree.nodes.empty()) throw ValidationError("empty tree");
    const bool maximize = objective.sense == Sense::Max;

    struct Entry {
        double value;
        int best_sample;
    };
    std::unordered_map<int, Entry> memo;

    std::function<double(int)> value = [&](int id) -> double {
        const TreeNode& n = tree.nodes[id];
        if (n.status == NodeStatus::Open || n.status == NodeStatus::Failed)
            throw ValidationError("tree_dp requires a complete tree");
        if (n.is_leaf()) {
            if (id >= static_cast<int>(objective.leaf_cost.size()))
                throw ValidationError("leaf cost missing for node " + std::to_string(id));
            return objective.leaf_cost[id];
        }
        auto it = memo.find(id);
        if (it != memo.end()) return it->second.value;
        double best = maximize ? -std::numeric_limits<double>::infinity()
                               : std::numeric_limits<double>::infinity();
        int best_sample = -1;
        for (std::size_t si = 0; si < n.samples.size(); ++si) {
            if (!sample_alive(tree.nodes, n.samples[si])) continue;
            double sum = 0.0;
            for (int child : n.samples[si]) sum += value(child);
            const bool better = maximize ? sum > best : sum < best;
            if (better) {  // strict: ties keep the first sample in generation order
                best = sum;
                best_sample = static_cast<int>(si);
            }
        }
        if (best_sample < 0) throw ValidationError("node has no alive samples");
        memo[id] = {best, best_sample};
        return best;
    };

    DpResult res;
    res.value = value(0);
    std::function<void(int)> reconstruct = [&](int id) {
        const TreeNode& n = tree.nodes[id];
        if (n.is_leaf()) {
            res.plan.push_back(id);
            return;
        }
        const int si = memo.at(id).best_sample;
        for (int child : n.samples[si]) reconstruct(child);
    };
    reconstruct(0);
    return res;
}

BinaryLinearProgram build_msp(const MspInstance& inst) {
    const int nc = static_cast<int>(inst.columns.size());
    BinaryLinearProgram base;
    for (int j = 0; j < nc; ++j) base.add_binary(0.0);

    // exact cover: every block in exactly one chosen column
    std::vector<std::vector<std::pair<int, double>>> block_rows(inst.num_blocks);
    for (int j = 0; j < nc; ++j)
        for (int b : inst.columns[j]->block_ids) block_rows[b].emplace_back(j, 1.0);
    for (int b = 0; b < inst.num_blocks; ++b)
        base.add_row(std::move(block_rows[b]), Relation::EQ, 1.0);

    // exactly k districts
    std::vector<std::pair<int, double>> card;
    for (int j = 0; j < nc; ++j) card.emplace_back(j, 1.0);
    base.add_row(std::move(card), Relation::EQ, static_cast<double>(inst.k));

    for (const auto& row : inst.extra) base.add_row(row.terms, row.rel, row.rhs);

    std::vector<std::pair<int, double>> cost_row;
    for (int j = 0; j < nc; ++j) cost_row.emplace_back(j, inst.costs[j]);
    return linearize_abs(base, cost_row);
}

std::vector<MspOutcome> solve_all_msps(const SampleTree& tree, const ColumnSet& columns,
                                       const std::vector<double>& column_costs,
                                       const std::vector<double>& column_win_probs,
                                       const SolveLimits& limits, int parallelism) {
    const auto& root_samples = tree.nodes[0].samples;
    const int num_roots = static_cast<int>(root_samples.size());
    std::vector<MspOutcome> out(num_roots);

    // columns per root partition
    std::vector<std::vector<int>> cols_of_root(num_roots);
    for (const auto& c : columns.columns)
        if (c.root_partition >= 0 && c.root_partition < num_roots)
            cols_of_root[c.root_partition].push_back(c.id);

    auto solve_one = [&](int r) {
        MspOutcome& o = out[r];
        o.root_partition = r;
        if (!sample_alive(tree.nodes, root_samples[r])) {
            o.skipped_trivial = true;
            return;
        }
        if (static_cast<int>(root_samples[r].size()) == tree.config.k) {
            o.skipped_trivial = true;  // height-1 subtree: a single plan
            return;
        }
        MspInstance inst;
        inst.k = tree.config.k;
        inst.num_blocks = tree.num_blocks;
        for (int cid : cols_of_root[r]) {
            inst.columns.push_back(&columns.columns[cid]);
            inst.costs.push_back(column_costs[cid]);
        }
        try {
            auto program = build_msp(inst);
            auto res = solve_exact(program, limits);
            o.status = res.status;
            o.nodes = res.nodes;
            o.wall_seconds = res.wall_seconds;
            if (res.status == SolveStatus::Optimal) {
                double cost_sum = 0.0;
                for (std::size_t j = 0; j < inst.columns.size(); ++j) {
                    if (res.x[j] > 0.5) {
                        o.plan_columns.push_back(inst.columns[j]->id);
                        cost_sum += inst.costs[j];
                        o.expected_seats += column_win_probs[inst.columns[j]->id];
                    }
                }
                o.objective = std::fabs(cost_sum);
            }
        } catch (const std::exception&) {
            o.status = SolveStatus::Limit;  // isolated failure; run continues
        }
    };

    if (parallelism <= 1) {
        for (int r = 0; r < num_roots; ++r) solve_one(r);
    } else {
        std::atomic<int> next{0};
        auto work = [&] {
            while (true) {
                const int r = next.fetch_add(1);
                if (r >= num_roots) return;
                solve_one(r);
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < parallelism; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return out;
}

std::vector<int> BlockDistrictMatrix::row_counts() const {
    std::vector<int> counts(rows, 0);
    for (const auto& col : col_blocks)
        for (int b : col) ++counts[b];
    return counts;
}

BlockDistrictMatrix block_district_matrix(const ColumnSet& columns, int num_blocks) {
    BlockDistrictMatrix A;
    A.rows = num_blocks;
    A.cols = static_cast<int>(columns.columns.size());
    A.col_blocks.reserve(columns.columns.size());
    for (const auto& c : columns.columns) A.col_blocks.push_back(c.block_ids);
    return A;
}

}  // namespace shp
