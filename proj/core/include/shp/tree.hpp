#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "shp/bitset.hpp"
#include "shp/centers.hpp"
#include "shp/graph.hpp"
#include "shp/solver.hpp"

namespace shp {

// Raised when not a single root partition can be sampled feasibly.
struct InfeasibleRootError : ValidationError {
    using ValidationError::ValidationError;
};

enum class NodeStatus { Open, Complete, Failed, Dead };

struct TreeNode {
    int id = 0;
    int parent = -1;          // -1 for the root
    int parent_sample = -1;   // index of the parent sample containing this node
    int root_partition = -1;  // root sample this node descends from (-1 for root)
    int capacity = 1;
    std::vector<int> region;  // sorted block ids
    NodeStatus status = NodeStatus::Open;
    std::vector<std::vector<int>> samples;  // per sampled partition: child node ids
    int attempts = 0;
    int successes = 0;

    bool is_leaf() const { return capacity == 1; }
};

struct TreeConfig {
    int k = 4;
    double epsilon_p = 0.01;
    int w_root = 20;
    int w = 3;
    int max_samples = 0;  // attempt cap per node; 0 means 5x the target width
    std::map<int, int> width_by_capacity;  // optional per-capacity width override
    CenterConfig centers;
    std::uint64_t seed = 0;
    SolveLimits solver;
    int parallelism = 1;

    int width_for(int capacity, bool is_root) const {
        auto it = width_by_capacity.find(capacity);
        if (it != width_by_capacity.end()) return it->second;
        return is_root ? w_root : w;
    }
    int attempt_cap(int target_width) const {
        return max_samples > 0 ? max_samples : 5 * target_width;
    }
};

// One row per partition problem handed to the solver.
struct PartitionProblemStat {
    int node = -1;
    int capacity = 0;
    int z = 0;
    int attempt = 0;
    bool feasible = false;
    double wall_ms = 0.0;
};

struct SampleTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    TreeConfig config;
    double ideal_population = 0.0;
    int num_blocks = 0;

    long attempts = 0;
    long successes = 0;  // partition problems solved to optimality
    long infeasible = 0;
    std::vector<PartitionProblemStat> problem_stats;

    const TreeNode& root() const { return nodes[0]; }
    int alive_leaves() const;
    int distinct_leaves() const;
};

// Exact plan count that may exceed 64 bits.
struct BigCount {
    std::string decimal = "0";
    double log10_value = 0.0;
    bool fits_u64 = false;
    std::uint64_t u64 = 0;

    bool operator==(const BigCount& o) const { return decimal == o.decimal; }
};

// Queue-driven tree generation. Root partitions are expanded by independent
// shards (config.parallelism workers); results are merged in root-partition
// order so output is identical at any worker count. Throws ValidationError
// if no feasible root partition is found.
SampleTree generate_tree(const AdjacencyGraph& graph, const ProblemSpec& spec,
                         const TreeConfig& config);

// P(R, s): 1 for leaves, else sum over samples of the product over children.
BigCount count_plans(const SampleTree& tree, int node = 0);

// log10(#plans / #distinct leaf regions)
double leverage(const SampleTree& tree);

// Depth-first product over samples and children; visit returns false to stop.
// Throws if the exact count exceeds `limit` (prune first).
using PlanVisitor = std::function<bool(const std::vector<int>& leaf_node_ids)>;
std::uint64_t enumerate_plans(const SampleTree& tree, std::uint64_t limit,
                              const PlanVisitor& visit);
// Same restricted to one root partition.
std::uint64_t enumerate_root_partition(const SampleTree& tree, int root_sample,
                                       std::uint64_t limit, const PlanVisitor& visit);

struct DistrictColumn {
    int id = -1;
    BlockSet blocks;
    std::vector<int> block_ids;
    int root_partition = -1;
    std::int64_t population = 0;
    double cost = 0.0;  // c_j
    // cached metrics
    int boundary_edges = 0;  // edges leaving the district in the full graph
    double centralization_km = 0.0;
    double win_probability = 0.5;
};

struct ColumnSet {
    std::vector<DistrictColumn> columns;
    std::vector<int> leaf_to_column;  // node id -> column id (-1 for non-leaves)
    int total_leaves = 0;
    double duplicate_rate = 0.0;  // merged duplicates / leaves (within root partitions)
};

// Leaves hashed by block bitset; duplicates merged within a root partition
// but kept separate across root partitions.
ColumnSet collect_columns(const SampleTree& tree, const AdjacencyGraph& graph);

// Appendix-style subsampling: drop last samples of internal nodes in
// ascending capacity order (never below one) until the count reaches the
// target or the floor.
SampleTree prune_tree(const SampleTree& tree, std::uint64_t target_size);

// Drops dead nodes and renumbers; statuses and structure preserved.
SampleTree compact_tree(const SampleTree& tree);

// Tree store round trip (JSON).
void save_tree(const SampleTree& tree, const std::string& path);
SampleTree load_tree(const std::string& path);

// Column store: raw bitset file plus CSV sidecar with per-column metrics.
void save_columns(const ColumnSet& cols, int num_blocks, const std::string& bin_path,
                  const std::string& csv_path);
ColumnSet load_columns(const std::string& bin_path, const std::string& csv_path);

}  // namespace shp
