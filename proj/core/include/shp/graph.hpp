#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace shp {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Block {
    int id = 0;
    std::int64_t population = 0;
    double x = 0.0;  // planar centroid, km
    double y = 0.0;
    double area = 0.0;  // km^2
};

struct Edge {
    int a = 0;
    int b = 0;  // a < b
    bool synthetic = false;  // added by component repair
};

// Undirected planar block adjacency graph. Immutable after load/repair;
// shared read access from parallel generation shards is safe.
class AdjacencyGraph {
public:
    AdjacencyGraph() = default;
    AdjacencyGraph(std::vector<Block> blocks, const std::vector<std::pair<int, int>>& edges);

    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    const Block& block(int id) const { return blocks_[id]; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int id) const { return adj_[id]; }
    std::int64_t total_population() const { return total_population_; }

    bool has_edge(int a, int b) const;
    void add_edge(int a, int b, bool synthetic);

    double distance(int i, int j) const;  // Euclidean centroid distance, km

private:
    std::vector<Block> blocks_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
    std::int64_t total_population_ = 0;
};

struct ProblemSpec {
    int k = 2;                // districts
    double epsilon_p = 0.01;  // population tolerance fraction, in (0, 0.5)
    double ideal_population = 0.0;  // total / k

    static ProblemSpec make(const AdjacencyGraph& g, int k, double epsilon_p);
};

// Repairs connectivity: repeatedly joins the two closest components with an
// edge between their centroid-closest block pair. Idempotent; never removes
// edges. Added edges are flagged synthetic.
AdjacencyGraph connect_components(const AdjacencyGraph& graph);

// Connected components as lists of block ids.
std::vector<std::vector<int>> components(const AdjacencyGraph& graph);

// Exact single-source shortest paths on the subgraph induced by `region`,
// edge weight = centroid distance of the endpoints. Result is indexed by the
// position of each block in `region`; unreachable blocks hold +infinity.
std::vector<double> shortest_path_distances(const AdjacencyGraph& graph,
                                            const std::vector<int>& region, int source);

// True iff the induced subgraph is a single connected component.
bool is_contiguous(const AdjacencyGraph& graph, const std::vector<int>& region);

}  // namespace shp
