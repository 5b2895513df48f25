#include "shp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <unordered_map>

namespace shp {

AdjacencyGraph::AdjacencyGraph(std::vector<Block> blocks,
                               const std::vector<std::pair<int, int>>& edges)
    : blocks_(std::move(blocks)) {
    const int n = num_blocks();
    for (int i = 0; i < n; ++i) {
        if (blocks_[i].id != i) throw ValidationError("block ids must be dense 0..n-1");
        if (blocks_[i].population < 0) throw ValidationError("negative population at block " + std::to_string(i));
        if (blocks_[i].area < 0) throw ValidationError("negative area at block " + std::to_string(i));
        total_population_ += blocks_[i].population;
    }
    adj_.resize(n);
    for (auto [a, b] : edges) {
        if (a == b) throw ValidationError("self-loop at block " + std::to_string(a));
        if (a < 0 || b < 0 || a >= n || b >= n) throw ValidationError("edge endpoint out of range");
        if (!has_edge(a, b)) add_edge(a, b, false);
    }
}

bool AdjacencyGraph::has_edge(int a, int b) const {
    const auto& nb = adj_[a];
    return std::find(nb.begin(), nb.end(), b) != nb.end();
}

void AdjacencyGraph::add_edge(int a, int b, bool synthetic) {
    if (a > b) std::swap(a, b);
    edges_.push_back({a, b, synthetic});
    adj_[a].push_back(b);
    adj_[b].push_back(a);
}

double AdjacencyGraph::distance(int i, int j) const {
    const double dx = blocks_[i].x - blocks_[j].x;
    const double dy = blocks_[i].y - blocks_[j].y;
    return std::sqrt(dx * dx + dy * dy);
}

ProblemSpec ProblemSpec::make(const AdjacencyGraph& g, int k, double epsilon_p) {
    if (k < 2) throw ValidationError("k must be >= 2");
    if (!(epsilon_p > 0.0 && epsilon_p < 0.5)) throw ValidationError("epsilon_p must be in (0, 0.5)");
    ProblemSpec s;
    s.k = k;
    s.epsilon_p = epsilon_p;
    s.ideal_population = static_cast<double>(g.total_population()) / k;
    return s;
}

std::vector<std::vector<int>> components(const AdjacencyGraph& graph) {
    const int n = graph.num_blocks();
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        const int c = static_cast<int>(out.size());
        out.emplace_back();
        std::queue<int> q;
        q.push(s);
        comp[s] = c;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            out[c].push_back(u);
            for (int v : graph.neighbors(u)) {
                if (comp[v] < 0) {
                    comp[v] = c;
                    q.push(v);
                }
            }
        }
    }
    return out;
}

AdjacencyGraph connect_components(const AdjacencyGraph& graph) {
    if (graph.num_blocks() == 0) throw ValidationError("empty graph");
    AdjacencyGraph g = graph;
    auto comps = components(g);
    while (comps.size() > 1) {
        // closest pair of components by min pairwise centroid distance
        double best = std::numeric_limits<double>::infinity();
        int best_a = -1, best_b = -1;
        for (std::size_t ci = 0; ci + 1 < comps.size(); ++ci) {
            for (std::size_t cj = ci + 1; cj < comps.size(); ++cj) {
                for (int a : comps[ci]) {
                    for (int b : comps[cj]) {
                        double d = g.distance(a, b);
                        if (d < best) {
                            best = d;
                            best_a = a;
                            best_b = b;
                        }
                    }
                }
            }
        }
        g.add_edge(best_a, best_b, true);
        comps = components(g);
    }
    return g;
}

std::vector<double> shortest_path_distances(const AdjacencyGraph& graph,
                                            const std::vector<int>& region, int source) {
    const int m = static_cast<int>(region.size());
    std::unordered_map<int, int> pos;
    pos.reserve(region.size());
    for (int i = 0; i < m; ++i) pos[region[i]] = i;
    auto it = pos.find(source);
    if (it == pos.end()) throw ValidationError("source block not in region");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(m, kInf);
    dist[it->second] = 0.0;
    using Item = std::pair<double, int>;  // (distance, region index)
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    pq.push({0.0, it->second});
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[u]) continue;
        for (int vb : graph.neighbors(region[u])) {
            auto jt = pos.find(vb);
            if (jt == pos.end()) continue;
            const int v = jt->second;
            const double nd = d + graph.distance(region[u], vb);
            if (nd < dist[v]) {
                dist[v] = nd;
                pq.push({nd, v});
            }
        }
    }
    return dist;
}

bool is_contiguous(const AdjacencyGraph& graph, const std::vector<int>& region) {
    if (region.empty()) throw ValidationError("empty region");
    std::unordered_map<int, int> pos;
    pos.reserve(region.size());
    for (std::size_t i = 0; i < region.size(); ++i) pos[region[i]] = static_cast<int>(i);
    std::vector<bool> seen(region.size(), false);
    std::queue<int> q;
    q.push(0);
    seen[0] = true;
    std::size_t visited = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int vb : graph.neighbors(region[u])) {
            auto jt = pos.find(vb);
            if (jt == pos.end() || seen[jt->second]) continue;
            seen[jt->second] = true;
            ++visited;
            q.push(jt->second);
        }
    }
    return visited == region.size();
}

}  // namespace shp
