#include "shp/recom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "shp/bitset.hpp"

namespace shp {

bool plan_feasible(const AdjacencyGraph& graph, const ProblemSpec& spec,
                   const std::vector<std::vector<int>>& plan) {
    std::vector<int> cover(graph.num_blocks(), 0);
    for (const auto& d : plan) {
        if (d.empty()) return false;
        double pop = 0.0;
        for (int b : d) {
            if (b < 0 || b >= graph.num_blocks()) return false;
            ++cover[b];
            pop += static_cast<double>(graph.block(b).population);
        }
        const double slack = 1e-9 * spec.ideal_population;
        if (pop < spec.ideal_population * (1.0 - spec.epsilon_p) - slack ||
            pop > spec.ideal_population * (1.0 + spec.epsilon_p) + slack)
            return false;
        if (!is_contiguous(graph, d)) return false;
    }
    for (int c : cover)
        if (c != 1) return false;
    return true;
}

namespace {

// Wilson's algorithm: uniform spanning tree of the induced subgraph,
// returned as a parent map rooted at region[0].
std::unordered_map<int, int> wilson_tree(const AdjacencyGraph& graph,
                                         const std::vector<int>& region, Rng& rng) {
    std::unordered_set<int> in_region(region.begin(), region.end());
    std::unordered_map<int, int> parent;
    std::unordered_set<int> in_tree;
    in_tree.insert(region[0]);
    parent[region[0]] = -1;

    for (int start : region) {
        if (in_tree.count(start)) continue;
        // loop-erased random walk to the tree
        std::unordered_map<int, int> next;
        int u = start;
        while (!in_tree.count(u)) {
            std::vector<int> nbrs;
            for (int v : graph.neighbors(u))
                if (in_region.count(v)) nbrs.push_back(v);
            const int v = nbrs[rng.uniform_int(0, static_cast<int>(nbrs.size()) - 1)];
            next[u] = v;  // overwriting erases loops
            u = v;
        }
        u = start;
        while (!in_tree.count(u)) {
            in_tree.insert(u);
            parent[u] = next[u];
            u = next[u];
        }
    }
    return parent;
}

}  // namespace

ChainState recom_step(const AdjacencyGraph& graph, const ChainState& state,
                      const ProblemSpec& spec, Rng& rng, int tree_retries) {
    ChainState out = state;
    const int k = static_cast<int>(state.plan.size());
    if (k < 2) throw ValidationError("recom needs k >= 2");

    std::vector<int> district_of(graph.num_blocks(), -1);
    for (int d = 0; d < k; ++d)
        for (int b : state.plan[d]) district_of[b] = d;

    // adjacent district pairs
    std::vector<std::pair<int, int>> pairs;
    {
        std::unordered_set<std::uint64_t> seen;
        for (const auto& e : graph.edges()) {
            const int da = district_of[e.a], db = district_of[e.b];
            if (da == db || da < 0 || db < 0) continue;
            const int lo = std::min(da, db), hi = std::max(da, db);
            const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | static_cast<std::uint32_t>(hi);
            if (seen.insert(key).second) pairs.emplace_back(lo, hi);
        }
    }
    if (pairs.empty()) throw ValidationError("no adjacent district pair");
    std::sort(pairs.begin(), pairs.end());

    for (int pair_try = 0; pair_try < 1000; ++pair_try) {
        const auto [da, db] = pairs[rng.uniform_int(0, static_cast<int>(pairs.size()) - 1)];
        std::vector<int> merged(state.plan[da]);
        merged.insert(merged.end(), state.plan[db].begin(), state.plan[db].end());
        std::sort(merged.begin(), merged.end());

        for (int t = 0; t < tree_retries; ++t) {
            auto parent = wilson_tree(graph, merged, rng);

            // subtree populations via reverse topological accumulation
            std::unordered_map<int, double> subtree_pop;
            std::unordered_map<int, int> depth;
            std::function<int(int)> depth_of = [&](int v) -> int {
                auto it = depth.find(v);
                if (it != depth.end()) return it->second;
                const int d = parent[v] < 0 ? 0 : depth_of(parent[v]) + 1;
                depth[v] = d;
                return d;
            };
            std::vector<int> order(merged);
            for (int b : merged) depth_of(b);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                if (depth[a] != depth[b]) return depth[a] > depth[b];
                return a < b;
            });
            for (int b : merged) subtree_pop[b] = static_cast<double>(graph.block(b).population);
            for (int b : order)
                if (parent[b] >= 0) subtree_pop[parent[b]] += subtree_pop[b];

            double total = 0.0;
            for (int b : merged) total += static_cast<double>(graph.block(b).population);

            const double lo_bound = spec.ideal_population * (1.0 - spec.epsilon_p);
            const double hi_bound = spec.ideal_population * (1.0 + spec.epsilon_p);
            std::vector<int> cuts;  // cut above node v (edge v -> parent[v])
            for (int b : merged) {
                if (parent[b] < 0) continue;
                const double side = subtree_pop[b];
                const double rest = total - side;
                if (side >= lo_bound && side <= hi_bound && rest >= lo_bound && rest <= hi_bound)
                    cuts.push_back(b);
            }
            if (cuts.empty()) {
                ++out.rejected_trees;
                continue;
            }
            std::sort(cuts.begin(), cuts.end());
            const int cut = cuts[rng.uniform_int(0, static_cast<int>(cuts.size()) - 1)];

            std::vector<int> side_a;  // subtree under `cut`
            {
                // collect descendants of cut
                std::unordered_map<int, std::vector<int>> children;
                for (int b : merged)
                    if (parent[b] >= 0) children[parent[b]].push_back(b);
                std::vector<int> stack{cut};
                std::unordered_set<int> in_a;
                while (!stack.empty()) {
                    const int v = stack.back();
                    stack.pop_back();
                    in_a.insert(v);
                    for (int c : children[v]) stack.push_back(c);
                }
                for (int b : merged)
                    if (in_a.count(b)) side_a.push_back(b);
            }
            std::vector<int> side_b;
            {
                std::unordered_set<int> in_a(side_a.begin(), side_a.end());
                for (int b : merged)
                    if (!in_a.count(b)) side_b.push_back(b);
            }
            out.plan[da] = std::move(side_a);
            out.plan[db] = std::move(side_b);
            ++out.steps;
            ++out.accepted;
            return out;
        }
        ++out.resampled_pairs;
    }
    throw ValidationError("recom step failed to find a balanced cut");
}

ChainRun run_chain(const AdjacencyGraph& graph, const std::vector<std::vector<int>>& initial_plan,
                   long steps, const ProblemSpec& spec, std::uint64_t seed) {
    if (!plan_feasible(graph, spec, initial_plan))
        throw ValidationError("infeasible initial plan for recom chain");

    ChainRun run;
    ChainState state;
    state.plan = initial_plan;
    for (auto& d : state.plan) std::sort(d.begin(), d.end());
    run.plans.push_back(state.plan);

    std::unordered_map<std::uint64_t, std::vector<BlockSet>> distinct;
    int distinct_count = 0;
    auto note_district = [&](const std::vector<int>& d) {
        auto bs = BlockSet::from_ids(graph.num_blocks(), d);
        auto& bucket = distinct[bs.hash()];
        for (const auto& other : bucket)
            if (other == bs) return;
        bucket.push_back(std::move(bs));
        ++distinct_count;
    };
    for (const auto& d : state.plan) note_district(d);

    Rng rng(hash_combine(seed, 0x5ec0511fULL));
    for (long s = 0; s < steps; ++s) {
        state = recom_step(graph, state, spec, rng);
        run.plans.push_back(state.plan);
        for (const auto& d : state.plan) note_district(d);
    }
    run.final_state = state;
    run.distinct_districts = distinct_count;
    run.leverage = std::log10(static_cast<double>(run.plans.size()) /
                              static_cast<double>(std::max(1, distinct_count)));
    return run;
}

std::vector<std::vector<int>> stripe_plan(const AdjacencyGraph& graph, int k, int width,
                                          int height) {
    // consecutive row-major ranges, sizes equal up to one block; contiguous in
    // rook adjacency whenever each range spans at least one full row
    const int n = width * height;
    (void)graph;
    std::vector<std::vector<int>> plan(k);
    int at = 0;
    for (int d = 0; d < k; ++d) {
        const int take = n / k + (d < n % k ? 1 : 0);
        for (int i = 0; i < take; ++i) plan[d].push_back(at++);
    }
    return plan;
}

}  // namespace shp
