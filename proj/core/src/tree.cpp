#include "shp/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <gmpxx.h>

#include "shp/pip.hpp"

namespace shp {

namespace {

bool sample_alive(const std::vector<TreeNode>& nodes, const std::vector<int>& sample) {
    return !sample.empty() && nodes[sample[0]].status != NodeStatus::Dead;
}

struct AttemptResult {
    bool success = false;
    int z = 0;
    std::vector<std::vector<int>> subregions;
    std::vector<int> capacities;
    double wall_ms = 0.0;
};

AttemptResult try_partition(const AdjacencyGraph& graph, double p_hat, const TreeConfig& cfg,
                            const std::vector<int>& region, int capacity, Rng& rng) {
    AttemptResult out;
    try {
        const int z = sample_split_size(capacity, cfg.centers, rng);
        out.z = z;
        auto sampled = sample_capacities(capacity, z, cfg.centers, rng);
        auto centers = select_centers(graph, region, z, cfg.centers, rng, &sampled, p_hat);
        auto ideal = capacity_weights(graph, region, centers, cfg.centers.weight_kind, p_hat);
        auto caps = assign_capacities(ideal, sampled, cfg.centers.capacity_mode);
        const double alpha = rng.uniform(1.0, 2.0);
        const double eps = epsilon_schedule(cfg.epsilon_p, capacity);
        const CenterSet cs{centers, caps};
        auto res = solve_partition(graph, region, cs, alpha, eps, p_hat, cfg.solver);
        out.wall_ms = res.solve.wall_seconds * 1e3;
        if (res.status != PartitionStatus::Optimal) return out;
        // a child must hold at least as many blocks as districts it will split into
        for (int c = 0; c < cs.size(); ++c)
            if (static_cast<int>(res.subregions[c].size()) < caps[c]) return out;
        out.success = true;
        out.subregions = std::move(res.subregions);
        out.capacities = std::move(caps);
    } catch (const ValidationError&) {
        out.success = false;
    }
    return out;
}

void kill_subtree(std::vector<TreeNode>& nodes, int id) {
    nodes[id].status = NodeStatus::Dead;
    for (const auto& sample : nodes[id].samples)
        for (int child : sample)
            if (nodes[child].status != NodeStatus::Dead) kill_subtree(nodes, child);
}

int alive_sample_count(const std::vector<TreeNode>& nodes, const TreeNode& n) {
    int c = 0;
    for (const auto& s : n.samples)
        if (sample_alive(nodes, s)) ++c;
    return c;
}

// Shard-local expansion state. Node ids are local; parent == -1 marks the
// shard's top nodes (children of one root sample).
struct Shard {
    std::vector<TreeNode> nodes;
    std::vector<std::string> paths;
    long attempts = 0;
    long successes = 0;
    long infeasible = 0;
    std::vector<PartitionProblemStat> stats;
    bool failed = false;
};

// Marks `id` failed and prunes the sample containing it, cascading upward.
// Returns true if the failure escaped past the shard top.
bool propagate_failure(std::vector<TreeNode>& nodes, int id) {
    nodes[id].status = NodeStatus::Failed;
    int cur = id;
    while (true) {
        const int parent = nodes[cur].parent;
        const int sidx = nodes[cur].parent_sample;
        if (parent < 0) return true;  // escaped the local root
        for (int child : nodes[parent].samples[sidx]) kill_subtree(nodes, child);
        if (alive_sample_count(nodes, nodes[parent]) > 0) return false;
        nodes[parent].status = NodeStatus::Failed;
        cur = parent;
    }
}

void expand_shard(const AdjacencyGraph& graph, double p_hat, const TreeConfig& cfg,
                  Shard& shard) {
    std::deque<int> queue;
    for (std::size_t i = 0; i < shard.nodes.size(); ++i) queue.push_back(static_cast<int>(i));

    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        if (shard.nodes[id].status != NodeStatus::Open) continue;

        // push_back below may reallocate nodes; keep copies of what we need
        const std::vector<int> region = shard.nodes[id].region;
        const int capacity = shard.nodes[id].capacity;
        const int root_partition = shard.nodes[id].root_partition;
        const int target = cfg.width_for(capacity, false);
        const int cap = cfg.attempt_cap(target);
        const std::string path = shard.paths[id];
        const std::uint64_t node_seed = hash_string(cfg.seed, path);

        for (int attempt = 0; attempt < cap && shard.nodes[id].successes < target; ++attempt) {
            Rng rng(hash_combine(node_seed, static_cast<std::uint64_t>(attempt)));
            auto res = try_partition(graph, p_hat, cfg, region, capacity, rng);
            ++shard.attempts;
            ++shard.nodes[id].attempts;
            shard.stats.push_back({id, capacity, res.z, attempt, res.success, res.wall_ms});
            if (!res.success) {
                ++shard.infeasible;
                continue;
            }
            ++shard.successes;
            ++shard.nodes[id].successes;
            const int sidx = static_cast<int>(shard.nodes[id].samples.size());
            std::vector<int> children;
            for (std::size_t c = 0; c < res.subregions.size(); ++c) {
                TreeNode child;
                child.id = static_cast<int>(shard.nodes.size());
                child.parent = id;
                child.parent_sample = sidx;
                child.root_partition = root_partition;
                child.capacity = res.capacities[c];
                child.region = std::move(res.subregions[c]);
                std::sort(child.region.begin(), child.region.end());
                child.status = child.capacity == 1 ? NodeStatus::Complete : NodeStatus::Open;
                children.push_back(child.id);
                shard.paths.push_back(path + "/" + std::to_string(sidx) + "." + std::to_string(c));
                const bool needs_split = child.capacity > 1;
                shard.nodes.push_back(std::move(child));
                if (needs_split) queue.push_back(shard.nodes.back().id);
            }
            shard.nodes[id].samples.push_back(std::move(children));
        }

        if (shard.nodes[id].successes == 0) {
            if (propagate_failure(shard.nodes, id)) {
                shard.failed = true;
                return;
            }
        } else {
            shard.nodes[id].status = NodeStatus::Complete;
        }
    }
}

}  // namespace

SampleTree generate_tree(const AdjacencyGraph& graph, const ProblemSpec& spec,
                         const TreeConfig& config) {
    if (spec.k < 2) throw ValidationError("k must be >= 2");
    SampleTree tree;
    tree.config = config;
    tree.config.k = spec.k;
    tree.config.epsilon_p = spec.epsilon_p;
    tree.ideal_population = spec.ideal_population;
    tree.num_blocks = graph.num_blocks();

    TreeNode root;
    root.id = 0;
    root.capacity = spec.k;
    root.region.resize(graph.num_blocks());
    for (int i = 0; i < graph.num_blocks(); ++i) root.region[i] = i;
    tree.nodes.push_back(root);

    // sample root partitions serially; their subtrees shard out below
    struct RootSample {
        std::vector<std::vector<int>> subregions;
        std::vector<int> capacities;
    };
    std::vector<RootSample> root_samples;
    {
        TreeNode& r = tree.nodes[0];
        const int target = tree.config.width_for(spec.k, true);
        const int cap = tree.config.attempt_cap(target);
        const std::uint64_t node_seed = hash_string(tree.config.seed, "R");
        for (int attempt = 0; attempt < cap && static_cast<int>(root_samples.size()) < target;
             ++attempt) {
            Rng rng(hash_combine(node_seed, static_cast<std::uint64_t>(attempt)));
            auto res = try_partition(graph, spec.ideal_population, tree.config, r.region,
                                     spec.k, rng);
            ++tree.attempts;
            ++r.attempts;
            tree.problem_stats.push_back({0, spec.k, res.z, attempt, res.success, res.wall_ms});
            if (!res.success) {
                ++tree.infeasible;
                continue;
            }
            ++tree.successes;
            ++r.successes;
            root_samples.push_back({std::move(res.subregions), std::move(res.capacities)});
        }
    }
    if (root_samples.empty()) throw InfeasibleRootError("no feasible root partition");

    // expand each root partition independently
    std::vector<Shard> shards(root_samples.size());
    for (std::size_t ri = 0; ri < root_samples.size(); ++ri) {
        Shard& sh = shards[ri];
        for (std::size_t c = 0; c < root_samples[ri].subregions.size(); ++c) {
            TreeNode n;
            n.id = static_cast<int>(sh.nodes.size());
            n.parent = -1;
            n.parent_sample = static_cast<int>(ri);
            n.root_partition = static_cast<int>(ri);
            n.capacity = root_samples[ri].capacities[c];
            n.region = root_samples[ri].subregions[c];
            std::sort(n.region.begin(), n.region.end());
            n.status = n.capacity == 1 ? NodeStatus::Complete : NodeStatus::Open;
            sh.paths.push_back("R/" + std::to_string(ri) + "." + std::to_string(c));
            sh.nodes.push_back(std::move(n));
        }
    }

    const int workers = std::max(1, config.parallelism);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        while (true) {
            const std::size_t ri = next.fetch_add(1);
            if (ri >= shards.size()) return;
            expand_shard(graph, spec.ideal_population, tree.config, shards[ri]);
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    // merge surviving shards in root-partition order
    int merged_sample = 0;
    for (std::size_t ri = 0; ri < shards.size(); ++ri) {
        Shard& sh = shards[ri];
        if (sh.failed) {
            tree.attempts += sh.attempts;
            tree.successes += sh.successes;
            tree.infeasible += sh.infeasible;
            for (auto st : sh.stats) {
                st.node = -1;
                tree.problem_stats.push_back(st);
            }
            continue;
        }
        std::vector<int> local_to_global(sh.nodes.size(), -1);
        int next_global = static_cast<int>(tree.nodes.size());
        for (std::size_t li = 0; li < sh.nodes.size(); ++li)
            if (sh.nodes[li].status != NodeStatus::Dead) local_to_global[li] = next_global++;
        std::vector<int> top_children;
        for (std::size_t li = 0; li < sh.nodes.size(); ++li) {
            const TreeNode& ln = sh.nodes[li];
            if (ln.status == NodeStatus::Dead) continue;
            TreeNode g = ln;
            g.id = local_to_global[li];
            g.parent = ln.parent < 0 ? 0 : local_to_global[ln.parent];
            g.parent_sample = ln.parent < 0 ? merged_sample : ln.parent_sample;
            g.root_partition = merged_sample;
            std::vector<std::vector<int>> samples;
            for (const auto& s : ln.samples) {
                if (!sample_alive(sh.nodes, s)) continue;
                std::vector<int> remapped;
                remapped.reserve(s.size());
                for (int child : s) remapped.push_back(local_to_global[child]);
                samples.push_back(std::move(remapped));
            }
            g.samples = std::move(samples);  // parent_sample fixed up after the merge
            if (ln.parent < 0) top_children.push_back(g.id);
            tree.nodes.push_back(std::move(g));
        }
        tree.nodes[0].samples.push_back(std::move(top_children));
        for (auto st : sh.stats) {
            st.node = st.node >= 0 ? local_to_global[st.node] : -1;
            tree.problem_stats.push_back(st);
        }
        tree.attempts += sh.attempts;
        tree.successes += sh.successes;
        tree.infeasible += sh.infeasible;
        ++merged_sample;
    }
    if (tree.nodes[0].samples.empty()) throw InfeasibleRootError("no feasible root partition");
    tree.nodes[0].status = NodeStatus::Complete;

    // re-derive parent_sample for children after sample filtering
    for (std::size_t si = 0; si < tree.nodes[0].samples.size(); ++si)
        for (int child : tree.nodes[0].samples[si]) {
            tree.nodes[child].parent_sample = static_cast<int>(si);
            tree.nodes[child].root_partition = static_cast<int>(si);
        }
    for (const auto& n : tree.nodes)
        for (std::size_t si = 0; si < n.samples.size(); ++si)
            for (int child : n.samples[si]) tree.nodes[child].parent_sample = static_cast<int>(si);

    return tree;
}

namespace {

void check_countable(const SampleTree& tree, int id) {
    const TreeNode& n = tree.nodes[id];
    if (n.status == NodeStatus::Open) throw ValidationError("tree node still open");
    if (n.status == NodeStatus::Failed) throw ValidationError("tree node failed");
    if (n.status == NodeStatus::Dead) throw ValidationError("dead node reached");
}

mpz_class count_mpz(const SampleTree& tree, int id, std::unordered_map<int, mpz_class>& memo) {
    check_countable(tree, id);
    const TreeNode& n = tree.nodes[id];
    if (n.is_leaf()) return 1;
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    mpz_class total = 0;
    for (const auto& sample : n.samples) {
        if (!sample_alive(tree.nodes, sample)) continue;
        mpz_class prod = 1;
        for (int child : sample) prod *= count_mpz(tree, child, memo);
        total += prod;
    }
    memo[id] = total;
    return total;
}

BigCount to_big(const mpz_class& z) {
    BigCount out;
    out.decimal = z.get_str();
    if (z == 0) {
        out.log10_value = -std::numeric_limits<double>::infinity();
        out.fits_u64 = true;
        out.u64 = 0;
        return out;
    }
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    out.log10_value = std::log10(mant) + static_cast<double>(exp2) * std::log10(2.0);
    out.fits_u64 = mpz_sizeinbase(z.get_mpz_t(), 2) <= 64;
    if (out.fits_u64) {
        mpz_class lo = z & mpz_class(0xffffffffu);
        mpz_class hi = z >> 32;
        out.u64 = (static_cast<std::uint64_t>(hi.get_ui()) << 32) |
                  static_cast<std::uint64_t>(lo.get_ui());
    }
    return out;
}

}  // namespace

BigCount count_plans(const SampleTree& tree, int node) {
    if (tree.nodes.empty()) throw ValidationError("empty tree");
    std::unordered_map<int, mpz_class> memo;
    return to_big(count_mpz(tree, node, memo));
}

int SampleTree::alive_leaves() const {
    int count = 0;
    std::function<void(int)> walk = [&](int id) {
        const TreeNode& n = nodes[id];
        if (n.is_leaf()) {
            ++count;
            return;
        }
        for (const auto& s : n.samples) {
            if (!sample_alive(nodes, s)) continue;
            for (int c : s) walk(c);
        }
    };
    walk(0);
    return count;
}

int SampleTree::distinct_leaves() const {
    std::unordered_map<std::uint64_t, std::vector<const TreeNode*>> seen;
    int distinct = 0;
    std::function<void(int)> walk = [&](int id) {
        const TreeNode& n = nodes[id];
        if (n.is_leaf()) {
            const auto bs = BlockSet::from_ids(num_blocks, n.region);
            auto& bucket = seen[bs.hash()];
            for (const TreeNode* other : bucket)
                if (other->region == n.region) return;
            bucket.push_back(&n);
            ++distinct;
            return;
        }
        for (const auto& s : n.samples) {
            if (!sample_alive(nodes, s)) continue;
            for (int c : s) walk(c);
        }
    };
    walk(0);
    return distinct;
}

double leverage(const SampleTree& tree) {
    const auto plans = count_plans(tree, 0);
    const int distinct = tree.distinct_leaves();
    if (distinct == 0) throw ValidationError("tree has no leaves");
    return plans.log10_value - std::log10(static_cast<double>(distinct));
}

namespace {

std::uint64_t run_enumeration(const SampleTree& t, const std::vector<int>& top,
                              const PlanVisitor& visit) {
    std::vector<int> leaves;
    std::uint64_t count = 0;

    std::function<bool(int, const std::function<bool()>&)> expand;
    std::function<bool(const std::vector<int>&, std::size_t, const std::function<bool()>&)> seq;

    expand = [&](int id, const std::function<bool()>& cont) -> bool {
        const TreeNode& n = t.nodes[id];
        if (n.is_leaf()) {
            leaves.push_back(id);
            const bool ok = cont();
            leaves.pop_back();
            return ok;
        }
        for (const auto& sample : n.samples) {
            if (!sample_alive(t.nodes, sample)) continue;
            if (!seq(sample, 0, cont)) return false;
        }
        return true;
    };
    seq = [&](const std::vector<int>& kids, std::size_t i,
              const std::function<bool()>& cont) -> bool {
        if (i == kids.size()) return cont();
        return expand(kids[i], [&, i]() -> bool { return seq(kids, i + 1, cont); });
    };

    seq(top, 0, [&]() -> bool {
        ++count;
        return visit(leaves);
    });
    return count;
}

}  // namespace

std::uint64_t enumerate_plans(const SampleTree& tree, std::uint64_t limit,
                              const PlanVisitor& visit) {
    const auto total = count_plans(tree, 0);
    if (!total.fits_u64 || total.u64 > limit)
        throw ValidationError("plan count " + total.decimal + " exceeds enumeration limit " +
                              std::to_string(limit) + "; prune_tree first");
    std::vector<int> top{0};
    return run_enumeration(tree, top, visit);
}

std::uint64_t enumerate_root_partition(const SampleTree& tree, int root_sample,
                                       std::uint64_t limit, const PlanVisitor& visit) {
    const auto& samples = tree.nodes[0].samples;
    if (root_sample < 0 || root_sample >= static_cast<int>(samples.size()))
        throw ValidationError("root sample index out of range");
    if (!sample_alive(tree.nodes, samples[root_sample]))
        throw ValidationError("root sample is pruned");
    std::unordered_map<int, mpz_class> memo;
    mpz_class prod = 1;
    for (int child : samples[root_sample]) prod *= count_mpz(tree, child, memo);
    if (cmp(prod, limit) > 0)
        throw ValidationError("root partition plan count exceeds enumeration limit; prune first");
    return run_enumeration(tree, samples[root_sample], visit);
}

ColumnSet collect_columns(const SampleTree& tree, const AdjacencyGraph& graph) {
    ColumnSet out;
    out.leaf_to_column.assign(tree.nodes.size(), -1);

    // reachable alive leaves in deterministic traversal order
    std::vector<int> leaves;
    std::function<void(int)> walk = [&](int id) {
        const TreeNode& n = tree.nodes[id];
        if (n.is_leaf()) {
            leaves.push_back(id);
            return;
        }
        for (const auto& s : n.samples) {
            if (!sample_alive(tree.nodes, s)) continue;
            for (int c : s) walk(c);
        }
    };
    walk(0);
    out.total_leaves = static_cast<int>(leaves.size());

    // dedup within each root partition
    std::unordered_map<std::uint64_t, std::vector<int>> buckets;  // hash -> column ids
    for (int id : leaves) {
        const TreeNode& n = tree.nodes[id];
        auto bs = BlockSet::from_ids(tree.num_blocks, n.region);
        const std::uint64_t h = hash_combine(bs.hash(), static_cast<std::uint64_t>(n.root_partition));
        int col = -1;
        for (int cid : buckets[h]) {
            if (out.columns[cid].root_partition == n.root_partition &&
                out.columns[cid].blocks == bs) {
                col = cid;
                break;
            }
        }
        if (col < 0) {
            DistrictColumn c;
            c.id = static_cast<int>(out.columns.size());
            c.blocks = std::move(bs);
            c.block_ids = n.region;
            c.root_partition = n.root_partition;
            for (int b : n.region) c.population += graph.block(b).population;
            col = c.id;
            buckets[h].push_back(col);
            out.columns.push_back(std::move(c));
        }
        out.leaf_to_column[id] = col;
    }
    out.duplicate_rate = out.total_leaves == 0
                             ? 0.0
                             : static_cast<double>(out.total_leaves -
                                                   static_cast<int>(out.columns.size())) /
                                   static_cast<double>(out.total_leaves);
    return out;
}

SampleTree prune_tree(const SampleTree& tree, std::uint64_t target_size) {
    SampleTree t = tree;
    const mpz_class target(static_cast<unsigned long>(target_size));

    std::unordered_map<int, mpz_class> memo;
    mpz_class root_count = count_mpz(t, 0, memo);

    auto recompute_up = [&](int id) {
        for (int cur = id; cur >= 0; cur = t.nodes[cur].parent) {
            mpz_class total = 0;
            for (const auto& sample : t.nodes[cur].samples) {
                if (!sample_alive(t.nodes, sample)) continue;
                mpz_class prod = 1;
                for (int child : sample) prod *= count_mpz(t, child, memo);
                total += prod;
            }
            memo[cur] = total;
        }
        root_count = memo[0];
    };

    int max_capacity = 0;
    for (const auto& n : t.nodes)
        if (n.status != NodeStatus::Dead) max_capacity = std::max(max_capacity, n.capacity);

    for (int size = 2; size <= max_capacity && root_count > target;) {
        bool removed_any = false;
        for (std::size_t id = 0; id < t.nodes.size() && root_count > target; ++id) {
            TreeNode& n = t.nodes[id];
            if (n.status == NodeStatus::Dead || n.is_leaf() || n.capacity != size) continue;
            // find the last alive sample; keep at least one
            if (alive_sample_count(t.nodes, n) <= 1) continue;
            for (int si = static_cast<int>(n.samples.size()) - 1; si >= 0; --si) {
                if (!sample_alive(t.nodes, n.samples[si])) continue;
                for (int child : n.samples[si]) kill_subtree(t.nodes, child);
                removed_any = true;
                recompute_up(static_cast<int>(id));
                break;
            }
        }
        if (!removed_any) ++size;
    }
    return compact_tree(t);
}

SampleTree compact_tree(const SampleTree& tree) {
    SampleTree out;
    out.config = tree.config;
    out.ideal_population = tree.ideal_population;
    out.num_blocks = tree.num_blocks;
    out.attempts = tree.attempts;
    out.successes = tree.successes;
    out.infeasible = tree.infeasible;
    out.problem_stats = tree.problem_stats;

    // BFS in alive structure, parents before children
    std::vector<int> order;
    std::vector<int> new_id(tree.nodes.size(), -1);
    std::deque<int> q;
    q.push_back(0);
    while (!q.empty()) {
        const int id = q.front();
        q.pop_front();
        new_id[id] = static_cast<int>(order.size());
        order.push_back(id);
        for (const auto& s : tree.nodes[id].samples) {
            if (!sample_alive(tree.nodes, s)) continue;
            for (int c : s) q.push_back(c);
        }
    }
    for (int old : order) {
        TreeNode n = tree.nodes[old];
        n.id = new_id[old];
        n.parent = n.parent >= 0 ? new_id[n.parent] : -1;
        std::vector<std::vector<int>> samples;
        for (const auto& s : tree.nodes[old].samples) {
            if (!sample_alive(tree.nodes, s)) continue;
            std::vector<int> remapped;
            for (int c : s) remapped.push_back(new_id[c]);
            samples.push_back(std::move(remapped));
        }
        n.samples = std::move(samples);
        out.nodes.push_back(std::move(n));
    }
    // fix parent_sample and root_partition from the compacted structure
    for (auto& n : out.nodes)
        for (std::size_t si = 0; si < n.samples.size(); ++si)
            for (int child : n.samples[si]) out.nodes[child].parent_sample = static_cast<int>(si);
    std::function<void(int, int)> mark = [&](int id, int rp) {
        out.nodes[id].root_partition = rp;
        for (const auto& s : out.nodes[id].samples)
            for (int c : s) mark(c, rp);
    };
    out.nodes[0].root_partition = -1;
    for (std::size_t si = 0; si < out.nodes[0].samples.size(); ++si)
        for (int child : out.nodes[0].samples[si]) mark(child, static_cast<int>(si));
    // problem stats reference old ids; remap where possible
    for (auto& st : out.problem_stats)
        if (st.node >= 0 && st.node < static_cast<int>(new_id.size()))
            st.node = new_id[st.node];
    return out;
}

}  // namespace shp
