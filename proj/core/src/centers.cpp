#include "shp/centers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace shp {

int sample_split_size(int s, const CenterConfig& config, Rng& rng) {
    if (s < 2) throw ValidationError("split size undefined for s < 2");
    const int hi = std::min(s, config.z_max);
    const int lo = std::min(config.z_min, hi);
    return static_cast<int>(rng.uniform_int(lo, hi));
}

namespace {

std::vector<int> balanced_composition(int s, int z) {
    std::vector<int> parts(z, s / z);
    for (int i = 0; i < s % z; ++i) ++parts[i];
    return parts;
}

// uniform composition of s into z positive parts via uniform cut points
std::vector<int> uniform_composition(int s, int z, Rng& rng) {
    if (z == 1) return {s};
    // sample z-1 distinct cuts from {1..s-1}
    std::vector<int> cuts;
    cuts.reserve(z - 1);
    // Floyd's algorithm for a uniform (z-1)-subset of [1, s-1]
    for (int j = s - 1 - (z - 1) + 1; j <= s - 1; ++j) {
        int t = static_cast<int>(rng.uniform_int(1, j));
        if (std::find(cuts.begin(), cuts.end(), t) != cuts.end())
            cuts.push_back(j);
        else
            cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<int> parts;
    parts.reserve(z);
    int prev = 0;
    for (int c : cuts) {
        parts.push_back(c - prev);
        prev = c;
    }
    parts.push_back(s - prev);
    return parts;
}

}  // namespace

std::vector<int> sample_capacities(int s, int z, const CenterConfig& config, Rng& rng) {
    if (z > s) throw ValidationError("cannot split capacity " + std::to_string(s) + " into " +
                                     std::to_string(z) + " parts");
    if (z == s) return std::vector<int>(z, 1);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto parts = uniform_composition(s, z, rng);
        const auto [mn, mx] = std::minmax_element(parts.begin(), parts.end());
        if (static_cast<double>(*mx) <= config.disparity_cap * static_cast<double>(*mn))
            return parts;
    }
    return balanced_composition(s, z);
}

std::vector<Point> weighted_kmeans(const std::vector<Point>& points,
                                   const std::vector<double>& weights, int z, Rng& rng) {
    const int n = static_cast<int>(points.size());
    if (z < 1 || z > n) throw ValidationError("weighted_kmeans needs 1 <= z <= #points");

    auto dist2 = [](const Point& a, const Point& b) {
        return (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
    };

    // init: z distinct points, probability proportional to weight
    std::vector<char> taken(n, 0);
    std::vector<int> chosen;
    for (int c = 0; c < z; ++c) {
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            if (!taken[i]) total += weights[i];
        int pick = -1;
        if (total <= 0.0) {
            // remaining weights all zero: uniform among the untaken
            int skip = static_cast<int>(rng.uniform_int(0, n - c - 1));
            for (int i = 0; i < n; ++i)
                if (!taken[i] && skip-- == 0) {
                    pick = i;
                    break;
                }
        } else {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                if (taken[i]) continue;
                acc += weights[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
            if (pick < 0)
                for (int i = n - 1; i >= 0; --i)
                    if (!taken[i]) {
                        pick = i;
                        break;
                    }
        }
        taken[pick] = 1;
        chosen.push_back(pick);
    }

    std::vector<Point> means(z);
    for (int c = 0; c < z; ++c) means[c] = points[chosen[c]];

    std::vector<int> assign(n, -1), prev(n, -2);
    for (int iter = 0; iter < 100 && assign != prev; ++iter) {
        prev = assign;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = dist2(points[i], means[0]);
            for (int c = 1; c < z; ++c) {
                const double d = dist2(points[i], means[c]);
                if (d < bd) {
                    bd = d;
                    best = c;
                }
            }
            assign[i] = best;
        }
        // repair empty clusters by stealing the farthest point of the largest
        std::vector<int> count(z, 0);
        for (int a : assign) ++count[a];
        for (int c = 0; c < z; ++c) {
            while (count[c] == 0) {
                int big = static_cast<int>(std::max_element(count.begin(), count.end()) -
                                           count.begin());
                int steal = -1;
                double far2 = -1.0;
                for (int i = 0; i < n; ++i) {
                    if (assign[i] != big) continue;
                    const double d = dist2(points[i], means[big]);
                    if (d > far2) {
                        far2 = d;
                        steal = i;
                    }
                }
                assign[steal] = c;
                --count[big];
                ++count[c];
            }
        }
        for (int c = 0; c < z; ++c) {
            double wx = 0.0, wy = 0.0, wt = 0.0;
            double sx = 0.0, sy = 0.0;
            int cnt = 0;
            for (int i = 0; i < n; ++i) {
                if (assign[i] != c) continue;
                wx += weights[i] * points[i].x;
                wy += weights[i] * points[i].y;
                wt += weights[i];
                sx += points[i].x;
                sy += points[i].y;
                ++cnt;
            }
            if (wt > 0.0)
                means[c] = {wx / wt, wy / wt};
            else if (cnt > 0)
                means[c] = {sx / cnt, sy / cnt};
        }
    }
    return means;
}

namespace {

constexpr double kPinnedWeight = 1e18;

std::vector<int> means_to_blocks(const AdjacencyGraph& graph, const std::vector<int>& region,
                                 const std::vector<Point>& means) {
    // greedy global matching on (mean, block) distance; deterministic
    struct Cand {
        double d2;
        int mean;
        int block;
    };
    std::vector<Cand> cands;
    cands.reserve(means.size() * region.size());
    for (std::size_t m = 0; m < means.size(); ++m) {
        for (int b : region) {
            const double dx = graph.block(b).x - means[m].x;
            const double dy = graph.block(b).y - means[m].y;
            cands.push_back({dx * dx + dy * dy, static_cast<int>(m), b});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.mean != b.mean) return a.mean < b.mean;
        return a.block < b.block;
    });
    std::vector<int> out(means.size(), -1);
    std::vector<char> used_mean(means.size(), 0);
    std::size_t assigned = 0;
    std::vector<char> used_block_flag;
    int max_id = 0;
    for (int b : region) max_id = std::max(max_id, b);
    used_block_flag.assign(max_id + 1, 0);
    for (const auto& c : cands) {
        if (assigned == means.size()) break;
        if (used_mean[c.mean] || used_block_flag[c.block]) continue;
        used_mean[c.mean] = 1;
        used_block_flag[c.block] = 1;
        out[c.mean] = c.block;
        ++assigned;
    }
    return out;
}

std::vector<int> kmeans_centers(const AdjacencyGraph& graph, const std::vector<int>& region,
                                int z, Rng& rng, bool fix_one, bool pareto, double alpha_pareto) {
    std::vector<Point> pts;
    pts.reserve(region.size());
    std::vector<double> w;
    w.reserve(region.size());
    for (int b : region) {
        pts.push_back({graph.block(b).x, graph.block(b).y});
        w.push_back(static_cast<double>(graph.block(b).population));
    }
    if (pareto)
        for (auto& wi : w) wi *= 1.0 + rng.pareto_ii(alpha_pareto);
    if (fix_one) {
        const int fixed = static_cast<int>(rng.uniform_int(0, static_cast<int>(region.size()) - 1));
        w[fixed] = kPinnedWeight;
    }
    auto means = weighted_kmeans(pts, w, z, rng);
    return means_to_blocks(graph, region, means);
}

std::vector<int> random_iterative_centers(const AdjacencyGraph& graph,
                                          const std::vector<int>& region, int z, Rng& rng,
                                          const std::vector<int>& capacities,
                                          double ideal_population) {
    std::vector<int> unassigned(region);
    std::vector<int> centers;
    int seed_block = unassigned[rng.uniform_int(0, static_cast<int>(unassigned.size()) - 1)];
    for (int c = 0; c < z; ++c) {
        if (unassigned.empty()) {
            // ran out of blocks to peel: fall back to uniform over unchosen
            std::vector<int> rest;
            for (int b : region)
                if (std::find(centers.begin(), centers.end(), b) == centers.end())
                    rest.push_back(b);
            centers.push_back(rest[rng.uniform_int(0, static_cast<int>(rest.size()) - 1)]);
            continue;
        }
        std::vector<double> wts(unassigned.size());
        double total = 0.0;
        for (std::size_t i = 0; i < unassigned.size(); ++i) {
            const double d = graph.distance(seed_block, unassigned[i]);
            wts[i] = d * d;
            total += wts[i];
        }
        int center;
        if (total <= 0.0)
            center = unassigned[rng.uniform_int(0, static_cast<int>(unassigned.size()) - 1)];
        else
            center = unassigned[rng.weighted_index(wts)];
        centers.push_back(center);

        // peel roughly capacity * p_hat of population nearest to the center
        const double target =
            static_cast<double>(capacities[c]) * ideal_population;
        std::sort(unassigned.begin(), unassigned.end(), [&](int a, int b) {
            const double da = graph.distance(center, a), db = graph.distance(center, b);
            if (da != db) return da < db;
            return a < b;
        });
        double peeled = 0.0;
        std::size_t cut = 0;
        while (cut < unassigned.size() && peeled < target) {
            peeled += static_cast<double>(graph.block(unassigned[cut]).population);
            ++cut;
        }
        unassigned.erase(unassigned.begin(), unassigned.begin() + cut);
        seed_block = center;
    }
    return centers;
}

}  // namespace

std::vector<int> select_centers(const AdjacencyGraph& graph, const std::vector<int>& region,
                                int z, const CenterConfig& config, Rng& rng,
                                const std::vector<int>* capacities, double ideal_population) {
    if (static_cast<int>(region.size()) < z)
        throw ValidationError("region smaller than requested center count");
    switch (config.method) {
        case CenterMethod::UniformRandom: {
            std::vector<int> pool(region);
            std::vector<int> out;
            for (int c = 0; c < z; ++c) {
                const int i = static_cast<int>(rng.uniform_int(0, static_cast<int>(pool.size()) - 1));
                out.push_back(pool[i]);
                pool.erase(pool.begin() + i);
            }
            return out;
        }
        case CenterMethod::FixedCenter:
            return kmeans_centers(graph, region, z, rng, true, false, config.alpha_pareto);
        case CenterMethod::ParetoPerturbation:
            return kmeans_centers(graph, region, z, rng, false, true, config.alpha_pareto);
        case CenterMethod::FixedPlusPareto:
            return kmeans_centers(graph, region, z, rng, true, true, config.alpha_pareto);
        case CenterMethod::RandomIterative: {
            if (!capacities || static_cast<int>(capacities->size()) != z || ideal_population <= 0.0)
                throw ValidationError("random-iterative selection needs capacities and p_hat");
            return random_iterative_centers(graph, region, z, rng, *capacities, ideal_population);
        }
    }
    throw ValidationError("unknown center method");
}

std::vector<double> capacity_weights(const AdjacencyGraph& graph, const std::vector<int>& region,
                                     const std::vector<int>& centers, WeightKind kind,
                                     double ideal_population) {
    const int z = static_cast<int>(centers.size());
    std::vector<double> w(z, 0.0);
    for (int b : region) {
        const double pop = static_cast<double>(graph.block(b).population);
        std::vector<double> d(z);
        int coincident = -1;
        for (int c = 0; c < z; ++c) {
            d[c] = graph.distance(centers[c], b);
            if (d[c] == 0.0 && coincident < 0) coincident = c;
        }
        if (coincident >= 0) {
            w[coincident] += pop;
            continue;
        }
        if (kind == WeightKind::Voronoi) {
            int best = 0;
            for (int c = 1; c < z; ++c)
                if (d[c] < d[best]) best = c;  // ties keep the lower center id
            w[best] += pop;
        } else {
            double denom = 0.0;
            for (int c = 0; c < z; ++c) denom += 1.0 / (d[c] * d[c]);
            for (int c = 0; c < z; ++c) w[c] += pop * (1.0 / (d[c] * d[c])) / denom;
        }
    }
    for (auto& wi : w) wi /= ideal_population;
    return w;
}

std::vector<int> assign_capacities(const std::vector<double>& ideal,
                                   const std::vector<int>& sampled, CapacityMode mode) {
    const int z = static_cast<int>(ideal.size());
    if (static_cast<int>(sampled.size()) != z)
        throw ValidationError("ideal and sampled capacity counts differ");
    const int s = std::accumulate(sampled.begin(), sampled.end(), 0);
    if (s < z) throw ValidationError("capacity " + std::to_string(s) + " infeasible for " +
                                     std::to_string(z) + " centers");

    if (mode == CapacityMode::Match) {
        std::vector<int> order(z);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return ideal[a] < ideal[b]; });
        std::vector<int> sorted(sampled);
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> out(z);
        for (int r = 0; r < z; ++r) out[order[r]] = sorted[r];
        return out;
    }

    // Compute: L1 apportionment, floor then adjust by marginal cost
    std::vector<int> out(z);
    for (int i = 0; i < z; ++i) out[i] = std::max(1, static_cast<int>(std::floor(ideal[i])));
    auto total = [&] { return std::accumulate(out.begin(), out.end(), 0); };
    while (total() < s) {
        int best = -1;
        double best_delta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < z; ++i) {
            const double delta = std::fabs(out[i] + 1 - ideal[i]) - std::fabs(out[i] - ideal[i]);
            if (delta < best_delta - 1e-12) {
                best_delta = delta;
                best = i;
            }
        }
        ++out[best];
    }
    while (total() > s) {
        int best = -1;
        double best_delta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < z; ++i) {
            if (out[i] <= 1) continue;
            const double delta = std::fabs(out[i] - 1 - ideal[i]) - std::fabs(out[i] - ideal[i]);
            if (delta < best_delta - 1e-12) {
                best_delta = delta;
                best = i;
            }
        }
        if (best < 0) throw ValidationError("no feasible capacity assignment");
        --out[best];
    }
    return out;
}

}  // namespace shp
