#pragma once

// Shared fixtures and independent oracles for the test suites. Oracles here
// must stay independent of the implementation paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "shp/graph.hpp"
#include "shp/rng.hpp"
#include "shp/solver.hpp"
#include "shp/tree.hpp"

namespace shp::testing {

// ---- graph fixtures -------------------------------------------------------

inline AdjacencyGraph path_graph(const std::vector<std::int64_t>& pops, double spacing = 1.0) {
    std::vector<Block> blocks;
    for (std::size_t i = 0; i < pops.size(); ++i)
        blocks.push_back({static_cast<int>(i), pops[i], spacing * static_cast<double>(i), 0.0, 1.0});
    std::vector<std::pair<int, int>> edges;
    for (std::size_t i = 0; i + 1 < pops.size(); ++i)
        edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
    return AdjacencyGraph(std::move(blocks), edges);
}

inline AdjacencyGraph grid_graph(int width, int height, std::int64_t pop = 1000) {
    std::vector<Block> blocks;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            blocks.push_back({y * width + x, pop, x + 0.5, y + 0.5, 1.0});
    std::vector<std::pair<int, int>> edges;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const int id = y * width + x;
            if (x + 1 < width) edges.emplace_back(id, id + 1);
            if (y + 1 < height) edges.emplace_back(id, id + width);
        }
    return AdjacencyGraph(std::move(blocks), edges);
}

// ---- structural sample trees ----------------------------------------------

// Builds a well-formed tree whose node regions really partition their parent:
// each node with capacity s covers s*quantum blocks; sample i rotates the
// parent's block list by i before chunking, so partitions are distinct.
struct TreeFactory {
    int quantum = 64;

    SampleTree make(int k, const std::function<int(int)>& width_of_capacity,
                    const std::function<std::vector<int>(int, Rng&)>& split_of_capacity,
                    std::uint64_t seed = 7) {
        SampleTree t;
        t.num_blocks = k * quantum;
        t.config.k = k;
        t.ideal_population = 1000.0 * quantum;

        TreeNode root;
        root.id = 0;
        root.capacity = k;
        root.region.resize(t.num_blocks);
        std::iota(root.region.begin(), root.region.end(), 0);
        root.status = NodeStatus::Complete;
        t.nodes.push_back(root);

        Rng rng(seed);
        std::vector<int> queue{0};
        while (!queue.empty()) {
            const int id = queue.back();
            queue.pop_back();
            const int s = t.nodes[id].capacity;
            if (s == 1) continue;
            const int w = width_of_capacity(s);
            for (int i = 0; i < w; ++i) {
                const auto caps = split_of_capacity(s, rng);
                // rotate then chunk proportionally to capacities
                std::vector<int> blocks = t.nodes[id].region;
                std::rotate(blocks.begin(), blocks.begin() + (i % blocks.size()), blocks.end());
                std::vector<int> children;
                std::size_t at = 0;
                for (int cap : caps) {
                    TreeNode child;
                    child.id = static_cast<int>(t.nodes.size());
                    child.parent = id;
                    child.parent_sample = i;
                    child.capacity = cap;
                    child.status = NodeStatus::Complete;
                    const std::size_t len = static_cast<std::size_t>(cap) * quantum;
                    child.region.assign(blocks.begin() + at, blocks.begin() + at + len);
                    std::sort(child.region.begin(), child.region.end());
                    at += len;
                    children.push_back(child.id);
                    const bool expand = cap > 1;
                    t.nodes.push_back(std::move(child));
                    if (expand) queue.push_back(t.nodes.back().id);
                }
                t.nodes[id].samples.push_back(std::move(children));
            }
        }
        // root partitions
        for (std::size_t si = 0; si < t.nodes[0].samples.size(); ++si) {
            std::function<void(int, int)> mark = [&](int nid, int rp) {
                t.nodes[nid].root_partition = rp;
                for (const auto& sm : t.nodes[nid].samples)
                    for (int c : sm) mark(c, rp);
            };
            for (int child : t.nodes[0].samples[si]) mark(child, static_cast<int>(si));
        }
        return t;
    }

    // constant width w, even binary splits when possible
    SampleTree binary(int k, int w, std::uint64_t seed = 7) {
        return make(
            k, [w](int) { return w; },
            [](int s, Rng&) {
                return std::vector<int>{(s + 1) / 2, s / 2};
            },
            seed);
    }

    SampleTree random_tree(int k, int max_w, std::uint64_t seed) {
        Rng widths(seed ^ 0x9e37u);
        return make(
            k, [&](int) { return static_cast<int>(widths.uniform_int(1, max_w)); },
            [](int s, Rng& rng) {
                const int z = static_cast<int>(rng.uniform_int(2, std::min(s, 3)));
                std::vector<int> caps(z, 1);
                int rest = s - z;
                for (int i = 0; rest > 0; i = (i + 1) % z) {
                    const int take = static_cast<int>(rng.uniform_int(0, rest));
                    caps[i] += take;
                    rest -= take;
                }
                return caps;
            },
            seed);
    }
};

// ---- exhaustive binary-program oracle --------------------------------------

struct BruteForceResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<int> x;
};

// Gray-code sweep over all 2^n binary points (continuous vars unsupported).
inline BruteForceResult brute_force_blp(const BinaryLinearProgram& p) {
    const int n = p.num_binary;
    if (p.num_continuous != 0) throw std::logic_error("oracle handles pure binary programs");
    const std::size_t m = p.rows.size();

    std::vector<std::vector<std::pair<int, double>>> var_rows(n);
    for (std::size_t r = 0; r < m; ++r)
        for (auto [j, c] : p.rows[r].terms) var_rows[j].emplace_back(static_cast<int>(r), c);

    std::vector<double> activity(m, 0.0);
    std::vector<int> x(n, 0);
    double obj = 0.0;

    // honor fixed binaries
    std::vector<int> fixed(n, -1);
    for (int j = 0; j < n; ++j)
        if (p.lower[j] == p.upper[j]) fixed[j] = static_cast<int>(p.lower[j]);
    for (int j = 0; j < n; ++j) {
        if (fixed[j] == 1) {
            x[j] = 1;
            obj += p.objective[j];
            for (auto [r, c] : var_rows[j]) activity[r] += c;
        }
    }

    auto feasible_now = [&] {
        for (std::size_t r = 0; r < m; ++r) {
            const double a = activity[r];
            const double rhs = p.rows[r].rhs;
            const double tol = 1e-9 * std::max(1.0, std::fabs(rhs));
            if (p.rows[r].rel == Relation::LE && a > rhs + tol) return false;
            if (p.rows[r].rel == Relation::GE && a < rhs - tol) return false;
            if (p.rows[r].rel == Relation::EQ && std::fabs(a - rhs) > tol) return false;
        }
        return true;
    };

    BruteForceResult best;
    auto consider = [&] {
        if (!feasible_now()) return;
        if (!best.feasible || obj < best.objective - 1e-15 ||
            (std::fabs(obj - best.objective) <= 1e-15 && x < best.x)) {
            best.feasible = true;
            best.objective = obj;
            best.x = x;
        }
    };

    // free positions only
    std::vector<int> free_vars;
    for (int j = 0; j < n; ++j)
        if (fixed[j] < 0) free_vars.push_back(j);
    const int fn = static_cast<int>(free_vars.size());
    if (fn > 24) throw std::logic_error("oracle limited to 24 free binaries");

    consider();
    const std::uint64_t total = std::uint64_t{1} << fn;
    for (std::uint64_t g = 1; g < total; ++g) {
        const int bit = std::countr_zero(g);  // Gray code flips one variable
        const int j = free_vars[bit];
        const int nv = 1 - x[j];
        x[j] = nv;
        const double sgn = nv == 1 ? 1.0 : -1.0;
        obj += sgn * p.objective[j];
        for (auto [r, c] : var_rows[j]) activity[r] += sgn * c;
        consider();
    }
    return best;
}

// ---- independent dense linear algebra --------------------------------------

// Cyclic Jacobi eigenvalues of a symmetric matrix (row-major, n x n).
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i * n + j] * a[i * n + j];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::fabs(apq) < 1e-18) continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double theta = 0.5 * (aqq - app) / apq;
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = a[i * n + p], aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = a[p * n + i], aqi = a[q * n + i];
                    a[p * n + i] = c * api - s * aqi;
                    a[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    std::vector<double> eig(n);
    for (int i = 0; i < n; ++i) eig[i] = a[i * n + i];
    std::sort(eig.begin(), eig.end());
    return eig;
}

// Singular values via Jacobi on A^T A.
inline std::vector<double> singular_values_oracle(const std::vector<std::vector<double>>& A) {
    const int rows = static_cast<int>(A.size());
    const int cols = rows > 0 ? static_cast<int>(A[0].size()) : 0;
    std::vector<double> ata(static_cast<std::size_t>(cols) * cols, 0.0);
    for (int i = 0; i < cols; ++i)
        for (int j = 0; j < cols; ++j) {
            double s = 0.0;
            for (int r = 0; r < rows; ++r) s += A[r][i] * A[r][j];
            ata[i * cols + j] = s;
        }
    auto eig = jacobi_eigenvalues(std::move(ata), cols);
    std::vector<double> sv;
    for (double e : eig) sv.push_back(std::sqrt(std::max(0.0, e)));
    std::sort(sv.rbegin(), sv.rend());
    return sv;
}

// ---- numeric oracles --------------------------------------------------------

// Student-t CDF by quadrature, independent of the implementation's
// special-function path. Substituting t = sqrt(v) tan(u) turns the density
// into cos^(v-1)(u) on (-pi/2, pi/2), which Simpson handles to near machine
// precision.
inline double t_cdf_quadrature(double x, int dof) {
    const double v = static_cast<double>(dof);
    auto integrand = [&](double u) { return std::pow(std::cos(u), v - 1.0); };
    auto simpson = [&](double a, double b) {
        const int n = 20000;  // even
        const double h = (b - a) / n;
        double s = integrand(a) + integrand(b);
        for (int i = 1; i < n; ++i) s += integrand(a + i * h) * (i % 2 ? 4.0 : 2.0);
        return s * h / 3.0;
    };
    const double half_pi = std::acos(-1.0) / 2.0;
    const double upper = std::atan(x / std::sqrt(v));
    return simpson(-half_pi, upper) / simpson(-half_pi, half_pi);
}

// ---- exhaustive PIP oracle ---------------------------------------------------

struct PipOracleResult {
    bool feasible = false;
    double objective = 0.0;
    std::vector<int> assignment;  // per region position, center index
};

// Enumerates all z^n assignments; keeps those with fixed center
// self-assignment, population inside the absolute bounds, and the
// closer-predecessor condition per assigned pair.
inline PipOracleResult pip_oracle(const AdjacencyGraph& graph, const std::vector<int>& region,
                                  const std::vector<int>& centers,
                                  const std::vector<int>& capacities, double alpha,
                                  double epsilon, double p_hat) {
    const int n = static_cast<int>(region.size());
    const int z = static_cast<int>(centers.size());
    std::vector<std::vector<double>> dist;
    for (int c : centers) dist.push_back(shortest_path_distances(graph, region, c));

    std::map<int, int> pos;
    for (int i = 0; i < n; ++i) pos[region[i]] = i;
    std::vector<std::vector<int>> nbrs(n);
    for (int i = 0; i < n; ++i)
        for (int nb : graph.neighbors(region[i]))
            if (pos.count(nb)) nbrs[i].push_back(pos[nb]);

    std::vector<int> center_pos(z);
    for (int c = 0; c < z; ++c) center_pos[c] = pos.at(centers[c]);

    PipOracleResult best;
    std::vector<int> assign(n, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == n) {
            for (int c = 0; c < z; ++c)
                if (assign[center_pos[c]] != c) return;
            for (int c = 0; c < z; ++c) {
                double popc = 0.0;
                for (int j = 0; j < n; ++j)
                    if (assign[j] == c) popc += static_cast<double>(graph.block(region[j]).population);
                if (popc > p_hat * (capacities[c] + epsilon) + 1e-9 ||
                    popc < p_hat * (capacities[c] - epsilon) - 1e-9)
                    return;
            }
            for (int j = 0; j < n; ++j) {
                const int c = assign[j];
                if (j == center_pos[c]) continue;
                bool ok = false;
                for (int bn : nbrs[j])
                    if (assign[bn] == c && dist[c][bn] < dist[c][j]) ok = true;
                if (!ok) return;
            }
            double obj = 0.0;
            for (int j = 0; j < n; ++j)
                obj += std::pow(dist[assign[j]][j], alpha) *
                       static_cast<double>(graph.block(region[j]).population);
            if (!best.feasible || obj < best.objective) {
                best.feasible = true;
                best.objective = obj;
                best.assignment = assign;
            }
            return;
        }
        for (int c = 0; c < z; ++c) {
            assign[i] = c;
            rec(i + 1);
        }
    };
    rec(0);
    return best;
}

}  // namespace shp::testing
