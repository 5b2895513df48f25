#include "shp/metrics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "shp/rng.hpp"

namespace shp {

int district_boundary_edges(const AdjacencyGraph& graph, const std::vector<int>& district) {
    std::vector<char> inside(graph.num_blocks(), 0);
    for (int b : district) inside[b] = 1;
    int count = 0;
    for (int b : district)
        for (int nb : graph.neighbors(b))
            if (!inside[nb]) ++count;
    return count;
}

double district_centralization(const AdjacencyGraph& graph, const std::vector<int>& district) {
    double px = 0.0, py = 0.0, pop = 0.0;
    for (int b : district) {
        const double p = static_cast<double>(graph.block(b).population);
        px += p * graph.block(b).x;
        py += p * graph.block(b).y;
        pop += p;
    }
    if (pop <= 0.0) return 0.0;
    const double cx = px / pop, cy = py / pop;
    double walk = 0.0;
    for (int b : district) {
        const double dx = graph.block(b).x - cx, dy = graph.block(b).y - cy;
        walk += static_cast<double>(graph.block(b).population) * std::sqrt(dx * dx + dy * dy);
    }
    return walk / pop;
}

double centralization(const AdjacencyGraph& graph, const Plan& plan) {
    double total = 0.0;
    for (const auto& d : plan) total += district_centralization(graph, d);
    return plan.empty() ? 0.0 : total / static_cast<double>(plan.size());
}

double district_roeck(const AdjacencyGraph& graph, const std::vector<int>& district) {
    double diam = 0.0;
    for (std::size_t i = 0; i < district.size(); ++i)
        for (std::size_t j = i + 1; j < district.size(); ++j)
            diam = std::max(diam, graph.distance(district[i], district[j]));
    if (diam <= 0.0) return 1.0;  // single block (or coincident centroids)
    double area = 0.0;
    for (int b : district) area += graph.block(b).area;
    const double r = diam / 2.0;
    return area / (M_PI * r * r);
}

double roeck(const AdjacencyGraph& graph, const Plan& plan) {
    double total = 0.0;
    for (const auto& d : plan) total += district_roeck(graph, d);
    return plan.empty() ? 0.0 : total / static_cast<double>(plan.size());
}

std::pair<int, double> cut_edges(const AdjacencyGraph& graph, const Plan& plan) {
    std::vector<int> district_of(graph.num_blocks(), -1);
    for (std::size_t d = 0; d < plan.size(); ++d)
        for (int b : plan[d]) district_of[b] = static_cast<int>(d);
    int total = 0;
    for (const auto& e : graph.edges())
        if (district_of[e.a] != district_of[e.b]) ++total;
    return {total, plan.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(plan.size())};
}

namespace {

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

}  // namespace

double conditional_entropy(const ColumnSet& columns, int num_blocks,
                           const PairSampleConfig& cfg) {
    if (columns.columns.size() < 2) throw ValidationError("need at least 2 columns");
    // per-block column membership counts
    std::vector<int> contains(num_blocks, 0);
    for (const auto& c : columns.columns)
        for (int b : c.block_ids) ++contains[b];
    std::vector<int> support;  // blocks appearing in at least one column
    for (int b = 0; b < num_blocks; ++b)
        if (contains[b] > 0) support.push_back(b);
    if (support.size() < 2) return 0.0;

    auto cooccur = [&](int i, int j) {
        int both = 0;
        for (const auto& c : columns.columns)
            if (c.blocks.test(i) && c.blocks.test(j)) ++both;
        return both;
    };

    const std::uint64_t all_pairs =
        static_cast<std::uint64_t>(support.size()) * (support.size() - 1);
    double sum = 0.0;
    std::uint64_t n = 0;
    if (all_pairs <= cfg.max_pairs) {
        for (int i : support)
            for (int j : support) {
                if (i == j) continue;
                const double p = static_cast<double>(cooccur(i, j)) / contains[j];
                sum += binary_entropy(p);
                ++n;
            }
    } else {
        Rng rng(cfg.seed);
        while (n < cfg.max_pairs) {
            const int i = support[rng.uniform_int(0, static_cast<int>(support.size()) - 1)];
            const int j = support[rng.uniform_int(0, static_cast<int>(support.size()) - 1)];
            if (i == j) continue;
            const double p = static_cast<double>(cooccur(i, j)) / contains[j];
            sum += binary_entropy(p);
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

double average_district_similarity(const ColumnSet& columns, int k,
                                   const PairSampleConfig& cfg) {
    const int nc = static_cast<int>(columns.columns.size());
    if (nc < 2) throw ValidationError("need at least 2 columns");
    auto jaccard = [&](int a, int b) {
        const int inter = columns.columns[a].blocks.intersection_count(columns.columns[b].blocks);
        const int uni = columns.columns[a].blocks.count() + columns.columns[b].blocks.count() - inter;
        return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
    };
    const std::uint64_t all_pairs = static_cast<std::uint64_t>(nc) * (nc - 1) / 2;
    double sum = 0.0;
    std::uint64_t n = 0;
    if (all_pairs <= cfg.max_pairs) {
        for (int a = 0; a < nc; ++a)
            for (int b = a + 1; b < nc; ++b) {
                sum += jaccard(a, b);
                ++n;
            }
    } else {
        Rng rng(cfg.seed);
        while (n < cfg.max_pairs) {
            const int a = static_cast<int>(rng.uniform_int(0, nc - 1));
            const int b = static_cast<int>(rng.uniform_int(0, nc - 1));
            if (a == b) continue;
            sum += jaccard(a, b);
            ++n;
        }
    }
    return (sum / static_cast<double>(n)) * static_cast<double>(k);
}

SvdRankRatios svd_rank_ratios(const BlockDistrictMatrix& A) {
    if (A.rows == 0 || A.cols == 0) throw ValidationError("empty matrix");
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(A.rows, A.cols);
    for (int j = 0; j < A.cols; ++j)
        for (int b : A.col_blocks[j]) M(b, j) = 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    const auto& s = svd.singularValues();
    const double smax = s.size() > 0 ? s(0) : 0.0;
    if (smax <= 0.0) throw ValidationError("zero matrix");
    const double rank_tol = std::max(A.rows, A.cols) * smax * 1e-12;
    int rank = 0;
    double energy = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        if (s(i) > rank_tol) ++rank;
        energy += s(i) * s(i);
    }
    auto ratio_for = [&](double frac) {
        double acc = 0.0;
        for (int i = 0; i < s.size(); ++i) {
            acc += s(i) * s(i);
            if (acc >= frac * energy - 1e-12) return static_cast<double>(i + 1) / rank;
        }
        return 1.0;
    };
    return {ratio_for(0.5), ratio_for(0.99)};
}

double lambda2(const ColumnSet& columns, int num_blocks) {
    const int nc = static_cast<int>(columns.columns.size());
    if (nc == 0) throw ValidationError("no columns");
    // co-occurrence weights: fraction of columns containing both blocks
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(num_blocks, num_blocks);
    for (const auto& c : columns.columns) {
        const auto& ids = c.block_ids;
        for (std::size_t a = 0; a < ids.size(); ++a)
            for (std::size_t b = a + 1; b < ids.size(); ++b) {
                W(ids[a], ids[b]) += 1.0;
                W(ids[b], ids[a]) += 1.0;
            }
    }
    W /= static_cast<double>(nc);
    std::vector<int> keep;
    for (int i = 0; i < num_blocks; ++i)
        if (W.row(i).sum() > 0.0) keep.push_back(i);
    if (keep.size() < 2) throw ValidationError("fewer than 2 non-isolated blocks");
    const int n = static_cast<int>(keep.size());
    Eigen::MatrixXd Wk(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) Wk(i, j) = W(keep[i], keep[j]);
    Eigen::VectorXd d = Wk.rowwise().sum();
    Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (d(i) > 0.0 && d(j) > 0.0) L(i, j) -= Wk(i, j) / std::sqrt(d(i) * d(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
    return es.eigenvalues()(1);
}

namespace {

LinearPlanObjective leaf_costs_from(const SampleTree& tree,
                                    const std::function<double(const TreeNode&)>& f, Sense sense) {
    LinearPlanObjective obj;
    obj.sense = sense;
    obj.leaf_cost.assign(tree.nodes.size(), 0.0);
    for (const auto& n : tree.nodes)
        if (n.is_leaf() && n.status != NodeStatus::Dead) obj.leaf_cost[n.id] = f(n);
    return obj;
}

}  // namespace

double mcd(const SampleTree& tree, const AdjacencyGraph& graph) {
    auto cost = [&](const TreeNode& n) {
        return 0.5 * static_cast<double>(district_boundary_edges(graph, n.region));
    };
    const auto lo = tree_dp(tree, leaf_costs_from(tree, cost, Sense::Min));
    const auto hi = tree_dp(tree, leaf_costs_from(tree, cost, Sense::Max));
    if (lo.value <= 0.0) return 1.0;
    return hi.value / lo.value;
}

double esr(const SampleTree& tree, const AdjacencyGraph& graph, const ElectionReturns& returns) {
    auto cost = [&](const TreeNode& n) {
        return win_probability(district_stats(graph, returns, n.region));
    };
    const auto lo = tree_dp(tree, leaf_costs_from(tree, cost, Sense::Min));
    const auto hi = tree_dp(tree, leaf_costs_from(tree, cost, Sense::Max));
    return hi.value - lo.value;
}

std::optional<double> spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw ValidationError("spearman_rho needs equal-length inputs of size >= 3");
    auto ranks = [](const std::vector<double>& v) {
        const int n = static_cast<int>(v.size());
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a] < v[b]; });
        std::vector<double> r(n, 0.0);
        int i = 0;
        while (i < n) {
            int j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double mid = (i + j) / 2.0 + 1.0;  // midrank, 1-based
            for (int t = i; t <= j; ++t) r[order[t]] = mid;
            i = j + 1;
        }
        return r;
    };
    const auto rx = ranks(xs), ry = ranks(ys);
    const int n = static_cast<int>(xs.size());
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;  // constant input
    return sxy / std::sqrt(sxx * syy);
}

bool responsiveness_feasible(const SampleTree& tree, const AdjacencyGraph& graph,
                             const ElectionReturns& returns, double r) {
    auto cost = [&](const TreeNode& n) {
        return win_probability(district_stats(graph, returns, n.region));
    };
    const auto lo = tree_dp(tree, leaf_costs_from(tree, cost, Sense::Min));
    const auto hi = tree_dp(tree, leaf_costs_from(tree, cost, Sense::Max));
    const double target =
        seat_vote_target(SeatVoteCurve::with_responsiveness(r), returns.statewide_mean) *
        tree.config.k;
    return target >= lo.value && target <= hi.value;
}

EnsembleMetrics ensemble_metrics(const SampleTree& tree, const AdjacencyGraph& graph,
                                 const ElectionReturns& returns, const ColumnSet& columns,
                                 const PairSampleConfig& cfg) {
    EnsembleMetrics m;
    m.leverage = leverage(tree);
    m.pct_infeasible = tree.attempts == 0
                           ? 0.0
                           : 100.0 * static_cast<double>(tree.infeasible) /
                                 static_cast<double>(tree.attempts);
    m.pct_duplicates = 100.0 * columns.duplicate_rate;
    if (columns.columns.size() >= 2) {
        m.conditional_entropy = conditional_entropy(columns, tree.num_blocks, cfg);
        m.ads = average_district_similarity(columns, tree.config.k, cfg);
        const auto A = block_district_matrix(columns, tree.num_blocks);
        const auto ratios = svd_rank_ratios(A);
        m.sigma50 = ratios.sigma50;
        m.sigma99 = ratios.sigma99;
        m.lambda2 = lambda2(columns, tree.num_blocks);
    }
    double walk = 0.0;
    for (const auto& c : columns.columns) walk += district_centralization(graph, c.block_ids);
    m.mu_walk_km = columns.columns.empty() ? 0.0 : walk / static_cast<double>(columns.columns.size());
    m.mcd = mcd(tree, graph);
    m.esr = esr(tree, graph, returns);
    return m;
}

}  // namespace shp
