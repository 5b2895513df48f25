#pragma once

#include <optional>
#include <vector>

#include "shp/elections.hpp"
#include "shp/graph.hpp"
#include "shp/optimize.hpp"
#include "shp/tree.hpp"

namespace shp {

using Plan = std::vector<std::vector<int>>;  // k districts of block ids

struct PlanMetrics {
    double centralization_km = 0.0;
    double roeck = 0.0;
    int cut_edges_total = 0;
    double cut_edges_mean = 0.0;  // total / k
    double expected_seat_share = 0.0;
    double seat_gap_proxy = 0.0;  // |sum c_j| / k
    double expected_seat_swaps = 0.0;
};

// Edges leaving a district; a plan's cut total is half the sum over districts.
int district_boundary_edges(const AdjacencyGraph& graph, const std::vector<int>& district);

// Population-weighted mean walk to the district's population-weighted centroid.
double district_centralization(const AdjacencyGraph& graph, const std::vector<int>& district);

double centralization(const AdjacencyGraph& graph, const Plan& plan);

// Area over circumscribing circle, diameter approximated by the max pairwise
// centroid distance; single-block districts score 1 by convention.
double district_roeck(const AdjacencyGraph& graph, const std::vector<int>& district);
double roeck(const AdjacencyGraph& graph, const Plan& plan);

std::pair<int, double> cut_edges(const AdjacencyGraph& graph, const Plan& plan);

struct PairSampleConfig {
    std::size_t max_pairs = 100000;
    std::uint64_t seed = 12345;
};

// Mean binary conditional entropy of block co-occurrence over sampled
// (i, j) pairs with support.
double conditional_entropy(const ColumnSet& columns, int num_blocks,
                           const PairSampleConfig& cfg = {});

// Mean pairwise Jaccard similarity of columns, times k.
double average_district_similarity(const ColumnSet& columns, int k,
                                   const PairSampleConfig& cfg = {});

// Frobenius-energy rank ratios of the block-district matrix.
struct SvdRankRatios {
    double sigma50 = 1.0;
    double sigma99 = 1.0;
};
SvdRankRatios svd_rank_ratios(const BlockDistrictMatrix& A);

// Second-smallest eigenvalue of the normalized Laplacian of the block
// co-occurrence graph; isolated blocks are dropped.
double lambda2(const ColumnSet& columns, int num_blocks);

// Max/min cut-edge plans over the whole tree via the DP.
double mcd(const SampleTree& tree, const AdjacencyGraph& graph);

// DP max minus min of the summed district win probabilities.
double esr(const SampleTree& tree, const AdjacencyGraph& graph, const ElectionReturns& returns);

// Spearman rank correlation with midrank ties; nullopt when either input is
// constant (undefined).
std::optional<double> spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys);

// Whether the DP seat-total range contains the target implied by a
// responsiveness-r curve (closed interval).
bool responsiveness_feasible(const SampleTree& tree, const AdjacencyGraph& graph,
                             const ElectionReturns& returns, double r);

struct EnsembleMetrics {
    double leverage = 0.0;
    double pct_infeasible = 0.0;
    double pct_duplicates = 0.0;
    double conditional_entropy = 0.0;
    double ads = 0.0;
    double sigma50 = 1.0;
    double sigma99 = 1.0;
    double lambda2 = 0.0;
    double mu_walk_km = 0.0;  // mean column centralization
    double mcd = 1.0;
    double esr = 0.0;
};

EnsembleMetrics ensemble_metrics(const SampleTree& tree, const AdjacencyGraph& graph,
                                 const ElectionReturns& returns, const ColumnSet& columns,
                                 const PairSampleConfig& cfg = {});

}  // namespace shp
