#pragma once

#include <string>
#include <vector>

#include "shp/graph.hpp"

namespace shp {

// Block-level two-party vote shares. Shares are Republican by convention
// (higher = more Republican); flip at load time to analyze the other party.
struct ElectionReturns {
    std::vector<std::string> names;            // election names, ordered
    std::vector<std::vector<double>> share;    // [election][block] in [0,1]
    double statewide_mean = 0.5;               // population-weighted, averaged over elections

    int num_elections() const { return static_cast<int>(names.size()); }

    // Population-weighted statewide mean share, averaged over elections.
    static double compute_statewide_mean(const AdjacencyGraph& g,
                                         const std::vector<std::vector<double>>& share);
};

struct DistrictStats {
    double mu = 0.0;     // mean district share over elections
    double sigma = 0.0;  // sample standard deviation (ddof 1)
    int dof = 1;         // degrees of freedom for the t CDF
};

enum class CurveKind { EfficiencyGap, Proportional, Responsiveness, Table };

// Monotone map from statewide vote-share to target seat-share, clipped to [0,1].
struct SeatVoteCurve {
    CurveKind kind = CurveKind::EfficiencyGap;
    double responsiveness = 2.0;  // used by CurveKind::Responsiveness
    // CurveKind::Table: piecewise-linear through (v, s) points sorted by v
    std::vector<std::pair<double, double>> table;

    static SeatVoteCurve efficiency_gap() { return {CurveKind::EfficiencyGap, 2.0, {}}; }
    static SeatVoteCurve proportional() { return {CurveKind::Proportional, 1.0, {}}; }
    static SeatVoteCurve with_responsiveness(double r) { return {CurveKind::Responsiveness, r, {}}; }
};

// Per-election population-weighted district share, then cross-election
// mean / sample std. Requires >= 2 elections.
DistrictStats district_stats(const AdjacencyGraph& graph, const ElectionReturns& returns,
                             const std::vector<int>& region);

// P(district share > 0.5) under a location-scale t model; degenerate sigma=0
// collapses to a step at mu = 0.5.
double win_probability(const DistrictStats& stats);

double seat_vote_target(const SeatVoteCurve& curve, double vote_share);

// MSP cost coefficient: target seat-share minus district win probability.
double district_cost(const AdjacencyGraph& graph, const ElectionReturns& returns,
                     const std::vector<int>& region, const SeatVoteCurve& curve);

// Mean win probability over a plan's districts.
double expected_seat_share(const AdjacencyGraph& graph, const ElectionReturns& returns,
                           const std::vector<std::vector<int>>& plan);

// Expected seats changing hands between consecutive independent elections:
// sum of 2 p (1-p) over districts.
double expected_seat_swaps(const std::vector<double>& win_probs);
double expected_seat_swaps(const AdjacencyGraph& graph, const ElectionReturns& returns,
                           const std::vector<std::vector<int>>& plan);

}  // namespace shp
