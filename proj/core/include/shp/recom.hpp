#pragma once

#include <cstdint>
#include <vector>

#include "shp/graph.hpp"
#include "shp/rng.hpp"

namespace shp {

struct ChainState {
    std::vector<std::vector<int>> plan;  // k districts, sorted block ids
    long steps = 0;
    long accepted = 0;
    long rejected_trees = 0;   // spanning trees with no balanced cut
    long resampled_pairs = 0;  // district pairs abandoned after the retry budget
};

// One recombination move: merge a random adjacent district pair, draw a
// uniform spanning tree (Wilson), cut a uniformly chosen balanced edge.
// Pairs with no balanced cut after `tree_retries` trees are resampled.
ChainState recom_step(const AdjacencyGraph& graph, const ChainState& state,
                      const ProblemSpec& spec, Rng& rng, int tree_retries = 50);

struct ChainRun {
    std::vector<std::vector<std::vector<int>>> plans;  // recorded every step
    ChainState final_state;
    int distinct_districts = 0;
    double leverage = 0.0;  // log10(plans / distinct districts)
};

ChainRun run_chain(const AdjacencyGraph& graph, const std::vector<std::vector<int>>& initial_plan,
                   long steps, const ProblemSpec& spec, std::uint64_t seed);

// Full PDP feasibility: exact cover, contiguity, population within
// p_hat * (1 +- epsilon_p).
bool plan_feasible(const AdjacencyGraph& graph, const ProblemSpec& spec,
                   const std::vector<std::vector<int>>& plan);

// Stripes along the longer grid axis; a convenient feasible starting plan
// for uniform-population grids.
std::vector<std::vector<int>> stripe_plan(const AdjacencyGraph& graph, int k, int width,
                                          int height);

}  // namespace shp
