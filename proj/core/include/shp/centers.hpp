#pragma once

#include <vector>

#include "shp/graph.hpp"
#include "shp/rng.hpp"

namespace shp {

enum class CenterMethod {
    FixedCenter,
    ParetoPerturbation,
    FixedPlusPareto,
    RandomIterative,
    UniformRandom
};

enum class WeightKind { Voronoi, Fractional };
enum class CapacityMode { Compute, Match };

struct CenterConfig {
    CenterMethod method = CenterMethod::FixedPlusPareto;
    WeightKind weight_kind = WeightKind::Voronoi;
    CapacityMode capacity_mode = CapacityMode::Match;
    int z_min = 2;
    int z_max = 5;
    double alpha_pareto = 1.0;
    double disparity_cap = 2.0;  // max capacity <= cap * min capacity
};

struct CenterSet {
    std::vector<int> blocks;      // distinct block ids within the region
    std::vector<int> capacities;  // s_i >= 1, summing to the parent capacity

    int size() const { return static_cast<int>(blocks.size()); }
};

// Uniform split size on [z_min, min(s, z_max)].
int sample_split_size(int s, const CenterConfig& config, Rng& rng);

// Uniform over compositions of s into z positive parts with
// max <= disparity_cap * min; falls back to the balanced composition
// after 1000 rejected draws.
std::vector<int> sample_capacities(int s, int z, const CenterConfig& config, Rng& rng);

// z distinct block ids. Random-iterative needs the sampled capacities
// (in order) and the ideal district population.
std::vector<int> select_centers(const AdjacencyGraph& graph, const std::vector<int>& region,
                                int z, const CenterConfig& config, Rng& rng,
                                const std::vector<int>* capacities = nullptr,
                                double ideal_population = 0.0);

struct Point {
    double x = 0.0, y = 0.0;
};

// Lloyd's algorithm on weighted points; init samples z distinct points with
// probability proportional to weight; runs to an assignment fixed point
// (or 100 iterations); empty clusters steal the farthest point of the
// largest cluster.
std::vector<Point> weighted_kmeans(const std::vector<Point>& points,
                                   const std::vector<double>& weights, int z, Rng& rng);

// Ideal fractional capacities w = (A p) / p_hat with A either the Voronoi
// indicator or inverse-squared-distance fractions. Distance ties go to the
// lower center index.
std::vector<double> capacity_weights(const AdjacencyGraph& graph, const std::vector<int>& region,
                                     const std::vector<int>& centers, WeightKind kind,
                                     double ideal_population);

// Integer capacities per center. Match pairs sorted ideals with sorted
// samples; Compute solves the L1 apportionment (floor plus largest
// remainder, ties to the lower center index).
std::vector<int> assign_capacities(const std::vector<double>& ideal,
                                   const std::vector<int>& sampled, CapacityMode mode);

}  // namespace shp
