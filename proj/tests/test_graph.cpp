#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "helpers.hpp"
#include "shp/graph.hpp"

using namespace shp;
using namespace shp::testing;

TEST_CASE("euclidean distance basics") {
    std::vector<Block> blocks{{0, 1, 0.0, 0.0, 1.0}, {1, 1, 3.0, 4.0, 1.0}, {2, 1, -1.0, 2.5, 1.0}};
    AdjacencyGraph g(std::move(blocks), {{0, 1}, {1, 2}});
    CHECK(g.distance(0, 0) == 0.0);
    CHECK(g.distance(0, 1) == doctest::Approx(5.0));
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const int i = static_cast<int>(rng.uniform_int(0, 2));
        const int j = static_cast<int>(rng.uniform_int(0, 2));
        CHECK(g.distance(i, j) == g.distance(j, i));
        CHECK(g.distance(i, j) >= 0.0);
    }
}

TEST_CASE("graph validation") {
    CHECK_THROWS_AS(AdjacencyGraph({{0, -5, 0, 0, 1}}, {}), ValidationError);
    CHECK_THROWS_AS(AdjacencyGraph({{1, 5, 0, 0, 1}}, {}), ValidationError);  // gap in ids
    std::vector<Block> two{{0, 1, 0, 0, 1}, {1, 1, 1, 0, 1}};
    CHECK_THROWS_AS(AdjacencyGraph(two, {{0, 0}}), ValidationError);  // self loop
    // duplicate edges collapse
    AdjacencyGraph g(two, {{0, 1}, {1, 0}, {0, 1}});
    CHECK(g.edges().size() == 1);
}

TEST_CASE("connect_components joins closest pairs") {
    SUBCASE("already connected is untouched") {
        auto g = path_graph({1, 1, 1});
        auto repaired = connect_components(g);
        CHECK(repaired.edges().size() == g.edges().size());
    }
    SUBCASE("two singletons") {
        AdjacencyGraph g({{0, 1, 0, 0, 1}, {1, 1, 5, 0, 1}}, {});
        auto repaired = connect_components(g);
        REQUIRE(repaired.edges().size() == 1);
        CHECK(repaired.edges()[0].synthetic);
    }
    SUBCASE("three singletons at x = 0, 1, 10 join nearest first") {
        AdjacencyGraph g({{0, 1, 0, 0, 1}, {1, 1, 1, 0, 1}, {2, 1, 10, 0, 1}}, {});
        auto repaired = connect_components(g);
        REQUIRE(repaired.edges().size() == 2);
        // brute force over pairwise distances says: (0,1) first, then {0,1}-{2} via block 1
        CHECK(repaired.edges()[0].a == 0);
        CHECK(repaired.edges()[0].b == 1);
        CHECK(repaired.edges()[1].a == 1);
        CHECK(repaired.edges()[1].b == 2);
        CHECK(components(repaired).size() == 1);
    }
    SUBCASE("idempotent and monotone") {
        AdjacencyGraph g({{0, 1, 0, 0, 1}, {1, 1, 2, 0, 1}, {2, 1, 7, 0, 1}}, {{0, 1}});
        auto once = connect_components(g);
        auto twice = connect_components(once);
        CHECK(once.edges().size() == twice.edges().size());
        for (const auto& e : g.edges()) CHECK(once.has_edge(e.a, e.b));
    }
    SUBCASE("empty graph errors") {
        AdjacencyGraph g;
        CHECK_THROWS_AS(connect_components(g), ValidationError);
    }
}

TEST_CASE("shortest paths on induced subgraphs") {
    SUBCASE("singleton region") {
        auto g = path_graph({1, 1, 1});
        auto d = shortest_path_distances(g, {1}, 1);
        REQUIRE(d.size() == 1);
        CHECK(d[0] == 0.0);
    }
    SUBCASE("unit path") {
        auto g = path_graph({1, 1, 1});
        auto d = shortest_path_distances(g, {0, 1, 2}, 0);
        CHECK(d[0] == doctest::Approx(0.0));
        CHECK(d[1] == doctest::Approx(1.0));
        CHECK(d[2] == doctest::Approx(2.0));
    }
    SUBCASE("source outside region errors") {
        auto g = path_graph({1, 1, 1});
        CHECK_THROWS_AS(shortest_path_distances(g, {0, 1}, 2), ValidationError);
    }
    SUBCASE("4-cycle with one long edge matches path enumeration") {
        // square with one stretched corner: exact geometry drives weights
        std::vector<Block> blocks{{0, 1, 0, 0, 1}, {1, 1, 1, 0, 1}, {2, 1, 1, 5, 1}, {3, 1, 0, 1, 1}};
        AdjacencyGraph g(std::move(blocks), {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
        const std::vector<int> region{0, 1, 2, 3};
        auto d = shortest_path_distances(g, region, 0);
        // brute force over all simple paths from 0
        auto w = [&](int a, int b) { return g.distance(a, b); };
        CHECK(d[1] == doctest::Approx(w(0, 1)));
        CHECK(d[3] == doctest::Approx(w(0, 3)));
        const double via1 = w(0, 1) + w(1, 2);
        const double via3 = w(0, 3) + w(3, 2);
        CHECK(d[2] == doctest::Approx(std::min(via1, via3)));
    }
    SUBCASE("region restriction: paths cannot leave the region") {
        auto g = path_graph({1, 1, 1});
        auto d = shortest_path_distances(g, {0, 2}, 0);
        CHECK(d[0] == 0.0);
        CHECK(d[1] == std::numeric_limits<double>::infinity());  // 2 unreachable without 1
    }
    SUBCASE("triangle inequality along tree edges") {
        auto g = grid_graph(5, 4);
        std::vector<int> region(20);
        std::iota(region.begin(), region.end(), 0);
        auto d = shortest_path_distances(g, region, 7);
        for (const auto& e : g.edges())
            CHECK(d[e.b] <= d[e.a] + g.distance(e.a, e.b) + 1e-12);
    }
}

namespace {
// independent union-find oracle
struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};
}  // namespace

TEST_CASE("is_contiguous agrees with union-find") {
    auto g = grid_graph(5, 5);
    CHECK(is_contiguous(g, {7}));
    CHECK_FALSE(is_contiguous(g, {0, 24}));
    CHECK_THROWS_AS(is_contiguous(g, {}), ValidationError);

    Rng rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<int> region;
        for (int b = 0; b < 25; ++b)
            if (rng.uniform() < 0.5) region.push_back(b);
        if (region.empty()) continue;

        UnionFind uf(25);
        for (const auto& e : g.edges()) {
            const bool a_in = std::find(region.begin(), region.end(), e.a) != region.end();
            const bool b_in = std::find(region.begin(), region.end(), e.b) != region.end();
            if (a_in && b_in) uf.unite(e.a, e.b);
        }
        std::set<int> roots;
        for (int b : region) roots.insert(uf.find(b));
        CHECK(is_contiguous(g, region) == (roots.size() == 1));
    }
}
