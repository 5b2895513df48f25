#include <doctest.h>

#include <algorithm>

#include "shp/instance.hpp"

using namespace shp;

namespace {

const char* kPathInstance = R"({
  "blocks": [
    {"id": 0, "population": 10, "x": 0.0, "y": 0.0, "area": 1.0},
    {"id": 1, "population": 20, "x": 1.0, "y": 0.0, "area": 1.0},
    {"id": 2, "population": 30, "x": 2.0, "y": 0.0, "area": 1.0}
  ],
  "edges": [[0, 1], [1, 2]],
  "elections": {"e0": [0.4, 0.5, 0.6], "e1": [0.5, 0.5, 0.5]}
})";

}  // namespace

TEST_CASE("load 3-block path instance") {
    auto inst = parse_instance(kPathInstance);
    CHECK(inst.graph.num_blocks() == 3);
    CHECK(inst.graph.edges().size() == 2);
    CHECK(inst.graph.total_population() == 60);
    CHECK(inst.returns.num_elections() == 2);
    // population-weighted: e0 mean = (10*.4+20*.5+30*.6)/60 = 0.5333...
    CHECK(inst.returns.statewide_mean == doctest::Approx((0.53333333333333333 + 0.5) / 2));
}

TEST_CASE("disconnected instance is repaired to one component") {
    const char* text = R"({
      "blocks": [
        {"id": 0, "population": 1, "x": 0, "y": 0, "area": 1},
        {"id": 1, "population": 1, "x": 1, "y": 0, "area": 1},
        {"id": 2, "population": 1, "x": 9, "y": 0, "area": 1}
      ],
      "edges": [[0, 1]],
      "elections": {}
    })";
    auto inst = parse_instance(text);
    CHECK(components(inst.graph).size() == 1);
    int synthetic = 0;
    for (const auto& e : inst.graph.edges()) synthetic += e.synthetic ? 1 : 0;
    CHECK(synthetic == 1);
}

TEST_CASE("schema violations name the problem") {
    CHECK_THROWS_WITH_AS(parse_instance("{\"edges\": []}"),
                         doctest::Contains("blocks"), ValidationError);
    const char* neg = R"({"blocks": [{"id":0,"population":-3,"x":0,"y":0,"area":1},
                                     {"id":1,"population":1,"x":1,"y":0,"area":1},
                                     {"id":2,"population":1,"x":2,"y":0,"area":1},
                                     {"id":3,"population":1,"x":3,"y":0,"area":1}],
                          "edges": [[0,1],[1,2],[2,3]]})";
    CHECK_THROWS_WITH_AS(parse_instance(neg), doctest::Contains("negative population"),
                         ValidationError);
    const char* dup = R"({"blocks": [{"id":0,"population":1,"x":0,"y":0,"area":1},
                                     {"id":0,"population":1,"x":1,"y":0,"area":1}],
                          "edges": []})";
    CHECK_THROWS_WITH_AS(parse_instance(dup), doctest::Contains("duplicate block id"),
                         ValidationError);
}

TEST_CASE("instance round trip") {
    auto inst = parse_instance(kPathInstance);
    auto text = instance_to_json(inst);
    auto again = parse_instance(text);
    CHECK(again.graph.num_blocks() == inst.graph.num_blocks());
    CHECK(again.graph.total_population() == inst.graph.total_population());
    CHECK(again.returns.share == inst.returns.share);
}

TEST_CASE("synthetic state") {
    SUBCASE("degenerate 2x2 grid without urban centers") {
        auto inst = synthetic_state(2, 2, 0, 42);
        CHECK(inst.graph.num_blocks() == 4);
        CHECK(inst.graph.edges().size() == 4);
        for (const auto& b : inst.graph.blocks()) CHECK(b.population == inst.graph.block(0).population);
    }
    SUBCASE("determinism: same seed, identical instance") {
        auto a = synthetic_state(6, 5, 2, 7);
        auto b = synthetic_state(6, 5, 2, 7);
        CHECK(instance_to_json(a) == instance_to_json(b));
        auto c = synthetic_state(6, 5, 2, 8);
        CHECK(instance_to_json(a) != instance_to_json(c));
    }
    SUBCASE("20x20 with urban centers: populations positive, connected, shares in range") {
        auto inst = synthetic_state(20, 20, 2, 7);
        CHECK(components(inst.graph).size() == 1);
        for (const auto& b : inst.graph.blocks()) CHECK(b.population > 0);
        for (const auto& e : inst.returns.share)
            for (double s : e) {
                CHECK(s >= 0.0);
                CHECK(s <= 1.0);
            }
        // urban blocks lean more Democratic than the rural corner blocks
        CHECK(inst.returns.num_elections() >= 2);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(synthetic_state(1, 2, 0, 1), ValidationError);
        CHECK_THROWS_AS(synthetic_state(4, 4, -1, 1), ValidationError);
    }
}
