#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "shp/instance.hpp"
#include "shp/tree.hpp"

using namespace shp;
using namespace shp::testing;

TEST_CASE("count_plans on structural trees") {
    TreeFactory f;
    SUBCASE("leaf counts as one plan") {
        auto t = f.binary(2, 1);
        // root with one sample of two leaves: P = 1
        CHECK(count_plans(t).decimal == "1");
        CHECK(count_plans(t, t.nodes[0].samples[0][0]).decimal == "1");
    }
    SUBCASE("two samples of leaf pairs give two plans") {
        auto t = f.binary(2, 2);
        CHECK(count_plans(t).decimal == "2");
    }
    SUBCASE("binary trees are tight at w^(k-1)") {
        for (int w : {2, 3}) {
            for (int k : {4, 8}) {
                auto t = f.binary(k, w);
                const auto c = count_plans(t);
                REQUIRE(c.fits_u64);
                std::uint64_t expect = 1;
                for (int i = 0; i < k - 1; ++i) expect *= static_cast<std::uint64_t>(w);
                CHECK(c.u64 == expect);
            }
        }
    }
    SUBCASE("theorem bracket for mixed splits") {
        TreeFactory f2;
        for (int w : {2, 3}) {
            for (int k : {4, 8}) {
                const int z = 3;
                auto t = f2.make(
                    k, [w](int) { return w; },
                    [](int s, Rng&) {
                        // z' in [2, 3], as large as capacity allows
                        if (s == 2) return std::vector<int>{1, 1};
                        if (s == 3) return std::vector<int>{1, 1, 1};
                        if (s == 4) return std::vector<int>{2, 1, 1};
                        return std::vector<int>{s - s / 2 - s / 4, s / 2, s / 4};
                    });
                const auto c = count_plans(t);
                REQUIRE(c.fits_u64);
                // exact integer bracket: lower bound compared via powers
                // w^{(k-1)/(z-1)} <= P  <=>  w^{k-1} <= P^{z-1}
                std::uint64_t wk1 = 1;
                for (int i = 0; i < k - 1; ++i) wk1 *= static_cast<std::uint64_t>(w);
                long double p_pow = 1.0L;
                for (int i = 0; i < z - 1; ++i) p_pow *= static_cast<long double>(c.u64);
                CHECK(p_pow >= static_cast<long double>(wk1));
                CHECK(c.u64 <= wk1);
            }
        }
    }
    SUBCASE("open node errors") {
        auto t = f.binary(4, 2);
        t.nodes[1].status = NodeStatus::Open;
        CHECK_THROWS_AS(count_plans(t), ValidationError);
    }
}

TEST_CASE("enumeration equals the count") {
    TreeFactory f;
    SUBCASE("height-1 tree with 3 root samples") {
        auto t = f.binary(2, 3);
        std::uint64_t n = 0;
        enumerate_plans(t, 100, [&](const std::vector<int>& leaves) {
            CHECK(leaves.size() == 2);
            ++n;
            return true;
        });
        CHECK(n == 3);
    }
    SUBCASE("plans cover every block exactly once") {
        auto t = f.random_tree(6, 3, 17);
        enumerate_plans(t, 1000000, [&](const std::vector<int>& leaves) {
            std::vector<int> seen(t.num_blocks, 0);
            for (int leaf : leaves)
                for (int b : t.nodes[leaf].region) ++seen[b];
            for (int c : seen) CHECK(c == 1);
            return true;
        });
    }
    SUBCASE("50 random trees: enumerated length equals count_plans") {
        for (std::uint64_t seed = 1; seed <= 50; ++seed) {
            auto t = f.random_tree(4 + seed % 5, 3, seed);
            const auto c = count_plans(t);
            REQUIRE(c.fits_u64);
            if (c.u64 > 10000) continue;
            std::uint64_t n = 0;
            enumerate_plans(t, 10000, [&](const std::vector<int>&) {
                ++n;
                return true;
            });
            CHECK(n == c.u64);
        }
    }
    SUBCASE("limit errors point to pruning") {
        auto t = f.binary(8, 3);  // 3^7 = 2187 plans
        CHECK_THROWS_WITH_AS(enumerate_plans(t, 10, [](const std::vector<int>&) { return true; }),
                             doctest::Contains("prune"), ValidationError);
    }
    SUBCASE("visitor can stop early") {
        auto t = f.binary(4, 3);
        std::uint64_t n = 0;
        enumerate_plans(t, 100, [&](const std::vector<int>&) { return ++n < 5; });
        CHECK(n == 5);
    }
}

TEST_CASE("collect_columns dedups within root partitions") {
    TreeFactory f;
    auto g = grid_graph(16, 16);  // block ids cover factory regions (quantum 64 * k)
    SUBCASE("distinct leaves have zero duplicate rate") {
        auto t = f.binary(4, 2);
        auto cols = collect_columns(t, g);
        CHECK(cols.total_leaves == t.alive_leaves());
        CHECK(cols.duplicate_rate == doctest::Approx(0.0));
        for (const auto& c : cols.columns) CHECK(c.population > 0);
    }
    SUBCASE("forced duplicate sibling samples merge within a root partition") {
        auto t = f.binary(4, 2);
        // duplicate the two samples of one internal capacity-2 node
        const int internal = t.nodes[0].samples[0][0];
        REQUIRE(t.nodes[internal].capacity == 2);
        const auto s0 = t.nodes[internal].samples[0];
        const auto s1 = t.nodes[internal].samples[1];
        t.nodes[s1[0]].region = t.nodes[s0[0]].region;
        t.nodes[s1[1]].region = t.nodes[s0[1]].region;
        auto cols = collect_columns(t, g);
        CHECK(cols.total_leaves == 16);
        CHECK(cols.columns.size() == 14);  // two leaves merged away
        CHECK(cols.duplicate_rate == doctest::Approx(2.0 / 16.0));
    }
    SUBCASE("identical leaves across root partitions stay separate") {
        auto t = f.binary(2, 2);
        // rotate-by-one makes them distinct; force them equal instead
        const auto s0 = t.nodes[0].samples[0];
        const auto s1 = t.nodes[0].samples[1];
        // both samples are root partitions (root children): root_partition differs
        REQUIRE(t.nodes[s0[0]].root_partition != t.nodes[s1[0]].root_partition);
        t.nodes[s1[0]].region = t.nodes[s0[0]].region;
        t.nodes[s1[1]].region = t.nodes[s0[1]].region;
        auto cols = collect_columns(t, g);
        CHECK(cols.columns.size() == 4);
        CHECK(cols.duplicate_rate == doctest::Approx(0.0));
    }
}

TEST_CASE("prune_tree") {
    TreeFactory f;
    SUBCASE("target at or above the count leaves the tree unchanged") {
        auto t = f.binary(4, 3);  // 27 plans
        auto pruned = prune_tree(t, 27);
        CHECK(count_plans(pruned).decimal == "27");
        CHECK(pruned.nodes.size() == t.nodes.size());
    }
    SUBCASE("target 1 prunes to the floor: every node keeps one sample") {
        auto t = f.binary(4, 3);
        auto pruned = prune_tree(t, 1);
        CHECK(count_plans(pruned).decimal == "1");
        for (const auto& n : pruned.nodes)
            if (!n.is_leaf()) CHECK(n.samples.size() == 1);
    }
    SUBCASE("random trees prune to the target unless the floor hits first") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            auto t = f.random_tree(6, 3, seed);
            const auto before = count_plans(t);
            REQUIRE(before.fits_u64);
            const std::uint64_t target = 1 + seed * 7 % 97;
            auto pruned = prune_tree(t, target);
            const auto after = count_plans(pruned);
            REQUIRE(after.fits_u64);
            bool at_floor = true;
            for (const auto& n : pruned.nodes)
                if (!n.is_leaf() && n.samples.size() > 1) at_floor = false;
            if (!at_floor) CHECK(after.u64 <= target);
            CHECK(after.u64 <= before.u64);
            // enumeration agrees after pruning
            std::uint64_t count = 0;
            enumerate_plans(pruned, after.u64, [&](const std::vector<int>&) {
                ++count;
                return true;
            });
            CHECK(count == after.u64);
        }
    }
    SUBCASE("low capacities are pruned before high ones") {
        auto t = f.binary(8, 3);
        auto pruned = prune_tree(t, 200);
        // with the target still above 27 = 3^3, capacity-2 nodes must be
        // exhausted before any capacity-4 node loses a sample
        bool cap2_all_single = true;
        for (const auto& n : pruned.nodes)
            if (!n.is_leaf() && n.capacity == 2 && n.samples.size() > 1) cap2_all_single = false;
        bool cap4_touched = false;
        for (const auto& n : pruned.nodes)
            if (n.capacity == 4 && !n.is_leaf() && n.samples.size() < 3) cap4_touched = true;
        if (cap4_touched) CHECK(cap2_all_single);
    }
}

TEST_CASE("leverage") {
    TreeFactory f;
    SUBCASE("k=2 single sample is log10(1/2)") {
        auto t = f.binary(2, 1);
        CHECK(leverage(t) == doctest::Approx(std::log10(0.5)));
    }
    SUBCASE("duplicates collapse in the denominator") {
        auto t = f.binary(2, 2);
        const auto s0 = t.nodes[0].samples[0];
        const auto s1 = t.nodes[0].samples[1];
        t.nodes[s1[0]].region = t.nodes[s0[0]].region;
        t.nodes[s1[1]].region = t.nodes[s0[1]].region;
        // 2 plans over 2 distinct districts
        CHECK(leverage(t) == doctest::Approx(0.0));
    }
}

TEST_CASE("generate_tree on a small grid") {
    auto inst = synthetic_state(6, 6, 1, 3);
    auto spec = ProblemSpec::make(inst.graph, 4, 0.05);
    TreeConfig cfg;
    cfg.w_root = 3;
    cfg.w = 2;
    cfg.seed = 11;
    cfg.centers.z_min = 2;
    cfg.centers.z_max = 3;

    auto tree = generate_tree(inst.graph, spec, cfg);
    REQUIRE(tree.nodes[0].status == NodeStatus::Complete);
    CHECK(tree.nodes[0].samples.size() <= 3);
    CHECK(tree.successes > 0);
    CHECK(tree.attempts >= tree.successes);

    SUBCASE("regions partition their parents and leaves are balanced") {
        for (const auto& n : tree.nodes) {
            for (const auto& sample : n.samples) {
                std::vector<int> got;
                for (int child : sample) {
                    const auto& r = tree.nodes[child].region;
                    got.insert(got.end(), r.begin(), r.end());
                }
                std::sort(got.begin(), got.end());
                CHECK(got == n.region);
            }
            if (n.is_leaf()) {
                double pop = 0.0;
                for (int b : n.region) pop += static_cast<double>(inst.graph.block(b).population);
                CHECK(pop >= spec.ideal_population * (1 - spec.epsilon_p) - 1e-6);
                CHECK(pop <= spec.ideal_population * (1 + spec.epsilon_p) + 1e-6);
                CHECK(is_contiguous(inst.graph, n.region));
            }
        }
    }
    SUBCASE("determinism across runs and worker counts") {
        auto again = generate_tree(inst.graph, spec, cfg);
        REQUIRE(again.nodes.size() == tree.nodes.size());
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            CHECK(again.nodes[i].region == tree.nodes[i].region);
            CHECK(again.nodes[i].samples == tree.nodes[i].samples);
        }
        TreeConfig par = cfg;
        par.parallelism = 4;
        auto wide = generate_tree(inst.graph, spec, par);
        REQUIRE(wide.nodes.size() == tree.nodes.size());
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            CHECK(wide.nodes[i].region == tree.nodes[i].region);
            CHECK(wide.nodes[i].samples == tree.nodes[i].samples);
        }
    }
    SUBCASE("k=2 trees have height one") {
        auto spec2 = ProblemSpec::make(inst.graph, 2, 0.05);
        TreeConfig cfg2 = cfg;
        cfg2.k = 2;
        auto t2 = generate_tree(inst.graph, spec2, cfg2);
        for (const auto& sample : t2.nodes[0].samples) {
            CHECK(sample.size() == 2);
            for (int child : sample) CHECK(t2.nodes[child].is_leaf());
        }
        CHECK(t2.alive_leaves() == 2 * static_cast<int>(t2.nodes[0].samples.size()));
    }
    SUBCASE("tree store round trip") {
        const auto path = std::filesystem::temp_directory_path() / "shp_tree_roundtrip.json";
        save_tree(tree, path.string());
        auto back = load_tree(path.string());
        REQUIRE(back.nodes.size() == tree.nodes.size());
        CHECK(count_plans(back).decimal == count_plans(tree).decimal);
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            CHECK(back.nodes[i].region == tree.nodes[i].region);
            CHECK(back.nodes[i].samples == tree.nodes[i].samples);
            CHECK(back.nodes[i].capacity == tree.nodes[i].capacity);
        }
        std::filesystem::remove(path);
    }
    SUBCASE("column store round trip") {
        auto cols = collect_columns(tree, inst.graph);
        const auto bin = std::filesystem::temp_directory_path() / "shp_cols.bin";
        const auto csv = std::filesystem::temp_directory_path() / "shp_cols.csv";
        save_columns(cols, tree.num_blocks, bin.string(), csv.string());
        auto back = load_columns(bin.string(), csv.string());
        REQUIRE(back.columns.size() == cols.columns.size());
        for (std::size_t i = 0; i < cols.columns.size(); ++i) {
            CHECK(back.columns[i].blocks == cols.columns[i].blocks);
            CHECK(back.columns[i].root_partition == cols.columns[i].root_partition);
            CHECK(back.columns[i].population == cols.columns[i].population);
        }
        std::filesystem::remove(bin);
        std::filesystem::remove(csv);
    }
}
