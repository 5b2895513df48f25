#include "shp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "shp/rng.hpp"

namespace shp {

using nlohmann::json;

Instance parse_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("instance parse error: ") + e.what());
    }
    if (!j.contains("blocks") || !j["blocks"].is_array())
        throw ValidationError("instance parse error: missing or non-array field 'blocks'");
    if (!j.contains("edges") || !j["edges"].is_array())
        throw ValidationError("instance parse error: missing or non-array field 'edges'");

    const auto& jb = j["blocks"];
    const int n = static_cast<int>(jb.size());
    std::vector<Block> blocks(n);
    std::vector<bool> seen(n, false);
    for (const auto& b : jb) {
        for (const char* f : {"id", "population", "x", "y", "area"})
            if (!b.contains(f))
                throw ValidationError(std::string("instance parse error: block missing field '") + f + "'");
        const int id = b["id"].get<int>();
        if (id < 0 || id >= n)
            throw ValidationError("block id " + std::to_string(id) + " out of dense range 0.." + std::to_string(n - 1));
        if (seen[id]) throw ValidationError("duplicate block id " + std::to_string(id));
        seen[id] = true;
        const auto pop = b["population"].get<std::int64_t>();
        if (pop < 0) throw ValidationError("negative population at block " + std::to_string(id));
        blocks[id] = {id, pop, b["x"].get<double>(), b["y"].get<double>(), b["area"].get<double>()};
    }

    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError("instance parse error: field 'edges' entries must be [a, b] pairs");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }

    Instance inst;
    inst.graph = connect_components(AdjacencyGraph(std::move(blocks), edges));

    if (j.contains("elections")) {
        if (!j["elections"].is_object())
            throw ValidationError("instance parse error: field 'elections' must be an object");
        // sort names for a stable order independent of JSON object layout
        std::vector<std::string> names;
        for (auto it = j["elections"].begin(); it != j["elections"].end(); ++it) names.push_back(it.key());
        std::sort(names.begin(), names.end());
        for (const auto& name : names) {
            const auto& arr = j["elections"][name];
            if (!arr.is_array() || static_cast<int>(arr.size()) != n)
                throw ValidationError("election '" + name + "' must list one share per block");
            std::vector<double> shares(n);
            for (int i = 0; i < n; ++i) {
                shares[i] = arr[i].get<double>();
                if (shares[i] < 0.0 || shares[i] > 1.0)
                    throw ValidationError("election '" + name + "' share out of [0,1] at block " + std::to_string(i));
            }
            inst.returns.names.push_back(name);
            inst.returns.share.push_back(std::move(shares));
        }
    }
    if (!inst.returns.share.empty())
        inst.returns.statewide_mean =
            ElectionReturns::compute_statewide_mean(inst.graph, inst.returns.share);
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open instance file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_instance(ss.str());
}

std::string instance_to_json(const Instance& inst) {
    json j;
    j["blocks"] = json::array();
    for (const auto& b : inst.graph.blocks()) {
        j["blocks"].push_back({{"id", b.id},
                               {"population", b.population},
                               {"x", b.x},
                               {"y", b.y},
                               {"area", b.area}});
    }
    j["edges"] = json::array();
    for (const auto& e : inst.graph.edges())
        if (!e.synthetic) j["edges"].push_back({e.a, e.b});
    j["elections"] = json::object();
    for (int e = 0; e < inst.returns.num_elections(); ++e)
        j["elections"][inst.returns.names[e]] = inst.returns.share[e];
    return j.dump(2);
}

void save_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write instance file: " + path);
    out << instance_to_json(inst) << "\n";
}

Instance synthetic_state(int width, int height, int urban_centers, std::uint64_t seed) {
    if (width < 1 || height < 1 || width * height < 4)
        throw ValidationError("synthetic grid needs width*height >= 4");
    if (urban_centers < 0) throw ValidationError("urban_centers must be >= 0");

    Rng rng(hash_combine(seed, 0x5b1e5u));
    const int n = width * height;
    constexpr std::int64_t kBasePop = 1000;

    struct Bump {
        double x, y, sigma, amp, lean;
    };
    std::vector<Bump> bumps;
    const double span = static_cast<double>(std::min(width, height));
    for (int c = 0; c < urban_centers; ++c) {
        Bump b;
        b.x = rng.uniform(0.0, width);
        b.y = rng.uniform(0.0, height);
        // tract-like granularity: urban blocks carry more people, but never
        // a district-scale share of it
        b.sigma = rng.uniform(span / 8.0, span / 3.0);
        b.amp = static_cast<double>(kBasePop) * rng.uniform(0.6, 1.6);
        b.lean = rng.uniform(0.25, 0.45);
        bumps.push_back(b);
    }
    const double rural_share = rng.uniform(0.55, 0.70);

    std::vector<Block> blocks(n);
    std::vector<double> mean_share(n);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int id = y * width + x;
            const double cx = x + 0.5, cy = y + 0.5;
            double pop = static_cast<double>(kBasePop);
            double share = rural_share;
            for (const auto& b : bumps) {
                const double d2 = (cx - b.x) * (cx - b.x) + (cy - b.y) * (cy - b.y);
                const double g = std::exp(-d2 / (2.0 * b.sigma * b.sigma));
                pop += b.amp * g;
                share -= b.lean * g;
            }
            blocks[id] = {id, static_cast<std::int64_t>(std::llround(pop)), cx, cy, 1.0};
            mean_share[id] = std::clamp(share, 0.02, 0.98);
        }
    }

    std::vector<std::pair<int, int>> edges;
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const int id = y * width + x;
            if (x + 1 < width) edges.emplace_back(id, id + 1);
            if (y + 1 < height) edges.emplace_back(id, id + width);
        }
    }

    Instance inst;
    inst.graph = AdjacencyGraph(std::move(blocks), edges);

    constexpr int kElections = 4;
    for (int e = 0; e < kElections; ++e) {
        const double swing = rng.normal(0.0, 0.02);
        std::vector<double> shares(n);
        for (int i = 0; i < n; ++i)
            shares[i] = std::clamp(mean_share[i] + swing + rng.normal(0.0, 0.01), 0.01, 0.99);
        inst.returns.names.push_back("e" + std::to_string(e));
        inst.returns.share.push_back(std::move(shares));
    }
    inst.returns.statewide_mean =
        ElectionReturns::compute_statewide_mean(inst.graph, inst.returns.share);
    return inst;
}

}  // namespace shp
