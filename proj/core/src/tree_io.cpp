#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "shp/tree.hpp"

namespace shp {

using nlohmann::json;

namespace {

const char* method_name(CenterMethod m) {
    switch (m) {
        case CenterMethod::FixedCenter: return "fixed-center";
        case CenterMethod::ParetoPerturbation: return "pareto-perturbation";
        case CenterMethod::FixedPlusPareto: return "fixed-plus-pareto";
        case CenterMethod::RandomIterative: return "random-iterative";
        case CenterMethod::UniformRandom: return "uniform-random";
    }
    return "fixed-plus-pareto";
}

CenterMethod method_from(const std::string& s) {
    if (s == "fixed-center") return CenterMethod::FixedCenter;
    if (s == "pareto-perturbation") return CenterMethod::ParetoPerturbation;
    if (s == "fixed-plus-pareto") return CenterMethod::FixedPlusPareto;
    if (s == "random-iterative") return CenterMethod::RandomIterative;
    if (s == "uniform-random") return CenterMethod::UniformRandom;
    throw ValidationError("unknown center method: " + s);
}

}  // namespace

json tree_config_to_json(const TreeConfig& c) {
    json j;
    j["k"] = c.k;
    j["epsilon_p"] = c.epsilon_p;
    j["w_root"] = c.w_root;
    j["w"] = c.w;
    j["max_samples"] = c.max_samples;
    j["seed"] = c.seed;
    json wbc = json::object();
    for (auto [cap, w] : c.width_by_capacity) wbc[std::to_string(cap)] = w;
    j["width_by_capacity"] = wbc;
    j["centers"] = {{"method", method_name(c.centers.method)},
                    {"weight_kind", c.centers.weight_kind == WeightKind::Voronoi ? "voronoi" : "fractional"},
                    {"capacity_mode", c.centers.capacity_mode == CapacityMode::Match ? "match" : "compute"},
                    {"z_min", c.centers.z_min},
                    {"z_max", c.centers.z_max},
                    {"alpha_pareto", c.centers.alpha_pareto},
                    {"disparity_cap", c.centers.disparity_cap}};
    j["solver"] = {{"max_nodes", c.solver.max_nodes}, {"max_seconds", c.solver.max_seconds}};
    return j;
}

TreeConfig tree_config_from_json(const json& j) {
    TreeConfig c;
    c.k = j.value("k", c.k);
    c.epsilon_p = j.value("epsilon_p", c.epsilon_p);
    c.w_root = j.value("w_root", c.w_root);
    c.w = j.value("w", c.w);
    c.max_samples = j.value("max_samples", c.max_samples);
    c.seed = j.value("seed", c.seed);
    if (j.contains("width_by_capacity"))
        for (auto it = j["width_by_capacity"].begin(); it != j["width_by_capacity"].end(); ++it)
            c.width_by_capacity[std::stoi(it.key())] = it.value().get<int>();
    if (j.contains("centers")) {
        const auto& jc = j["centers"];
        c.centers.method = method_from(jc.value("method", std::string("fixed-plus-pareto")));
        c.centers.weight_kind =
            jc.value("weight_kind", std::string("voronoi")) == "voronoi" ? WeightKind::Voronoi
                                                                         : WeightKind::Fractional;
        c.centers.capacity_mode =
            jc.value("capacity_mode", std::string("match")) == "match" ? CapacityMode::Match
                                                                       : CapacityMode::Compute;
        c.centers.z_min = jc.value("z_min", c.centers.z_min);
        c.centers.z_max = jc.value("z_max", c.centers.z_max);
        c.centers.alpha_pareto = jc.value("alpha_pareto", c.centers.alpha_pareto);
        c.centers.disparity_cap = jc.value("disparity_cap", c.centers.disparity_cap);
    }
    if (j.contains("solver")) {
        c.solver.max_nodes = j["solver"].value("max_nodes", c.solver.max_nodes);
        c.solver.max_seconds = j["solver"].value("max_seconds", c.solver.max_seconds);
    }
    return c;
}

void save_tree(const SampleTree& tree, const std::string& path) {
    json j;
    j["config"] = tree_config_to_json(tree.config);
    j["ideal_population"] = tree.ideal_population;
    j["num_blocks"] = tree.num_blocks;
    j["attempts"] = tree.attempts;
    j["successes"] = tree.successes;
    j["infeasible"] = tree.infeasible;
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
        if (n.status == NodeStatus::Dead) throw ValidationError("compact the tree before saving");
        json jn;
        jn["id"] = n.id;
        jn["parent"] = n.parent;
        jn["parent_sample"] = n.parent_sample;
        jn["root_partition"] = n.root_partition;
        jn["capacity"] = n.capacity;
        jn["region"] = n.region;
        jn["samples"] = n.samples;
        nodes.push_back(std::move(jn));
    }
    j["nodes"] = std::move(nodes);
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write tree file: " + path);
    out << j.dump(1) << "\n";
}

SampleTree load_tree(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open tree file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("tree parse error: ") + e.what());
    }
    SampleTree tree;
    tree.config = tree_config_from_json(j.at("config"));
    tree.ideal_population = j.at("ideal_population").get<double>();
    tree.num_blocks = j.at("num_blocks").get<int>();
    tree.attempts = j.value("attempts", 0L);
    tree.successes = j.value("successes", 0L);
    tree.infeasible = j.value("infeasible", 0L);
    for (const auto& jn : j.at("nodes")) {
        TreeNode n;
        n.id = jn.at("id").get<int>();
        n.parent = jn.at("parent").get<int>();
        n.parent_sample = jn.at("parent_sample").get<int>();
        n.root_partition = jn.at("root_partition").get<int>();
        n.capacity = jn.at("capacity").get<int>();
        n.region = jn.at("region").get<std::vector<int>>();
        n.samples = jn.at("samples").get<std::vector<std::vector<int>>>();
        n.status = NodeStatus::Complete;
        tree.nodes.push_back(std::move(n));
    }
    if (tree.nodes.empty()) throw ValidationError("tree file has no nodes");
    return tree;
}

namespace {
constexpr char kColumnMagic[8] = {'S', 'H', 'P', 'C', 'O', 'L', '0', '1'};
}

void save_columns(const ColumnSet& cols, int num_blocks, const std::string& bin_path,
                  const std::string& csv_path) {
    std::ofstream bin(bin_path, std::ios::binary);
    if (!bin) throw ValidationError("cannot write column store: " + bin_path);
    bin.write(kColumnMagic, 8);
    const std::uint32_t n_cols = static_cast<std::uint32_t>(cols.columns.size());
    const std::uint32_t n_bits = static_cast<std::uint32_t>(num_blocks);
    const std::uint32_t words = (n_bits + 63) / 64;
    bin.write(reinterpret_cast<const char*>(&n_cols), 4);
    bin.write(reinterpret_cast<const char*>(&n_bits), 4);
    bin.write(reinterpret_cast<const char*>(&words), 4);
    for (const auto& c : cols.columns) {
        const std::int32_t root = c.root_partition;
        const std::int64_t pop = c.population;
        bin.write(reinterpret_cast<const char*>(&root), 4);
        bin.write(reinterpret_cast<const char*>(&pop), 8);
        bin.write(reinterpret_cast<const char*>(c.blocks.words().data()),
                  static_cast<std::streamsize>(words * 8));
    }

    std::ofstream csv(csv_path);
    if (!csv) throw ValidationError("cannot write column csv: " + csv_path);
    csv << "column,root_partition,population,blocks,boundary_edges,centralization_km,"
           "win_probability,cost\n";
    char buf[128];
    for (const auto& c : cols.columns) {
        csv << c.id << "," << c.root_partition << "," << c.population << ","
            << c.block_ids.size() << "," << c.boundary_edges << ",";
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g", c.centralization_km,
                      c.win_probability, c.cost);
        csv << buf << "\n";
    }
}

ColumnSet load_columns(const std::string& bin_path, const std::string& /*csv_path*/) {
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw ValidationError("cannot open column store: " + bin_path);
    char magic[8];
    bin.read(magic, 8);
    if (std::memcmp(magic, kColumnMagic, 8) != 0)
        throw ValidationError("bad column store header: " + bin_path);
    std::uint32_t n_cols = 0, n_bits = 0, words = 0;
    bin.read(reinterpret_cast<char*>(&n_cols), 4);
    bin.read(reinterpret_cast<char*>(&n_bits), 4);
    bin.read(reinterpret_cast<char*>(&words), 4);
    ColumnSet out;
    for (std::uint32_t i = 0; i < n_cols; ++i) {
        DistrictColumn c;
        c.id = static_cast<int>(i);
        std::int32_t root = 0;
        std::int64_t pop = 0;
        bin.read(reinterpret_cast<char*>(&root), 4);
        bin.read(reinterpret_cast<char*>(&pop), 8);
        c.root_partition = root;
        c.population = pop;
        std::vector<std::uint64_t> w(words);
        bin.read(reinterpret_cast<char*>(w.data()), static_cast<std::streamsize>(words * 8));
        BlockSet bs(static_cast<int>(n_bits));
        for (std::uint32_t wi = 0; wi < words; ++wi)
            for (int b = 0; b < 64; ++b)
                if ((w[wi] >> b) & 1) bs.set(static_cast<int>(wi * 64 + b));
        c.block_ids = bs.ids();
        c.blocks = std::move(bs);
        out.columns.push_back(std::move(c));
    }
    if (!bin) throw ValidationError("truncated column store: " + bin_path);
    return out;
}

}  // namespace shp
