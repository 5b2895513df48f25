#include "shp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json_io.hpp"
#include "shp/pip.hpp"
#include "shp/render.hpp"

namespace shp {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* curve_name(CurveKind k) {
    switch (k) {
        case CurveKind::EfficiencyGap: return "efficiency-gap";
        case CurveKind::Proportional: return "proportional";
        case CurveKind::Responsiveness: return "responsiveness";
        case CurveKind::Table: return "table";
    }
    return "efficiency-gap";
}

CurveKind curve_from(const std::string& s) {
    if (s == "efficiency-gap") return CurveKind::EfficiencyGap;
    if (s == "proportional") return CurveKind::Proportional;
    if (s == "responsiveness") return CurveKind::Responsiveness;
    if (s == "table") return CurveKind::Table;
    throw ValidationError("unknown seat-vote curve kind: " + s);
}

}  // namespace

std::string RunConfig::to_json_text() const {
    json j;
    TreeConfig effective = tree;  // serialized in canonical, synced form
    effective.k = k;
    effective.epsilon_p = epsilon_p;
    effective.seed = seed;
    j["instance"] = instance_path;
    if (synthetic) {
        j["synthetic"] = {{"width", synthetic->width},
                          {"height", synthetic->height},
                          {"urban_centers", synthetic->urban_centers},
                          {"seed", synthetic->seed}};
    }
    j["k"] = k;
    j["epsilon_p"] = epsilon_p;
    j["party"] = party;
    j["curve"] = {{"kind", curve_name(curve.kind)}, {"responsiveness", curve.responsiveness}};
    if (!curve.table.empty()) {
        json t = json::array();
        for (auto [v, s] : curve.table) t.push_back({v, s});
        j["curve"]["table"] = t;
    }
    j["tree"] = tree_config_to_json(effective);
    j["recom"] = {{"steps", recom_steps}, {"epsilon", recom_epsilon}};
    j["prune_target"] = prune_target;
    j["parallelism"] = parallelism;
    j["seed"] = seed;
    j["out_dir"] = out_dir;
    j["dump_lp_dir"] = dump_lp_dir;
    return j.dump(2);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    RunConfig c;
    c.instance_path = j.value("instance", std::string());
    if (j.contains("synthetic")) {
        SyntheticSpec s;
        s.width = j["synthetic"].value("width", s.width);
        s.height = j["synthetic"].value("height", s.height);
        s.urban_centers = j["synthetic"].value("urban_centers", s.urban_centers);
        s.seed = j["synthetic"].value("seed", s.seed);
        c.synthetic = s;
    }
    c.k = j.value("k", c.k);
    c.epsilon_p = j.value("epsilon_p", c.epsilon_p);
    c.party = j.value("party", c.party);
    if (j.contains("curve")) {
        c.curve.kind = curve_from(j["curve"].value("kind", std::string("efficiency-gap")));
        c.curve.responsiveness = j["curve"].value("responsiveness", 2.0);
        if (j["curve"].contains("table"))
            for (const auto& p : j["curve"]["table"])
                c.curve.table.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    if (j.contains("tree")) c.tree = tree_config_from_json(j["tree"]);
    if (j.contains("recom")) {
        c.recom_steps = j["recom"].value("steps", c.recom_steps);
        c.recom_epsilon = j["recom"].value("epsilon", c.recom_epsilon);
    }
    c.prune_target = j.value("prune_target", c.prune_target);
    c.parallelism = j.value("parallelism", c.parallelism);
    c.seed = j.value("seed", c.seed);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.dump_lp_dir = j.value("dump_lp_dir", std::string());
    // top-level fields are authoritative for the tree
    c.tree.k = c.k;
    c.tree.epsilon_p = c.epsilon_p;
    c.tree.seed = c.seed;
    c.tree.parallelism = c.parallelism;
    return c;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

void RunConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write config file: " + path);
    out << to_json_text() << "\n";
}

Instance load_run_instance(const RunConfig& config) {
    Instance inst;
    if (config.synthetic) {
        inst = synthetic_state(config.synthetic->width, config.synthetic->height,
                               config.synthetic->urban_centers, config.synthetic->seed);
    } else if (!config.instance_path.empty()) {
        inst = load_instance(config.instance_path);
    } else {
        throw ValidationError("config needs either an instance path or a synthetic spec");
    }
    if (config.party == "dem") {
        for (auto& e : inst.returns.share)
            for (auto& s : e) s = 1.0 - s;
        inst.returns.statewide_mean = 1.0 - inst.returns.statewide_mean;
    } else if (config.party != "rep") {
        throw ValidationError("party must be 'rep' or 'dem'");
    }
    return inst;
}

void annotate_columns(const AdjacencyGraph& graph, const ElectionReturns& returns,
                      const SeatVoteCurve& curve, ColumnSet& columns) {
    const double target = returns.num_elections() >= 2
                              ? seat_vote_target(curve, returns.statewide_mean)
                              : 0.5;
    for (auto& c : columns.columns) {
        c.boundary_edges = district_boundary_edges(graph, c.block_ids);
        c.centralization_km = district_centralization(graph, c.block_ids);
        if (returns.num_elections() >= 2) {
            c.win_probability = win_probability(district_stats(graph, returns, c.block_ids));
            c.cost = target - c.win_probability;
        }
    }
}

namespace {

TreeConfig effective_tree_config(const RunConfig& config) {
    TreeConfig t = config.tree;
    t.k = config.k;
    t.epsilon_p = config.epsilon_p;
    t.seed = config.seed;
    t.parallelism = config.parallelism;
    return t;
}

void write_gen_stats(const SampleTree& tree, const std::string& path) {
    std::ofstream csv(path);
    csv << "problem,node,capacity,z,attempt,feasible,wall_ms\n";
    for (std::size_t i = 0; i < tree.problem_stats.size(); ++i) {
        const auto& s = tree.problem_stats[i];
        csv << i << "," << s.node << "," << s.capacity << "," << s.z << "," << s.attempt << ","
            << (s.feasible ? 1 : 0) << "," << g17(s.wall_ms) << "\n";
    }
}

void write_gen_summary(const SampleTree& tree, const ColumnSet& cols,
                       const EnsembleMetrics& m, const std::string& path) {
    json j;
    j["k"] = tree.config.k;
    j["leaves"] = tree.alive_leaves();
    j["distinct_leaves"] = tree.distinct_leaves();
    j["columns"] = cols.columns.size();
    j["plan_count"] = count_plans(tree).decimal;
    j["leverage"] = m.leverage;
    j["attempts"] = tree.attempts;
    j["successes"] = tree.successes;
    j["infeasible"] = tree.infeasible;
    j["pct_infeasible"] = m.pct_infeasible;
    j["pct_duplicates"] = m.pct_duplicates;
    std::ofstream out(path);
    out << j.dump(2) << "\n";
}

void maybe_dump_root_lp(const AdjacencyGraph& graph, const ProblemSpec& spec,
                        const TreeConfig& cfg, const std::string& dir) {
    if (dir.empty()) return;
    fs::create_directories(dir);
    // rebuild the root node's first attempt deterministically
    Rng rng(hash_combine(hash_string(cfg.seed, "R"), 0));
    std::vector<int> region(graph.num_blocks());
    for (int i = 0; i < graph.num_blocks(); ++i) region[i] = i;
    try {
        const int z = sample_split_size(spec.k, cfg.centers, rng);
        auto sampled = sample_capacities(spec.k, z, cfg.centers, rng);
        auto centers = select_centers(graph, region, z, cfg.centers, rng, &sampled,
                                      spec.ideal_population);
        auto ideal = capacity_weights(graph, region, centers, cfg.centers.weight_kind,
                                      spec.ideal_population);
        auto caps = assign_capacities(ideal, sampled, cfg.centers.capacity_mode);
        const double alpha = rng.uniform(1.0, 2.0);
        auto inst = make_partition_instance(graph, region, {centers, caps}, alpha,
                                            epsilon_schedule(spec.epsilon_p, spec.k),
                                            spec.ideal_population);
        export_lp(build_pip(inst), (fs::path(dir) / "root_pip.lp").string());
    } catch (const ValidationError&) {
        // diagnostic only; sampling may legitimately fail here
    }
}

}  // namespace

GenerateResult cmd_generate(const RunConfig& config) {
    fs::create_directories(config.out_dir);
    const Instance inst = load_run_instance(config);
    const auto spec = ProblemSpec::make(inst.graph, config.k, config.epsilon_p);
    const auto tcfg = effective_tree_config(config);

    maybe_dump_root_lp(inst.graph, spec, tcfg, config.dump_lp_dir);

    GenerateResult res;
    res.tree = generate_tree(inst.graph, spec, tcfg);
    res.columns = collect_columns(res.tree, inst.graph);
    annotate_columns(inst.graph, inst.returns, config.curve, res.columns);
    res.summary = ensemble_metrics(res.tree, inst.graph, inst.returns, res.columns);

    const fs::path dir(config.out_dir);
    config.save((dir / "config.json").string());
    if (config.synthetic) save_instance(inst, (dir / "instance.json").string());
    save_tree(res.tree, (dir / "tree.json").string());
    save_columns(res.columns, res.tree.num_blocks, (dir / "columns.bin").string(),
                 (dir / "columns.csv").string());
    write_gen_stats(res.tree, (dir / "gen_stats.csv").string());
    write_gen_summary(res.tree, res.columns, res.summary, (dir / "gen_summary.json").string());
    return res;
}

namespace {

LinearPlanObjective column_leaf_objective(const SampleTree& tree, const ColumnSet& cols,
                                          const std::function<double(const DistrictColumn&)>& f,
                                          Sense sense) {
    LinearPlanObjective obj;
    obj.sense = sense;
    obj.leaf_cost.assign(tree.nodes.size(), 0.0);
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        const int cid = cols.leaf_to_column[id];
        if (cid >= 0) obj.leaf_cost[id] = f(cols.columns[cid]);
    }
    return obj;
}

PlanRecord record_from_columns(const AdjacencyGraph& graph, const std::vector<int>& column_ids,
                               const ColumnSet& cols, const std::string& method, int root,
                               double objective) {
    PlanRecord r;
    r.method = method;
    r.root_partition = root;
    r.objective = objective;
    r.columns = column_ids;
    Plan plan;
    double seats = 0.0;
    for (int cid : column_ids) {
        plan.push_back(cols.columns[cid].block_ids);
        seats += cols.columns[cid].win_probability;
    }
    r.expected_seat_share = plan.empty() ? 0.0 : seats / static_cast<double>(plan.size());
    r.cut_edges_total = cut_edges(graph, plan).first;
    r.centralization_km = centralization(graph, plan);
    r.roeck = roeck(graph, plan);
    return r;
}

std::vector<int> dp_plan_columns(const DpResult& dp, const ColumnSet& cols) {
    std::vector<int> out;
    out.reserve(dp.plan.size());
    for (int leaf : dp.plan) out.push_back(cols.leaf_to_column[leaf]);
    return out;
}

void write_plans_csv(const std::vector<PlanRecord>& plans, const std::string& path) {
    std::ofstream csv(path);
    csv << "plan,method,root_partition,objective,expected_seat_share,cut_edges_total,"
           "centralization_km,roeck,columns\n";
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const auto& p = plans[i];
        csv << i << "," << p.method << "," << p.root_partition << "," << g17(p.objective) << ","
            << g17(p.expected_seat_share) << "," << p.cut_edges_total << ","
            << g17(p.centralization_km) << "," << g17(p.roeck) << ",";
        for (std::size_t c = 0; c < p.columns.size(); ++c)
            csv << (c ? ";" : "") << p.columns[c];
        csv << "\n";
    }
}

struct OptimizeContext {
    Instance inst;
    SampleTree tree;
    ColumnSet columns;
    std::vector<double> costs;
    std::vector<double> win_probs;
};

OptimizeContext load_optimize_context(const RunConfig& config) {
    OptimizeContext ctx;
    ctx.inst = load_run_instance(config);
    const fs::path dir(config.out_dir);
    ctx.tree = load_tree((dir / "tree.json").string());
    ctx.columns = collect_columns(ctx.tree, ctx.inst.graph);
    annotate_columns(ctx.inst.graph, ctx.inst.returns, config.curve, ctx.columns);
    for (const auto& c : ctx.columns.columns) {
        ctx.costs.push_back(c.cost);
        ctx.win_probs.push_back(c.win_probability);
    }
    return ctx;
}

}  // namespace

OptimizeResult cmd_optimize(const RunConfig& config) {
    auto ctx = load_optimize_context(config);
    const fs::path dir(config.out_dir);

    OptimizeResult res;
    res.msp = solve_all_msps(ctx.tree, ctx.columns, ctx.costs, ctx.win_probs,
                             ctx.tree.config.solver, config.parallelism);

    int solved = 0, within = 0;
    for (const auto& o : res.msp) {
        if (o.skipped_trivial) continue;
        if (o.status == SolveStatus::Limit) res.any_limit = true;
        if (o.status != SolveStatus::Optimal) continue;
        ++solved;
        if (o.objective <= 0.1 + 1e-12) ++within;
        res.plans.push_back(record_from_columns(ctx.inst.graph, o.plan_columns, ctx.columns,
                                                "msp", o.root_partition, o.objective));
    }
    res.fraction_within_tenth_seat = solved > 0 ? static_cast<double>(within) / solved : 0.0;

    // DP extremes for cut edges and expected seats
    auto cuts_obj = [&](Sense s) {
        return column_leaf_objective(
            ctx.tree, ctx.columns,
            [](const DistrictColumn& c) { return 0.5 * c.boundary_edges; }, s);
    };
    auto seats_obj = [&](Sense s) {
        return column_leaf_objective(
            ctx.tree, ctx.columns, [](const DistrictColumn& c) { return c.win_probability; }, s);
    };
    struct DpSpec {
        const char* name;
        LinearPlanObjective obj;
    };
    std::vector<DpSpec> dps;
    dps.push_back({"dp-min-cuts", cuts_obj(Sense::Min)});
    dps.push_back({"dp-max-cuts", cuts_obj(Sense::Max)});
    dps.push_back({"dp-min-seats", seats_obj(Sense::Min)});
    dps.push_back({"dp-max-seats", seats_obj(Sense::Max)});
    for (auto& d : dps) {
        const auto r = tree_dp(ctx.tree, d.obj);
        res.plans.push_back(record_from_columns(ctx.inst.graph, dp_plan_columns(r, ctx.columns),
                                                ctx.columns, d.name, -1, r.value));
    }

    write_plans_csv(res.plans, (dir / "plans.csv").string());

    {
        std::ofstream hist((dir / "msp_hist.csv").string());
        hist << "root_partition,status,objective,expected_seats,bb_nodes\n";
        for (const auto& o : res.msp) {
            const char* st = o.skipped_trivial
                                 ? "skipped"
                                 : (o.status == SolveStatus::Optimal
                                        ? "optimal"
                                        : (o.status == SolveStatus::Infeasible ? "infeasible"
                                                                               : "limit"));
            hist << o.root_partition << "," << st << "," << g17(o.objective) << ","
                 << g17(o.expected_seats) << "," << o.nodes << "\n";
        }
    }
    {
        std::ofstream stats((dir / "opt_stats.csv").string());
        stats << "root_partition,wall_seconds\n";
        for (const auto& o : res.msp)
            if (!o.skipped_trivial) stats << o.root_partition << "," << g17(o.wall_seconds) << "\n";
    }
    {
        json j;
        j["msp_solved"] = solved;
        j["msp_skipped_trivial"] =
            static_cast<int>(std::count_if(res.msp.begin(), res.msp.end(),
                                           [](const MspOutcome& o) { return o.skipped_trivial; }));
        j["fraction_within_tenth_seat"] = res.fraction_within_tenth_seat;
        for (const auto& p : res.plans) {
            if (p.method.rfind("dp-", 0) == 0) j[p.method] = {{"objective", p.objective}};
        }
        std::ofstream out((dir / "opt_summary.json").string());
        out << j.dump(2) << "\n";
    }
    return res;
}

BigCount cmd_prune(const RunConfig& config, std::uint64_t target) {
    const Instance inst = load_run_instance(config);
    const fs::path dir(config.out_dir);
    auto tree = load_tree((dir / "tree.json").string());
    auto pruned = prune_tree(tree, target);
    auto cols = collect_columns(pruned, inst.graph);
    annotate_columns(inst.graph, inst.returns, config.curve, cols);
    save_tree(pruned, (dir / "tree.json").string());
    save_columns(cols, pruned.num_blocks, (dir / "columns.bin").string(),
                 (dir / "columns.csv").string());
    return count_plans(pruned);
}

EnsembleMetrics cmd_metrics(const RunConfig& config) {
    const Instance inst = load_run_instance(config);
    const fs::path dir(config.out_dir);
    auto tree = load_tree((dir / "tree.json").string());
    auto cols = collect_columns(tree, inst.graph);
    annotate_columns(inst.graph, inst.returns, config.curve, cols);
    const auto m = ensemble_metrics(tree, inst.graph, inst.returns, cols);
    std::ofstream csv((dir / "metrics.csv").string());
    csv << "leverage,pct_infeasible,pct_dup,H_bij,ADS,sigma50,sigma99,lambda2,mu_walk_km,MCD,ESR\n";
    csv << g17(m.leverage) << "," << g17(m.pct_infeasible) << "," << g17(m.pct_duplicates) << ","
        << g17(m.conditional_entropy) << "," << g17(m.ads) << "," << g17(m.sigma50) << ","
        << g17(m.sigma99) << "," << g17(m.lambda2) << "," << g17(m.mu_walk_km) << ","
        << g17(m.mcd) << "," << g17(m.esr) << "\n";
    return m;
}

CompareResult cmd_compare(const RunConfig& config) {
    fs::create_directories(config.out_dir);
    const Instance inst = load_run_instance(config);
    const auto spec = ProblemSpec::make(inst.graph, config.k, config.epsilon_p);
    const auto tcfg = effective_tree_config(config);

    auto tree = generate_tree(inst.graph, spec, tcfg);
    auto cols = collect_columns(tree, inst.graph);
    annotate_columns(inst.graph, inst.returns, config.curve, cols);

    CompareResult out;
    out.shp_distinct_districts = tree.distinct_leaves();

    auto seats_obj = [&](Sense s) {
        LinearPlanObjective obj;
        obj.sense = s;
        obj.leaf_cost.assign(tree.nodes.size(), 0.0);
        for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
            const int cid = cols.leaf_to_column[id];
            if (cid >= 0) obj.leaf_cost[id] = cols.columns[cid].win_probability;
        }
        return obj;
    };
    const auto dp_min = tree_dp(tree, seats_obj(Sense::Min));
    const auto dp_max = tree_dp(tree, seats_obj(Sense::Max));
    out.shp_seat_min = dp_min.value / config.k;
    out.shp_seat_max = dp_max.value / config.k;

    // initial recom plan: the most compact SHP plan
    LinearPlanObjective cut_obj;
    cut_obj.sense = Sense::Min;
    cut_obj.leaf_cost.assign(tree.nodes.size(), 0.0);
    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
        const int cid = cols.leaf_to_column[id];
        if (cid >= 0) cut_obj.leaf_cost[id] = 0.5 * cols.columns[cid].boundary_edges;
    }
    const auto dp_compact = tree_dp(tree, cut_obj);
    std::vector<std::vector<int>> init_plan;
    for (int leaf : dp_compact.plan) init_plan.push_back(tree.nodes[leaf].region);

    ProblemSpec recom_spec = spec;
    if (config.recom_epsilon > 0.0) recom_spec.epsilon_p = config.recom_epsilon;

    // equalize the distinct-district budget, bounded by recom_steps
    ChainRun run;
    {
        ChainState state;
        state.plan = init_plan;
        run.plans.push_back(state.plan);
        if (!plan_feasible(inst.graph, recom_spec, state.plan))
            throw ValidationError("initial recom plan infeasible at the recom tolerance");
        std::unordered_map<std::uint64_t, std::vector<BlockSet>> seen;
        int distinct = 0;
        auto note = [&](const std::vector<int>& d) {
            auto bs = BlockSet::from_ids(inst.graph.num_blocks(), d);
            auto& bucket = seen[bs.hash()];
            for (const auto& o : bucket)
                if (o == bs) return;
            bucket.push_back(std::move(bs));
            ++distinct;
        };
        for (const auto& d : state.plan) note(d);
        Rng rng(hash_combine(config.seed, 0xc0317a9eULL));
        long steps = 0;
        while (distinct < out.shp_distinct_districts && steps < config.recom_steps) {
            state = recom_step(inst.graph, state, recom_spec, rng);
            run.plans.push_back(state.plan);
            for (const auto& d : state.plan) note(d);
            ++steps;
        }
        run.final_state = state;
        run.distinct_districts = distinct;
        run.leverage = std::log10(static_cast<double>(run.plans.size()) /
                                  static_cast<double>(std::max(1, distinct)));
        out.recom_steps = steps;
    }
    out.recom_distinct_districts = run.distinct_districts;
    out.recom_leverage = run.leverage;

    // distributions: recom plans as recorded; SHP from a pruned enumeration
    std::vector<double> recom_seats, recom_cuts, shp_seats, shp_cuts;
    for (const auto& plan : run.plans) {
        double seats = 0.0;
        for (const auto& d : plan)
            seats += win_probability(district_stats(inst.graph, inst.returns, d));
        recom_seats.push_back(seats / config.k);
        recom_cuts.push_back(static_cast<double>(cut_edges(inst.graph, plan).first));
    }
    out.recom_seat_min = *std::min_element(recom_seats.begin(), recom_seats.end());
    out.recom_seat_max = *std::max_element(recom_seats.begin(), recom_seats.end());

    auto pruned = prune_tree(tree, 2000);
    auto pruned_cols = collect_columns(pruned, inst.graph);
    annotate_columns(inst.graph, inst.returns, config.curve, pruned_cols);
    enumerate_plans(pruned, 2000, [&](const std::vector<int>& leaves) {
        double seats = 0.0, cuts = 0.0;
        for (int leaf : leaves) {
            const auto& c = pruned_cols.columns[pruned_cols.leaf_to_column[leaf]];
            seats += c.win_probability;
            cuts += 0.5 * c.boundary_edges;
        }
        shp_seats.push_back(seats / config.k);
        shp_cuts.push_back(cuts);
        return true;
    });

    const fs::path dir(config.out_dir);
    {
        std::ofstream csv((dir / "compare.csv").string());
        csv << "method,index,expected_seat_share,cut_edges\n";
        for (std::size_t i = 0; i < shp_seats.size(); ++i)
            csv << "shp," << i << "," << g17(shp_seats[i]) << "," << g17(shp_cuts[i]) << "\n";
        for (std::size_t i = 0; i < recom_seats.size(); ++i)
            csv << "recom," << i << "," << g17(recom_seats[i]) << "," << g17(recom_cuts[i]) << "\n";
    }
    {
        json j;
        j["shp"] = {{"seat_min", out.shp_seat_min},
                    {"seat_max", out.shp_seat_max},
                    {"distinct_districts", out.shp_distinct_districts}};
        j["recom"] = {{"seat_min", out.recom_seat_min},
                      {"seat_max", out.recom_seat_max},
                      {"distinct_districts", out.recom_distinct_districts},
                      {"leverage", out.recom_leverage},
                      {"steps", out.recom_steps}};
        j["shp_range_geq_recom"] =
            (out.shp_seat_max - out.shp_seat_min) >= (out.recom_seat_max - out.recom_seat_min);
        std::ofstream sum((dir / "compare_summary.json").string());
        sum << j.dump(2) << "\n";
    }
    {
        std::ofstream svg((dir / "compare_seats.svg").string());
        svg << boxplot_svg({"shp", "recom"}, {shp_seats, recom_seats}, "expected seat share");
        std::ofstream svg2((dir / "compare_cuts.svg").string());
        svg2 << boxplot_svg({"shp", "recom"}, {shp_cuts, recom_cuts}, "cut edges");
    }
    return out;
}

void cmd_render(const RunConfig& config, int plan_index, const std::string& svg_path) {
    auto ctx = load_optimize_context(config);
    auto res = cmd_optimize(config);
    if (plan_index < 0 || plan_index >= static_cast<int>(res.plans.size()))
        throw ValidationError("plan index out of range");
    Plan plan;
    for (int cid : res.plans[plan_index].columns)
        plan.push_back(ctx.columns.columns[cid].block_ids);
    render_plan(ctx.inst.graph, plan, svg_path);
}

std::uint64_t hash_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
    }
    return h;
}

}  // namespace shp
