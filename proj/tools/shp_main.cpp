// Command-line pipeline: generate / optimize / prune / metrics / compare /
// render / synth. Exit codes: 0 ok, 2 validation error, 3 infeasible root,
// 4 solver limit.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "shp/pipeline.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::string instance;
    std::string out_dir;
    int k = -1;
    double epsilon_p = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int parallelism = -1;
    int w_root = -1;
    int w = -1;
    std::string method;
    std::string curve;
    double responsiveness = -1.0;
    std::string party;
    int synth_width = -1, synth_height = -1, synth_centers = -1;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config_path, "run config JSON");
    cmd->add_option("-i,--instance", o.instance, "instance JSON path");
    cmd->add_option("-o,--out", o.out_dir, "output directory (or $SHP_OUT_DIR)");
    cmd->add_option("-k,--districts", o.k, "number of districts");
    cmd->add_option("--epsilon", o.epsilon_p, "population tolerance fraction");
    cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("-j,--parallelism", o.parallelism, "worker count");
    cmd->add_option("--w-root", o.w_root, "root sample width");
    cmd->add_option("--w", o.w, "internal sample width");
    cmd->add_option("--centers", o.method,
                    "center method: fixed-center|pareto-perturbation|fixed-plus-pareto|"
                    "random-iterative|uniform-random");
    cmd->add_option("--curve", o.curve, "seat-vote curve: efficiency-gap|proportional|responsiveness");
    cmd->add_option("--responsiveness", o.responsiveness, "slope for the responsiveness curve");
    cmd->add_option("--party", o.party, "rep (default) or dem");
    cmd->add_option("--synth-width", o.synth_width, "synthetic grid width");
    cmd->add_option("--synth-height", o.synth_height, "synthetic grid height");
    cmd->add_option("--synth-centers", o.synth_centers, "synthetic urban centers");
}

shp::CenterMethod method_from(const std::string& s) {
    if (s == "fixed-center") return shp::CenterMethod::FixedCenter;
    if (s == "pareto-perturbation") return shp::CenterMethod::ParetoPerturbation;
    if (s == "fixed-plus-pareto") return shp::CenterMethod::FixedPlusPareto;
    if (s == "random-iterative") return shp::CenterMethod::RandomIterative;
    if (s == "uniform-random") return shp::CenterMethod::UniformRandom;
    throw shp::ValidationError("unknown center method: " + s);
}

shp::RunConfig build_config(const Overrides& o) {
    shp::RunConfig cfg;
    if (!o.config_path.empty()) cfg = shp::RunConfig::from_json_file(o.config_path);
    if (!o.instance.empty()) {
        cfg.instance_path = o.instance;
        cfg.synthetic.reset();
    }
    if (o.synth_width > 0 || o.synth_height > 0 || o.synth_centers >= 0) {
        shp::SyntheticSpec s = cfg.synthetic.value_or(shp::SyntheticSpec{});
        if (o.synth_width > 0) s.width = o.synth_width;
        if (o.synth_height > 0) s.height = o.synth_height;
        if (o.synth_centers >= 0) s.urban_centers = o.synth_centers;
        cfg.synthetic = s;
        cfg.instance_path.clear();
    }
    if (!o.out_dir.empty())
        cfg.out_dir = o.out_dir;
    else if (const char* env = std::getenv("SHP_OUT_DIR"); env && cfg.out_dir == "out")
        cfg.out_dir = env;
    if (o.k > 0) cfg.k = o.k;
    if (o.epsilon_p > 0) cfg.epsilon_p = o.epsilon_p;
    if (o.seed_set) {
        cfg.seed = o.seed;
        if (cfg.synthetic) cfg.synthetic->seed = o.seed;
    }
    if (o.parallelism > 0) cfg.parallelism = o.parallelism;
    if (o.w_root > 0) cfg.tree.w_root = o.w_root;
    if (o.w > 0) cfg.tree.w = o.w;
    if (!o.method.empty()) cfg.tree.centers.method = method_from(o.method);
    if (!o.curve.empty()) {
        if (o.curve == "efficiency-gap")
            cfg.curve = shp::SeatVoteCurve::efficiency_gap();
        else if (o.curve == "proportional")
            cfg.curve = shp::SeatVoteCurve::proportional();
        else if (o.curve == "responsiveness")
            cfg.curve = shp::SeatVoteCurve::with_responsiveness(
                o.responsiveness > 0 ? o.responsiveness : 2.0);
        else
            throw shp::ValidationError("unknown curve: " + o.curve);
    } else if (o.responsiveness > 0) {
        cfg.curve = shp::SeatVoteCurve::with_responsiveness(o.responsiveness);
    }
    if (!o.party.empty()) cfg.party = o.party;
    cfg.tree.k = cfg.k;
    cfg.tree.epsilon_p = cfg.epsilon_p;
    cfg.tree.seed = cfg.seed;
    cfg.tree.parallelism = cfg.parallelism;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic hierarchical districting ensembles"};
    app.require_subcommand(1);

    Overrides o;
    std::uint64_t prune_target = 0;
    long recom_steps = -1;
    int plan_index = 0;
    std::string render_out = "plan.svg";
    std::string synth_out = "instance.json";

    auto* gen = app.add_subcommand("generate", "sample a tree and write the column store");
    add_common(gen, o);
    auto* opt = app.add_subcommand("optimize", "solve per-root MSPs and DP extremes");
    add_common(opt, o);
    auto* prune = app.add_subcommand("prune", "subsample the stored tree to a plan budget");
    add_common(prune, o);
    prune->add_option("--target", prune_target, "target plan count")->required();
    auto* metrics = app.add_subcommand("metrics", "ensemble metrics CSV");
    add_common(metrics, o);
    auto* compare = app.add_subcommand("compare", "SHP vs recombination report");
    add_common(compare, o);
    compare->add_option("--steps", recom_steps, "max recombination steps");
    auto* render = app.add_subcommand("render", "SVG map of a stored plan");
    add_common(render, o);
    render->add_option("--plan", plan_index, "row index into plans.csv");
    render->add_option("--svg", render_out, "output SVG path");
    auto* synth = app.add_subcommand("synth", "write a synthetic instance JSON");
    add_common(synth, o);
    synth->add_option("--output", synth_out, "instance output path");

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = build_config(o);
        if (recom_steps > 0) cfg.recom_steps = recom_steps;

        if (gen->parsed()) {
            auto res = shp::cmd_generate(cfg);
            std::cout << "generated " << res.columns.columns.size() << " columns from "
                      << res.tree.alive_leaves() << " leaves; plans=" << shp::count_plans(res.tree).decimal
                      << " leverage=" << res.summary.leverage << "\n";
        } else if (opt->parsed()) {
            auto res = shp::cmd_optimize(cfg);
            std::cout << "solved " << res.msp.size() << " root partitions; fraction within 0.1 seats = "
                      << res.fraction_within_tenth_seat << "\n";
            if (res.any_limit) {
                std::cerr << "warning: at least one solve hit its limit\n";
                return 4;
            }
        } else if (prune->parsed()) {
            auto count = shp::cmd_prune(cfg, prune_target);
            std::cout << "pruned tree now has " << count.decimal << " plans\n";
        } else if (metrics->parsed()) {
            auto m = shp::cmd_metrics(cfg);
            std::cout << "leverage=" << m.leverage << " H=" << m.conditional_entropy
                      << " ADS=" << m.ads << " MCD=" << m.mcd << " ESR=" << m.esr << "\n";
        } else if (compare->parsed()) {
            auto r = shp::cmd_compare(cfg);
            std::cout << "shp seat range [" << r.shp_seat_min << ", " << r.shp_seat_max
                      << "] recom range [" << r.recom_seat_min << ", " << r.recom_seat_max
                      << "] districts " << r.shp_distinct_districts << " vs "
                      << r.recom_distinct_districts << "\n";
        } else if (render->parsed()) {
            shp::cmd_render(cfg, plan_index, render_out);
            std::cout << "wrote " << render_out << "\n";
        } else if (synth->parsed()) {
            const auto s = cfg.synthetic.value_or(shp::SyntheticSpec{});
            auto inst = shp::synthetic_state(s.width, s.height, s.urban_centers,
                                             cfg.synthetic ? cfg.synthetic->seed : cfg.seed);
            shp::save_instance(inst, synth_out);
            std::cout << "wrote " << synth_out << "\n";
        }
    } catch (const shp::InfeasibleRootError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const shp::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
