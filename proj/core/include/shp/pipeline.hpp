#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shp/instance.hpp"
#include "shp/metrics.hpp"
#include "shp/optimize.hpp"
#include "shp/recom.hpp"
#include "shp/tree.hpp"

namespace shp {

struct SyntheticSpec {
    int width = 20;
    int height = 20;
    int urban_centers = 2;
    std::uint64_t seed = 1;
};

// Fully serializable run description; a persisted config reproduces its run
// bit-exactly at any parallelism.
struct RunConfig {
    std::string instance_path;               // empty when synthetic is used
    std::optional<SyntheticSpec> synthetic;
    int k = 4;
    double epsilon_p = 0.01;
    std::string party = "rep";               // "dem" flips shares at load
    SeatVoteCurve curve = SeatVoteCurve::efficiency_gap();
    TreeConfig tree;
    long recom_steps = 1000;
    double recom_epsilon = -1.0;              // < 0: use epsilon_p
    std::uint64_t prune_target = 100000;
    int parallelism = 1;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::string dump_lp_dir;                  // optional PIP LP-format dumps

    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void save(const std::string& path) const;
};

Instance load_run_instance(const RunConfig& config);

// Fills cost, win probability, boundary edges and centralization per column.
void annotate_columns(const AdjacencyGraph& graph, const ElectionReturns& returns,
                      const SeatVoteCurve& curve, ColumnSet& columns);

struct GenerateResult {
    SampleTree tree;
    ColumnSet columns;
    EnsembleMetrics summary;
};

// generate: tree + column store + stats under out_dir
GenerateResult cmd_generate(const RunConfig& config);

struct PlanRecord {
    std::string method;  // "msp", "dp-min-cuts", ...
    int root_partition = -1;
    double objective = 0.0;
    double expected_seat_share = 0.0;
    int cut_edges_total = 0;
    double centralization_km = 0.0;
    double roeck = 0.0;
    std::vector<int> columns;
};

struct OptimizeResult {
    std::vector<MspOutcome> msp;
    std::vector<PlanRecord> plans;
    double fraction_within_tenth_seat = 0.0;  // of non-skipped MSPs
    bool any_limit = false;
};

// optimize: per-root MSPs plus DP extremes from the stored tree
OptimizeResult cmd_optimize(const RunConfig& config);

// prune: rewrite the stored tree subsampled to the target plan count
BigCount cmd_prune(const RunConfig& config, std::uint64_t target);

// metrics: ensemble metrics CSV from the stored tree
EnsembleMetrics cmd_metrics(const RunConfig& config);

struct CompareResult {
    double shp_seat_min = 0.0, shp_seat_max = 0.0;
    double recom_seat_min = 0.0, recom_seat_max = 0.0;
    int shp_distinct_districts = 0;
    int recom_distinct_districts = 0;
    double recom_leverage = 0.0;
    long recom_steps = 0;
};

// compare: SHP vs recombination at an equalized distinct-district budget
CompareResult cmd_compare(const RunConfig& config);

// render: SVG of one stored plan (by plans.csv row index)
void cmd_render(const RunConfig& config, int plan_index, const std::string& svg_path);

// FNV-1a over a file's bytes; used for determinism checks.
std::uint64_t hash_file(const std::string& path);

}  // namespace shp
