#include "shp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "simplex.hpp"

namespace shp {

int BinaryLinearProgram::add_binary(double obj) {
    if (num_continuous > 0)
        throw std::logic_error("add binaries before continuous auxiliaries");
    objective.push_back(obj);
    lower.push_back(0.0);
    upper.push_back(1.0);
    return num_binary++;
}

int BinaryLinearProgram::add_continuous(double obj, double lb, double ub) {
    objective.push_back(obj);
    lower.push_back(lb);
    upper.push_back(ub);
    return num_binary + num_continuous++;
}

void BinaryLinearProgram::add_row(std::vector<std::pair<int, double>> terms, Relation rel,
                                  double rhs) {
    rows.push_back({std::move(terms), rel, rhs});
}

void BinaryLinearProgram::fix_binary(int var, int value) {
    lower[var] = upper[var] = static_cast<double>(value);
}

namespace {

struct Node {
    double bound;                 // LP relaxation objective
    int depth;
    int parent;                   // index into node pool, -1 for root
    int fix_var = -1;             // branching decision applied at this node
    int fix_val = 0;
};

struct NodeOrder {
    const std::vector<Node>* pool;
    bool operator()(int a, int b) const { return (*pool)[a].bound > (*pool)[b].bound; }
};

}  // namespace

double max_constraint_violation(const BinaryLinearProgram& p, const std::vector<double>& x) {
    double worst = 0.0;
    for (const auto& row : p.rows) {
        double a = 0.0;
        for (auto [j, c] : row.terms) a += c * x[j];
        double v = 0.0;
        if (row.rel == Relation::LE)
            v = a - row.rhs;
        else if (row.rel == Relation::GE)
            v = row.rhs - a;
        else
            v = std::fabs(a - row.rhs);
        worst = std::max(worst, v / std::max(1.0, std::fabs(row.rhs)));
    }
    return worst;
}

SolveOutcome solve_exact(const BinaryLinearProgram& program, const SolveLimits& limits) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - t0).count(); };

    const int nv = program.num_vars();
    std::vector<detail::SparseColumn> cols(nv);
    std::vector<int> rel(program.rows.size());
    std::vector<double> rhs(program.rows.size());
    for (std::size_t r = 0; r < program.rows.size(); ++r) {
        const auto& row = program.rows[r];
        rel[r] = row.rel == Relation::LE ? -1 : (row.rel == Relation::GE ? +1 : 0);
        rhs[r] = row.rhs;
        for (auto [j, c] : row.terms) {
            cols[j].row.push_back(static_cast<int>(r));
            cols[j].val.push_back(c);
        }
    }

    std::vector<Node> pool;
    std::priority_queue<int, std::vector<int>, NodeOrder> open{NodeOrder{&pool}};

    SolveOutcome out;
    out.objective = std::numeric_limits<double>::infinity();
    double best_open_bound = std::numeric_limits<double>::infinity();

    std::vector<double> lb(program.lower), ub(program.upper);
    auto apply_fixings = [&](int node) {
        lb = program.lower;
        ub = program.upper;
        for (int cur = node; cur >= 0; cur = pool[cur].parent) {
            if (pool[cur].fix_var >= 0)
                lb[pool[cur].fix_var] = ub[pool[cur].fix_var] =
                    static_cast<double>(pool[cur].fix_val);
        }
    };

    bool hit_limit = false;

    auto process = [&](int node_id) -> void {
        apply_fixings(node_id);
        detail::SimplexSolver lp(nv, cols, rel, rhs, program.objective, lb, ub);
        auto res = lp.solve();
        ++out.nodes;
        if (res.status == detail::LpStatus::IterLimit) {
            hit_limit = true;
            return;
        }
        if (res.status == detail::LpStatus::Infeasible) return;
        if (res.status == detail::LpStatus::Unbounded)
            throw std::runtime_error("unbounded relaxation; program is not well formed");
        if (res.objective >= out.objective - 1e-9) return;  // bound prune

        // most fractional binary, ties to the lowest index
        int branch_var = -1;
        double best_score = kIntegralityTol;
        for (int j = 0; j < program.num_binary; ++j) {
            const double frac = res.x[j] - std::floor(res.x[j]);
            const double score = std::min(frac, 1.0 - frac);  // distance to an integer
            if (score > best_score + 1e-12) {
                best_score = score;
                branch_var = j;
            }
        }
        if (branch_var < 0) {
            // integral: new incumbent; recompute the objective on the rounded point
            out.x = res.x;
            for (int j = 0; j < program.num_binary; ++j) out.x[j] = std::round(out.x[j]);
            double obj = 0.0;
            for (int j = 0; j < nv; ++j) obj += program.objective[j] * out.x[j];
            out.objective = obj;
            out.has_incumbent = true;
            return;
        }
        for (int v = 0; v <= 1; ++v) {
            pool.push_back({res.objective, pool[node_id].depth + 1, node_id, branch_var, v});
            open.push(static_cast<int>(pool.size()) - 1);
        }
    };

    pool.push_back({-std::numeric_limits<double>::infinity(), 0, -1, -1, 0});
    open.push(0);

    while (!open.empty() && !hit_limit) {
        if (out.nodes >= limits.max_nodes || elapsed() >= limits.max_seconds) {
            hit_limit = true;
            break;
        }
        const int id = open.top();
        open.pop();
        if (pool[id].bound >= out.objective - 1e-9 && out.has_incumbent) continue;
        process(id);
    }

    out.wall_seconds = elapsed();
    if (hit_limit) {
        out.status = SolveStatus::Limit;
        best_open_bound = open.empty() ? out.objective : pool[open.top()].bound;
        out.gap = out.has_incumbent
                      ? out.objective - std::min(best_open_bound, out.objective)
                      : std::numeric_limits<double>::infinity();
        return out;
    }
    if (!out.has_incumbent) {
        out.status = SolveStatus::Infeasible;
        return out;
    }
    out.status = SolveStatus::Optimal;
    out.gap = 0.0;
    return out;
}

BinaryLinearProgram linearize_abs(const BinaryLinearProgram& base,
                                  const std::vector<std::pair<int, double>>& cost_row) {
    BinaryLinearProgram p = base;
    for (auto& c : p.objective) c = 0.0;
    const int w = p.add_continuous(1.0, 0.0, std::numeric_limits<double>::infinity());
    auto up = cost_row;
    up.emplace_back(w, -1.0);
    p.add_row(std::move(up), Relation::LE, 0.0);  // c.x - w <= 0
    auto lo = cost_row;
    lo.emplace_back(w, 1.0);
    p.add_row(std::move(lo), Relation::GE, 0.0);  // c.x + w >= 0
    return p;
}

}  // namespace shp
