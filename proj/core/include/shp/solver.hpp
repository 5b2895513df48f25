#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace shp {

enum class Relation { LE, EQ, GE };

struct LinearConstraint {
    std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
    Relation rel = Relation::LE;
    double rhs = 0.0;
};

// All-binary linear program plus optional continuous auxiliaries.
// Variables 0..num_binary-1 are binary; the rest are continuous with the
// given bounds. Objective sense is minimize.
struct BinaryLinearProgram {
    int num_binary = 0;
    int num_continuous = 0;
    std::vector<double> objective;        // per variable
    std::vector<double> lower;            // per variable; binaries within [0,1]
    std::vector<double> upper;
    std::vector<LinearConstraint> rows;

    int num_vars() const { return num_binary + num_continuous; }

    int add_binary(double obj = 0.0);
    int add_continuous(double obj, double lb, double ub);
    void add_row(std::vector<std::pair<int, double>> terms, Relation rel, double rhs);
    void fix_binary(int var, int value);
};

enum class SolveStatus { Optimal, Infeasible, Limit };

struct SolveLimits {
    std::int64_t max_nodes = 1'000'000;
    double max_seconds = 600.0;
};

struct SolveOutcome {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> x;       // incumbent (binaries exactly integral)
    double objective = std::numeric_limits<double>::infinity();
    double gap = 0.0;            // 0 when proven optimal
    std::int64_t nodes = 0;
    double wall_seconds = 0.0;
    bool has_incumbent = false;
};

inline constexpr double kIntegralityTol = 1e-6;
inline constexpr double kFeasibilityTol = 1e-6;

// Proven-exact optimization: best-first branch and bound on the simplex
// relaxation, branching on the most fractional binary (ties to the lowest
// index).
SolveOutcome solve_exact(const BinaryLinearProgram& program, const SolveLimits& limits = {});

// Rewrites a program whose intent is min |c.x| into min w with
// c.x <= w and c.x >= -w, w >= 0 continuous.
BinaryLinearProgram linearize_abs(const BinaryLinearProgram& base,
                                  const std::vector<std::pair<int, double>>& cost_row);

// Constraint violation of a candidate point, as max over rows of
// violation / max(1, |rhs|).
double max_constraint_violation(const BinaryLinearProgram& program, const std::vector<double>& x);

// CPLEX-style LP text exchange; export/import round-trips exactly.
void export_lp(const BinaryLinearProgram& program, const std::string& path);
std::string lp_to_string(const BinaryLinearProgram& program);
BinaryLinearProgram import_lp(const std::string& path);
BinaryLinearProgram lp_from_string(const std::string& text);

}  // namespace shp
