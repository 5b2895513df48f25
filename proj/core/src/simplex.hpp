#pragma once

// Internal bounded-variable primal simplex used by the branch-and-bound
// driver. Not part of the public surface.

#include <vector>

namespace shp::detail {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double objective = 0.0;
    std::vector<double> x;  // structural variables only
    long iterations = 0;
    int refactorizations = 0;
};

struct SparseColumn {
    std::vector<int> row;
    std::vector<double> val;
};

// min c.x  s.t.  constraint rows (as dense-in-sparse columns), l <= x <= u.
// Rows are given via the column-major matrix plus per-row relation/rhs.
class SimplexSolver {
public:
    // rel: -1 for <=, 0 for =, +1 for >=
    SimplexSolver(int num_vars, const std::vector<SparseColumn>& cols,
                  const std::vector<int>& rel, const std::vector<double>& rhs,
                  const std::vector<double>& cost, const std::vector<double>& lb,
                  const std::vector<double>& ub);

    LpResult solve(long max_iterations = 0);

private:
    int n_ = 0;  // structural
    int m_ = 0;  // rows
    std::vector<SparseColumn> cols_;   // structural columns, row-scaled
    std::vector<double> cost_;
    std::vector<double> lb_, ub_;      // structural + slack + artificial
    std::vector<double> rhs_;          // row-scaled
    std::vector<int> rel_;
};

}  // namespace shp::detail
