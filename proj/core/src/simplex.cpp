#include "simplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace shp::detail {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDualTol = 1e-7;
constexpr double kPivotEps = 1e-9;
constexpr double kBoundTol = 1e-8;
constexpr int kRefactorEvery = 500;
constexpr int kDegenerateSwitch = 4000;  // pivots before falling back to Bland
}  // namespace

SimplexSolver::SimplexSolver(int num_vars, const std::vector<SparseColumn>& cols,
                             const std::vector<int>& rel, const std::vector<double>& rhs,
                             const std::vector<double>& cost, const std::vector<double>& lb,
                             const std::vector<double>& ub)
    : n_(num_vars),
      m_(static_cast<int>(rhs.size())),
      cols_(cols),
      cost_(cost),
      lb_(lb),
      ub_(ub),
      rhs_(rhs),
      rel_(rel) {
    // row equilibration
    std::vector<double> row_scale(m_, 1.0);
    for (const auto& col : cols_)
        for (std::size_t t = 0; t < col.row.size(); ++t)
            row_scale[col.row[t]] = std::max(row_scale[col.row[t]], std::fabs(col.val[t]));
    for (auto& col : cols_)
        for (std::size_t t = 0; t < col.row.size(); ++t) col.val[t] /= row_scale[col.row[t]];
    for (int r = 0; r < m_; ++r) rhs_[r] /= row_scale[r];
}

LpResult SimplexSolver::solve(long max_iterations) {
    const int n = n_, m = m_;
    const int n_slack = m, n_art = m;
    const int total = n + n_slack + n_art;
    if (max_iterations <= 0) max_iterations = 20000L + 200L * (n + m);

    // objective scaling for pricing conditioning
    double cscale = 1.0;
    for (double c : cost_) cscale = std::max(cscale, std::fabs(c));

    std::vector<double> lb(total), ub(total);
    for (int j = 0; j < n; ++j) {
        lb[j] = lb_[j];
        ub[j] = ub_[j];
    }
    for (int r = 0; r < m; ++r) {
        const int j = n + r;
        if (rel_[r] < 0) {            // <=
            lb[j] = 0.0;
            ub[j] = kInf;
        } else if (rel_[r] > 0) {     // >=
            lb[j] = -kInf;
            ub[j] = 0.0;
        } else {                      // ==
            lb[j] = 0.0;
            ub[j] = 0.0;
        }
    }

    // nonbasic values at nearest finite bound
    std::vector<double> val(total, 0.0);
    for (int j = 0; j < n + n_slack; ++j) {
        if (std::isfinite(lb[j]))
            val[j] = lb[j];
        else if (std::isfinite(ub[j]))
            val[j] = ub[j];
        else
            val[j] = 0.0;
    }

    // initial residual r = b - A * val  (slacks all at 0 contribute nothing
    // unless their bound moved them, handled via val[])
    std::vector<double> resid(rhs_);
    for (int j = 0; j < n; ++j) {
        if (val[j] == 0.0) continue;
        const auto& col = cols_[j];
        for (std::size_t t = 0; t < col.row.size(); ++t) resid[col.row[t]] -= col.val[t] * val[j];
    }
    for (int r = 0; r < m; ++r) resid[r] -= val[n + r];

    // crash basis: rows whose slack can absorb the initial residual start on
    // their slack; only the rest get artificials (phase-1 cost +-1)
    std::vector<double> phase1_cost(total, 0.0);
    std::vector<int> basis(m);
    std::vector<char> in_basis(total, 0);
    for (int r = 0; r < m; ++r) {
        const int sj = n + r;
        const int aj = n + n_slack + r;
        const bool slack_fits = resid[r] >= lb[sj] - kBoundTol && resid[r] <= ub[sj] + kBoundTol;
        if (slack_fits) {
            basis[r] = sj;
            lb[aj] = 0.0;
            ub[aj] = 0.0;  // artificial never participates
            val[aj] = 0.0;
        } else {
            basis[r] = aj;
            if (resid[r] >= 0.0) {
                lb[aj] = 0.0;
                ub[aj] = kInf;
                phase1_cost[aj] = 1.0;
            } else {
                lb[aj] = -kInf;
                ub[aj] = 0.0;
                phase1_cost[aj] = -1.0;
            }
            val[aj] = 0.0;
        }
        in_basis[basis[r]] = 1;
    }
    Eigen::MatrixXd Binv = Eigen::MatrixXd::Identity(m, m);
    Eigen::VectorXd xB = Eigen::Map<Eigen::VectorXd>(resid.data(), m);

    auto column_of = [&](int j, Eigen::VectorXd& out) {
        out.setZero(m);
        if (j < n) {
            const auto& col = cols_[j];
            for (std::size_t t = 0; t < col.row.size(); ++t) out[col.row[t]] = col.val[t];
        } else if (j < n + n_slack) {
            out[j - n] = 1.0;
        } else {
            out[j - n - n_slack] = 1.0;
        }
    };

    auto refactorize = [&]() {
        Eigen::MatrixXd B(m, m);
        Eigen::VectorXd col(m);
        for (int r = 0; r < m; ++r) {
            column_of(basis[r], col);
            B.col(r) = col;
        }
        Binv = B.partialPivLu().inverse();
        // xB = Binv * (b - sum over nonbasic of A_j val_j)
        Eigen::VectorXd rb = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), m);
        for (int j = 0; j < total; ++j) {
            if (in_basis[j] || val[j] == 0.0) continue;
            if (j < n) {
                const auto& c = cols_[j];
                for (std::size_t t = 0; t < c.row.size(); ++t) rb[c.row[t]] -= c.val[t] * val[j];
            } else if (j < n + n_slack) {
                rb[j - n] -= val[j];
            } else {
                rb[j - n - n_slack] -= val[j];
            }
        }
        xB = Binv * rb;
    };

    Eigen::VectorXd cB(m), y(m), w(m), pivot_row(m), ger_u(m);
    std::vector<double> scaled_cost(total, 0.0);

    const double* cost_ptr = phase1_cost.data();
    bool phase1 = true;
    long iter = 0;
    int pivots_since_refactor = 0;
    int refactor_count = 0;
    int degenerate_run = 0;
    bool bland = false;
    bool verified = true;  // Binv is exact right after (re)factorization

    // w = Binv * A_enter using the column's sparsity
    auto ftran = [&](int j) {
        if (j < n) {
            w.setZero(m);
            const auto& col = cols_[j];
            for (std::size_t t = 0; t < col.row.size(); ++t)
                w.noalias() += col.val[t] * Binv.col(col.row[t]);
        } else if (j < n + n_slack) {
            w = Binv.col(j - n);
        } else {
            w = Binv.col(j - n - n_slack);
        }
    };

    while (true) {
        if (iter++ > max_iterations) {
            LpResult lim;
            lim.status = LpStatus::IterLimit;
            lim.iterations = iter;
            return lim;
        }

        for (int j = 0; j < total; ++j)
            scaled_cost[j] = phase1 ? cost_ptr[j] : (j < n ? cost_[j] / cscale : 0.0);

        for (int r = 0; r < m; ++r) cB[r] = scaled_cost[basis[r]];
        y.noalias() = Binv.transpose() * cB;

        // pricing
        int enter = -1;
        int dir = +1;
        double best_score = bland ? 0.0 : kDualTol;
        for (int j = 0; j < total; ++j) {
            if (in_basis[j]) continue;
            if (lb[j] == ub[j]) continue;  // fixed, can never move
            double d = scaled_cost[j];
            if (j < n) {
                const auto& col = cols_[j];
                for (std::size_t t = 0; t < col.row.size(); ++t) d -= y[col.row[t]] * col.val[t];
            } else if (j < n + n_slack) {
                d -= y[j - n];
            } else {
                d -= y[j - n - n_slack];
            }
            const bool at_lb = std::isfinite(lb[j]) && val[j] <= lb[j] + kBoundTol;
            const bool at_ub = std::isfinite(ub[j]) && val[j] >= ub[j] - kBoundTol;
            int cand_dir = 0;
            if (at_lb && d < -kDualTol)
                cand_dir = +1;
            else if (at_ub && d > kDualTol)
                cand_dir = -1;
            else if (!at_lb && !at_ub && std::fabs(d) > kDualTol)
                cand_dir = d < 0 ? +1 : -1;
            if (cand_dir == 0) continue;
            if (bland) {
                enter = j;
                dir = cand_dir;
                break;
            }
            if (std::fabs(d) > best_score) {
                best_score = std::fabs(d);
                enter = j;
                dir = cand_dir;
            }
        }

        if (enter < 0) {
            // candidate optimum: refresh the factorization once and re-price,
            // so accumulated update drift cannot certify a false optimum
            if (!verified) {
                refactorize();
                ++refactor_count;
                pivots_since_refactor = 0;
                verified = true;
                continue;
            }
            // optimal for this phase
            if (phase1) {
                double infeas = 0.0;
                for (int r = 0; r < m; ++r) {
                    const int j = basis[r];
                    if (j >= n + n_slack) infeas += std::fabs(xB[r]);
                }
                for (int j = n + n_slack; j < total; ++j)
                    if (!in_basis[j]) infeas += std::fabs(val[j]);
                if (infeas > 1e-6) {
                    LpResult bad;
                    bad.status = LpStatus::Infeasible;
                    bad.objective = infeas;
                    bad.iterations = iter;
                    return bad;
                }
                // lock artificials and switch costs
                for (int j = n + n_slack; j < total; ++j) {
                    lb[j] = 0.0;
                    ub[j] = 0.0;
                    if (!in_basis[j]) val[j] = 0.0;
                }
                phase1 = false;
                bland = false;
                degenerate_run = 0;
                continue;
            }
            LpResult res;
            res.status = LpStatus::Optimal;
            res.iterations = iter;
            res.refactorizations = refactor_count;
            res.x.assign(n, 0.0);
            for (int j = 0; j < n; ++j) res.x[j] = val[j];
            for (int r = 0; r < m; ++r)
                if (basis[r] < n) res.x[basis[r]] = xB[r];
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += cost_[j] * res.x[j];
            res.objective = obj;
            return res;
        }

        ftran(enter);

        // ratio test
        double t_own = (std::isfinite(lb[enter]) && std::isfinite(ub[enter]))
                           ? ub[enter] - lb[enter]
                           : kInf;
        double t_best = t_own;
        int leave_row = -1;
        for (int r = 0; r < m; ++r) {
            const double rate = dir * w[r];
            if (rate > kPivotEps) {
                const double lo = lb[basis[r]];
                if (!std::isfinite(lo)) continue;
                const double t = (xB[r] - lo) / rate;
                if (t < t_best - 1e-12) {
                    t_best = t;
                    leave_row = r;
                }
            } else if (rate < -kPivotEps) {
                const double hi = ub[basis[r]];
                if (!std::isfinite(hi)) continue;
                const double t = (xB[r] - hi) / rate;
                if (t < t_best - 1e-12) {
                    t_best = t;
                    leave_row = r;
                }
            }
        }
        if (!std::isfinite(t_best)) {
            LpResult ub_res;
            ub_res.status = LpStatus::Unbounded;
            ub_res.iterations = iter;
            return ub_res;
        }
        if (t_best < 0.0) t_best = 0.0;

        // stability: among near-ties pick the largest pivot magnitude
        if (leave_row >= 0) {
            double best_piv = std::fabs(w[leave_row]);
            for (int r = 0; r < m; ++r) {
                if (r == leave_row) continue;
                const double rate = dir * w[r];
                double t = kInf;
                if (rate > kPivotEps && std::isfinite(lb[basis[r]]))
                    t = (xB[r] - lb[basis[r]]) / rate;
                else if (rate < -kPivotEps && std::isfinite(ub[basis[r]]))
                    t = (xB[r] - ub[basis[r]]) / rate;
                if (t <= t_best + 1e-9 && std::fabs(w[r]) > best_piv) {
                    best_piv = std::fabs(w[r]);
                    leave_row = r;
                }
            }
        }

        if (t_best <= 1e-10) {
            if (++degenerate_run > kDegenerateSwitch) bland = true;
        } else {
            degenerate_run = 0;
            bland = false;
        }

        if (leave_row < 0) {
            // bound flip, basis unchanged
            val[enter] += dir * t_best;
            xB.noalias() -= dir * t_best * w;
            continue;
        }

        // pivot
        const int leave = basis[leave_row];
        const double rate = dir * w[leave_row];
        val[leave] = rate > 0.0 ? lb[leave] : ub[leave];
        in_basis[leave] = 0;

        const double enter_val = val[enter] + dir * t_best;
        xB.noalias() -= dir * t_best * w;
        basis[leave_row] = enter;
        in_basis[enter] = 1;
        xB[leave_row] = enter_val;

        // Binv <- Binv - u p^T with p the scaled pivot row; one streaming pass
        const double piv = w[leave_row];
        pivot_row = Binv.row(leave_row) / piv;
        ger_u = w;
        ger_u[leave_row] = piv - 1.0;
        Binv.noalias() -= ger_u * pivot_row.transpose();
        verified = false;

        if (++pivots_since_refactor >= kRefactorEvery) {
            refactorize();
            ++refactor_count;
            pivots_since_refactor = 0;
            verified = true;
        }
    }
}

}  // namespace shp::detail
