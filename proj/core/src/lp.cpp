#include "avmac/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace avmac {

const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration_limit";
    }
    return "?";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kPhase1Tol = 1e-7;

struct Tableau {
    int m = 0;                       // rows
    int n = 0;                       // structural + artificial columns
    std::vector<std::vector<double>> t;  // m rows of n coefficients
    std::vector<double> rhs;
    std::vector<int> basis;          // basic column per row

    void pivot(int row, int col) {
        const double piv = t[row][col];
        const double inv = 1.0 / piv;
        for (double& v : t[row]) v *= inv;
        rhs[row] *= inv;
        t[row][col] = 1.0;  // kill residual rounding on the pivot itself
        for (int r = 0; r < m; ++r) {
            if (r == row) continue;
            const double factor = t[r][col];
            if (factor == 0.0) continue;
            for (int j = 0; j < n; ++j) t[r][j] -= factor * t[row][j];
            rhs[r] -= factor * rhs[row];
            t[r][col] = 0.0;
        }
        basis[row] = col;
    }
};

// Reduced costs for cost vector `c` (length n) under the current basis.
std::vector<double> reduced_costs(const Tableau& tab, const std::vector<double>& c) {
    std::vector<double> red = c;
    for (int r = 0; r < tab.m; ++r) {
        const double cb = c[tab.basis[r]];
        if (cb == 0.0) continue;
        for (int j = 0; j < tab.n; ++j) red[j] -= cb * tab.t[r][j];
    }
    return red;
}

// Runs Bland-rule simplex on the tableau; `allowed` masks columns that may
// enter. Returns optimal/unbounded/iteration_limit.
LpStatus run_simplex(Tableau& tab, const std::vector<double>& c, const std::vector<bool>& allowed,
                     int max_iterations, int& iterations) {
    while (iterations < max_iterations) {
        const std::vector<double> red = reduced_costs(tab, c);
        int enter = -1;
        for (int j = 0; j < tab.n; ++j) {
            if (!allowed[j]) continue;
            if (red[j] < -kCostTol) {
                enter = j;
                break;  // Bland: lowest index
            }
        }
        if (enter < 0) return LpStatus::optimal;

        int leave = -1;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (int r = 0; r < tab.m; ++r) {
            const double a = tab.t[r][enter];
            if (a > kPivotTol) {
                const double ratio = tab.rhs[r] / a;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (leave < 0 || tab.basis[r] < tab.basis[leave]))) {
                    best_ratio = ratio;
                    leave = r;
                }
            }
        }
        if (leave < 0) return LpStatus::unbounded;
        tab.pivot(leave, enter);
        ++iterations;
    }
    return LpStatus::iteration_limit;
}

}  // namespace

LpSolution solve_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                    const std::vector<double>& c, int max_iterations) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(c.size());
    for (const auto& row : a)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("solve_lp: ragged row");
    if (static_cast<int>(b.size()) != m) throw std::invalid_argument("solve_lp: rhs length mismatch");
    for (const auto& row : a)
        for (double v : row)
            if (!std::isfinite(v)) throw std::invalid_argument("solve_lp: non-finite coefficient");

    LpSolution sol;
    if (m == 0) {
        // No constraints: optimum is 0 unless some cost is negative.
        sol.x.assign(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j)
            if (c[j] < -kCostTol) {
                sol.status = LpStatus::unbounded;
                return sol;
            }
        sol.status = LpStatus::optimal;
        return sol;
    }

    Tableau tab;
    tab.m = m;
    tab.n = n + m;  // structural + one artificial per row
    tab.t.assign(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(tab.n), 0.0));
    tab.rhs.resize(static_cast<std::size_t>(m));
    tab.basis.resize(static_cast<std::size_t>(m));

    // Row equilibration, then sign-flip for nonnegative RHS.
    for (int r = 0; r < m; ++r) {
        double scale = std::abs(b[r]);
        for (double v : a[r]) scale = std::max(scale, std::abs(v));
        if (scale <= 0.0) scale = 1.0;
        const double sign = b[r] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) tab.t[r][j] = sign * a[r][j] / scale;
        tab.rhs[r] = sign * b[r] / scale;
        tab.t[r][n + r] = 1.0;
        tab.basis[r] = n + r;
    }

    std::vector<double> phase1_cost(static_cast<std::size_t>(tab.n), 0.0);
    for (int r = 0; r < m; ++r) phase1_cost[n + r] = 1.0;
    std::vector<bool> allow_all(static_cast<std::size_t>(tab.n), true);

    LpStatus st = run_simplex(tab, phase1_cost, allow_all, max_iterations, sol.iterations);
    if (st == LpStatus::iteration_limit) {
        sol.status = st;
        sol.note = "phase-1 iteration limit";
        return sol;
    }
    double infeas = 0.0;
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] >= n) infeas += tab.rhs[r];
    if (infeas > kPhase1Tol) {
        sol.status = LpStatus::infeasible;
        sol.value = infeas;
        sol.note = "phase-1 residual " + std::to_string(infeas);
        return sol;
    }

    // Drive leftover artificials out of the basis (rows they sit on are
    // either pivotable to a structural column or redundant).
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] < n) continue;
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (std::abs(tab.t[r][j]) > 1e-7) {
                col = j;
                break;
            }
        if (col >= 0) {
            tab.pivot(r, col);
        } else {
            // Redundant row: zero it so it can never constrain a pivot.
            std::fill(tab.t[r].begin(), tab.t[r].end(), 0.0);
            tab.t[r][tab.basis[r]] = 1.0;
            tab.rhs[r] = 0.0;
        }
    }

    std::vector<double> phase2_cost(static_cast<std::size_t>(tab.n), 0.0);
    for (int j = 0; j < n; ++j) phase2_cost[j] = c[j];
    std::vector<bool> allow_structural(static_cast<std::size_t>(tab.n), false);
    for (int j = 0; j < n; ++j) allow_structural[j] = true;

    st = run_simplex(tab, phase2_cost, allow_structural, max_iterations, sol.iterations);
    if (st == LpStatus::iteration_limit) {
        sol.status = st;
        sol.note = "phase-2 iteration limit";
        return sol;
    }
    if (st == LpStatus::unbounded) {
        sol.status = st;
        return sol;
    }

    sol.status = LpStatus::optimal;
    sol.x.assign(static_cast<std::size_t>(n), 0.0);
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] < n) sol.x[tab.basis[r]] = std::max(tab.rhs[r], 0.0);
    sol.value = 0.0;
    for (int j = 0; j < n; ++j) sol.value += c[j] * sol.x[j];
    return sol;
}

int LpBuilder::add_var(double objective_coef, bool nonneg) {
    vars_.push_back({objective_coef, nonneg});
    return static_cast<int>(vars_.size()) - 1;
}

void LpBuilder::add_eq(std::vector<std::pair<int, double>> terms, double rhs) {
    rows_.push_back({std::move(terms), rhs, true});
}

void LpBuilder::add_le(std::vector<std::pair<int, double>> terms, double rhs) {
    rows_.push_back({std::move(terms), rhs, false});
}

LpBuilder::Result LpBuilder::solve(int max_iterations) const {
    // Column layout: nonneg var -> 1 column; free var -> plus/minus pair;
    // one slack per inequality row.
    std::vector<int> col_of(vars_.size());
    int n = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        col_of[i] = n;
        n += vars_[i].nonneg ? 1 : 2;
    }
    int slack_base = n;
    for (const auto& row : rows_)
        if (!row.is_eq) ++n;

    const int m = static_cast<int>(rows_.size());
    std::vector<std::vector<double>> a(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    std::vector<double> c(static_cast<std::size_t>(n), 0.0);

    for (std::size_t i = 0; i < vars_.size(); ++i) {
        c[col_of[i]] = vars_[i].cost;
        if (!vars_[i].nonneg) c[col_of[i] + 1] = -vars_[i].cost;
    }
    int slack = slack_base;
    for (int r = 0; r < m; ++r) {
        for (const auto& [vi, coef] : rows_[r].terms) {
            a[r][col_of[vi]] += coef;
            if (!vars_[vi].nonneg) a[r][col_of[vi] + 1] -= coef;
        }
        b[r] = rows_[r].rhs;
        if (!rows_[r].is_eq) a[r][slack++] = 1.0;
    }

    const LpSolution s = solve_lp(a, b, c, max_iterations);
    Result out;
    out.status = s.status;
    out.value = s.value;
    out.iterations = s.iterations;
    out.note = s.note;
    if (s.status == LpStatus::optimal) {
        out.x.resize(vars_.size());
        for (std::size_t i = 0; i < vars_.size(); ++i)
            out.x[i] = vars_[i].nonneg ? s.x[col_of[i]] : s.x[col_of[i]] - s.x[col_of[i] + 1];
    }
    return out;
}

}  // namespace avmac
