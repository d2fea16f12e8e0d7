#pragma once

#include <string>
#include <utility>
#include <vector>

namespace avmac {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus s);

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    double value = 0.0;
    std::vector<double> x;
    int iterations = 0;
    std::string note;  // condition diagnostics on numerical failure
};

// Solves min c'x subject to A x = b, x >= 0 with a dense two-phase primal
// simplex using Bland's anti-cycling rule. Intended for desk-scale instances
// (up to a few thousand variables); constraint residuals and the objective are
// accurate to ~1e-8 there.
LpSolution solve_lp(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                    const std::vector<double>& c, int max_iterations = 200000);

// Incremental front end for problems with free variables and inequality rows;
// converts to standard form (variable splitting + slacks) and maps back.
class LpBuilder {
  public:
    // Returns the variable id. Free variables are split internally.
    int add_var(double objective_coef, bool nonneg = true);

    void add_eq(std::vector<std::pair<int, double>> terms, double rhs);
    void add_le(std::vector<std::pair<int, double>> terms, double rhs);

    int var_count() const { return static_cast<int>(vars_.size()); }

    struct Result {
        LpStatus status;
        double value = 0.0;
        std::vector<double> x;  // original variable values
        int iterations = 0;
        std::string note;
    };
    Result solve(int max_iterations = 200000) const;

  private:
    struct VarInfo {
        double cost;
        bool nonneg;
    };
    struct Row {
        std::vector<std::pair<int, double>> terms;
        double rhs;
        bool is_eq;
    };
    std::vector<VarInfo> vars_;
    std::vector<Row> rows_;
};

}  // namespace avmac
