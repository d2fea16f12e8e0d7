#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace avmac {

inline constexpr double kConstructionTol = 1e-12;  // normalization at construction
inline constexpr double kDerivedTol = 1e-9;        // tolerance for derived quantities

// Dense joint probability table over a product alphabet. Variable 0 is the
// slowest-moving index. Alphabets are desk-scale so dense storage is fine.
class JointDistribution {
  public:
    JointDistribution() = default;
    JointDistribution(std::vector<int> arity, std::vector<double> probs);

    static JointDistribution uniform(std::vector<int> arity);

    int variable_count() const { return static_cast<int>(arity_.size()); }
    const std::vector<int>& arity() const { return arity_; }
    std::size_t cell_count() const { return probs_.size(); }
    const std::vector<double>& probs() const { return probs_; }
    std::vector<double>& mutable_probs() { return probs_; }

    double operator[](std::size_t flat) const { return probs_[flat]; }
    double& operator[](std::size_t flat) { return probs_[flat]; }

    std::size_t flat_index(std::span<const int> symbols) const;
    void unflatten(std::size_t flat, std::span<int> symbols_out) const;

    // Throws std::invalid_argument when entries are negative or do not sum to
    // one within `tol`.
    void validate(double tol = kConstructionTol) const;

    // Sums out every variable not in `keep`; result variables appear in the
    // order given by `keep`.
    JointDistribution marginalize(std::span<const int> keep) const;

    // Product of the two group marginals, laid out over the same variable
    // order as *this (variables outside either group are summed out first).
    JointDistribution product_of_group_marginals(std::span<const int> group_a,
                                                 std::span<const int> group_b) const;

  private:
    std::vector<int> arity_;
    std::vector<double> probs_;
};

JointDistribution marginalize(const JointDistribution& d, std::span<const int> keep);

// Conditional probability table: one row over the target alphabet per
// conditioning tuple (mixed-radix over cond_arity, first index slowest).
class CondDistribution {
  public:
    CondDistribution() = default;
    CondDistribution(std::vector<int> cond_arity, int target_arity, std::vector<double> rows);

    static CondDistribution uniform(std::vector<int> cond_arity, int target_arity);

    const std::vector<int>& cond_arity() const { return cond_arity_; }
    int target_arity() const { return target_arity_; }
    std::size_t row_count() const;
    const std::vector<double>& rows() const { return rows_; }
    std::vector<double>& mutable_rows() { return rows_; }

    double at(std::size_t cond_flat, int target) const {
        return rows_[cond_flat * static_cast<std::size_t>(target_arity_) + target];
    }
    double& at(std::size_t cond_flat, int target) {
        return rows_[cond_flat * static_cast<std::size_t>(target_arity_) + target];
    }

    void validate(double tol = kConstructionTol) const;

  private:
    std::vector<int> cond_arity_;
    int target_arity_ = 0;
    std::vector<double> rows_;
};

// Joint table whose entries are exact multiples of 1/n (empirical type of
// length-n sequences).
struct EmpiricalType {
    JointDistribution dist;
    int blocklength = 0;

    void validate(double tol = kConstructionTol) const;
};

// Joint empirical type of co-indexed sequences; seqs[v][i] is the i-th symbol
// of variable v. Throws on length mismatch or out-of-range symbols.
EmpiricalType empirical_joint_type(std::span<const std::vector<int>> seqs,
                                   std::span<const int> arity);

// Arithmetic mean of per-letter costs.
double average_cost(std::span<const int> seq, std::span<const double> cost);

// Factorized input law P_u * P_{x|u} * P_{y|u}. Keeping the factors (rather
// than the joint) makes the factorization hypothesis hold by construction.
struct FactorizedInput {
    std::vector<double> pu;
    CondDistribution px_given_u;  // cond over {|U|}, target |X|
    CondDistribution py_given_u;

    int u_card() const { return static_cast<int>(pu.size()); }
    int x_card() const { return px_given_u.target_arity(); }
    int y_card() const { return py_given_u.target_arity(); }

    void validate(double tol = kConstructionTol) const;

    JointDistribution joint_uxy() const;  // P(u,x,y)

    double expected_cost_x(std::span<const double> f1) const;
    double expected_cost_y(std::span<const double> f2) const;
};

// Tries to factor a joint P(u,x,y); throws std::invalid_argument when the
// joint is not of product form P_u P_{x|u} P_{y|u} within `tol`.
FactorizedInput factorize_input(const JointDistribution& puxy, double tol = kDerivedTol);

// All points of the step-h grid on the probability simplex of dimension k
// (h must be 1/m for integral m; each point has entries j/m summing to 1).
std::vector<std::vector<double>> simplex_grid(int k, double step);

// All factorized inputs on the simplex grid meeting both input-cost budgets.
std::vector<FactorizedInput> input_grid(int u_card, int x_card, int y_card, double step,
                                        std::span<const double> f1, double gamma1,
                                        std::span<const double> f2, double gamma2);

}  // namespace avmac
