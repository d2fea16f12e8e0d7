#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "avmac/channel.hpp"
#include "avmac/distribution.hpp"
#include "avmac/graph.hpp"
#include "avmac/lp.hpp"

namespace avmac {

// Linear constraint system cutting out the symmetrizing distributions of a
// confusion graph: one variable per (state, x-tuple, y-tuple) with the
// channel-symmetry equalities plus per-conditioning-tuple normalization.
struct SymmetrizingLp {
    BipartiteGraph graph;
    int card_s = 0, card_x = 0, card_y = 0;
    int x_tuple_count = 0;  // |X|^(I-1)
    int y_tuple_count = 0;  // |Y|^(J-1)
    int var_count = 0;      // x_tuple_count * y_tuple_count * |S|

    std::vector<std::vector<double>> rows;  // symmetry rows first, then normalization
    std::vector<double> rhs;
    int symmetry_row_count = 0;

    int var_index(int s, int x_tuple, int y_tuple) const {
        return (x_tuple * y_tuple_count + y_tuple) * card_s + s;
    }
    std::vector<int> cond_arity() const;  // (I-1) copies of |X| then (J-1) of |Y|
};

SymmetrizingLp build_symmetrizing_lp(const DiscreteAVMAC& ch, const BipartiteGraph& graph);

// Largest violation of the symmetry rows by a conditional table laid out as
// the LP variables expect.
double symmetry_residual(const SymmetrizingLp& lp, const CondDistribution& q);

// Is the symmetrizing polytope nonempty?
bool symmetrizing_feasible(const SymmetrizingLp& lp);

struct GraphCost {
    double cost = 0.0;                       // expected state cost achieved
    std::vector<CondDistribution> q_family;  // one table per u-symbol
};

// Cheapest family of symmetrizing distributions when the spoofed codeword
// letters follow the product law of the input; one LP per u-symbol. Empty
// when the polytope is empty.
std::optional<GraphCost> weak_graph_cost(const DiscreteAVMAC& ch, const SymmetrizingLp& lp,
                                         const FactorizedInput& input);

// Saddle value max over coupled spoofed-letter laws (matching the input's
// coordinate and surviving-edge marginals) of the min over symmetrizing
// families; solved as a single LP after dualizing the inner minimization.
std::optional<GraphCost> strong_graph_cost(const DiscreteAVMAC& ch, const SymmetrizingLp& lp,
                                           const FactorizedInput& input);

enum class SymmMode { weak, strong };

struct SymmetrizabilityReport {
    SymmMode mode = SymmMode::weak;
    int order = 0;  // largest admissible edge count; 0 when none
    std::optional<BipartiteGraph> witness_graph;
    std::vector<CondDistribution> witness_q;
    std::optional<double> witness_cost;
};

// Margin used to implement the strict budget inequality "< lambda".
inline double strict_budget_margin(double lambda) { return 1e-9 * std::max(1.0, lambda); }

SymmetrizabilityReport weak_symmetrizability(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                             int list_cap = 4);
SymmetrizabilityReport strong_symmetrizability(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                               int list_cap = 4);

struct MinSymmetrizability {
    int order = 0;
    FactorizedInput minimizer;
};

// Minimum order over a simplex grid of factorized inputs meeting the input
// budgets. Throws when the feasible grid is empty.
MinSymmetrizability min_symmetrizability(const DiscreteAVMAC& ch, SymmMode mode, double grid_step,
                                         int u_card, int list_cap = 4);

}  // namespace avmac
