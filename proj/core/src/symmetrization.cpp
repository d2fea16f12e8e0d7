#include "avmac/symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace avmac {

namespace {

constexpr double kWitnessRowTol = 1e-8;

int int_pow(int base, int exp) {
    int v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

// Digits of a tuple index, first coordinate slowest.
void tuple_digits(int index, int base, std::span<int> out) {
    for (std::size_t k = out.size(); k-- > 0;) {
        out[k] = index % base;
        index /= base;
    }
}

int tuple_index(std::span<const int> digits, int base) {
    int idx = 0;
    for (int d : digits) idx = idx * base + d;
    return idx;
}

// Sub-tuple of x indexed by the ascending elements of `index_set`.
std::vector<int> subtuple(std::span<const int> x, const std::vector<int>& ascending_set) {
    std::vector<int> out;
    out.reserve(ascending_set.size());
    for (int a : ascending_set) out.push_back(x[static_cast<std::size_t>(a)]);
    return out;
}

std::vector<int> complement_set(int n, int skip) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(n) - 1);
    for (int k = 0; k < n; ++k)
        if (k != skip) out.push_back(k);
    return out;
}

// Product-law weights over conditioning tuples for one u-symbol.
std::vector<double> cond_tuple_weights(const SymmetrizingLp& lp, const FactorizedInput& input,
                                       int u) {
    const int xlen = lp.graph.left_count - 1;
    const int ylen = lp.graph.right_count - 1;
    std::vector<double> w(static_cast<std::size_t>(lp.x_tuple_count) * lp.y_tuple_count, 1.0);
    std::vector<int> xd(static_cast<std::size_t>(xlen)), yd(static_cast<std::size_t>(ylen));
    for (int xt = 0; xt < lp.x_tuple_count; ++xt) {
        tuple_digits(xt, lp.card_x, xd);
        double wx = 1.0;
        for (int d : xd) wx *= input.px_given_u.at(u, d);
        for (int yt = 0; yt < lp.y_tuple_count; ++yt) {
            tuple_digits(yt, lp.card_y, yd);
            double wy = 1.0;
            for (int d : yd) wy *= input.py_given_u.at(u, d);
            w[static_cast<std::size_t>(xt) * lp.y_tuple_count + yt] = wx * wy;
        }
    }
    return w;
}

CondDistribution q_from_vector(const SymmetrizingLp& lp, std::span<const double> q) {
    CondDistribution out(lp.cond_arity(), lp.card_s,
                         std::vector<double>(static_cast<std::size_t>(lp.var_count)));
    for (int xt = 0; xt < lp.x_tuple_count; ++xt)
        for (int yt = 0; yt < lp.y_tuple_count; ++yt)
            for (int s = 0; s < lp.card_s; ++s)
                out.at(static_cast<std::size_t>(xt) * lp.y_tuple_count + yt, s) =
                    std::max(q[static_cast<std::size_t>(lp.var_index(s, xt, yt))], 0.0);
    return out;
}

}  // namespace

std::vector<int> SymmetrizingLp::cond_arity() const {
    std::vector<int> arity;
    for (int k = 0; k + 1 < graph.left_count; ++k) arity.push_back(card_x);
    for (int k = 0; k + 1 < graph.right_count; ++k) arity.push_back(card_y);
    if (arity.empty()) arity.push_back(1);  // unconditional: single dummy row
    return arity;
}

SymmetrizingLp build_symmetrizing_lp(const DiscreteAVMAC& ch, const BipartiteGraph& graph) {
    require_valid(ch);
    validate_graph(graph);

    SymmetrizingLp lp;
    lp.graph = graph;
    lp.card_s = ch.card_s;
    lp.card_x = ch.card_x;
    lp.card_y = ch.card_y;
    lp.x_tuple_count = int_pow(ch.card_x, graph.left_count - 1);
    lp.y_tuple_count = int_pow(ch.card_y, graph.right_count - 1);
    lp.var_count = lp.x_tuple_count * lp.y_tuple_count * ch.card_s;
    if (lp.var_count > 200000)
        throw std::invalid_argument("symmetrizing LP too large for desk-scale solve");

    const int left = graph.left_count, right = graph.right_count;
    const int x_full = int_pow(ch.card_x, left);
    const int y_full = int_pow(ch.card_y, right);

    // The constraint set relates every pair of edges: swapping which edge
    // carries the genuine transmission must leave the mixed output law
    // unchanged, and the conditional table must not care about the order of
    // the spoofed letters. Quantifying the swap over automorphisms only would
    // leave graphs with trivial automorphism group unconstrained, and the
    // converse attack needs the full edge-pair swaps.
    //
    // Rows are built sparsely (at most 2|S| nonzeros each), deduplicated up to
    // scaling, and densified afterwards.
    std::set<std::vector<std::pair<int, long long>>> seen;
    std::vector<std::vector<std::pair<int, double>>> sparse_rows;
    std::vector<std::pair<int, double>> row;
    auto push_row = [&] {
        std::sort(row.begin(), row.end());
        std::vector<std::pair<int, double>> merged;  // combine indices, drop cancellations
        for (const auto& [idx, v] : row) {
            if (!merged.empty() && merged.back().first == idx)
                merged.back().second += v;
            else
                merged.emplace_back(idx, v);
        }
        std::erase_if(merged, [](const auto& t) { return std::abs(t.second) <= 1e-12; });
        if (merged.empty()) return;
        const double lead = merged.front().second;
        std::vector<std::pair<int, long long>> key;
        key.reserve(merged.size());
        for (const auto& [idx, v] : merged) key.emplace_back(idx, llround(v / lead * 1e10));
        if (!seen.insert(std::move(key)).second) return;
        sparse_rows.push_back(std::move(merged));
    };

    std::vector<int> xd(static_cast<std::size_t>(left)), yd(static_cast<std::size_t>(right));
    for (std::size_t e1 = 0; e1 < graph.edges.size(); ++e1)
        for (std::size_t e2 = e1 + 1; e2 < graph.edges.size(); ++e2) {
            const auto [i, j] = graph.edges[e1];
            const auto [i2, j2] = graph.edges[e2];
            const auto keep_1x = complement_set(left, i);
            const auto keep_1y = complement_set(right, j);
            const auto keep_2x = complement_set(left, i2);
            const auto keep_2y = complement_set(right, j2);
            for (int xf = 0; xf < x_full; ++xf) {
                tuple_digits(xf, ch.card_x, xd);
                const int xt_1 = tuple_index(subtuple(xd, keep_1x), ch.card_x);
                const int xt_2 = tuple_index(subtuple(xd, keep_2x), ch.card_x);
                for (int yf = 0; yf < y_full; ++yf) {
                    tuple_digits(yf, ch.card_y, yd);
                    const int yt_1 = tuple_index(subtuple(yd, keep_1y), ch.card_y);
                    const int yt_2 = tuple_index(subtuple(yd, keep_2y), ch.card_y);
                    for (int z = 0; z < ch.card_z; ++z) {
                        row.clear();
                        for (int s = 0; s < ch.card_s; ++s) {
                            const double pl = ch.transition(xd[static_cast<std::size_t>(i)],
                                                            yd[static_cast<std::size_t>(j)], s, z);
                            if (pl != 0.0) row.emplace_back(lp.var_index(s, xt_1, yt_1), pl);
                            const double pr = ch.transition(xd[static_cast<std::size_t>(i2)],
                                                            yd[static_cast<std::size_t>(j2)], s, z);
                            if (pr != 0.0) row.emplace_back(lp.var_index(s, xt_2, yt_2), -pr);
                        }
                        push_row();
                    }
                }
            }
        }

    // Invariance under reordering the spoofed letters: adjacent coordinate
    // transpositions generate the full symmetric group on each side.
    const int xlen = left - 1, ylen = right - 1;
    std::vector<int> xt_digits(static_cast<std::size_t>(xlen)), yt_digits(static_cast<std::size_t>(ylen));
    for (int xt = 0; xt < lp.x_tuple_count; ++xt) {
        tuple_digits(xt, ch.card_x, xt_digits);
        for (int k = 0; k + 1 < xlen; ++k) {
            auto swapped = xt_digits;
            std::swap(swapped[static_cast<std::size_t>(k)], swapped[static_cast<std::size_t>(k) + 1]);
            const int xt2 = tuple_index(swapped, ch.card_x);
            if (xt2 == xt) continue;
            for (int yt = 0; yt < lp.y_tuple_count; ++yt)
                for (int s = 0; s < ch.card_s; ++s) {
                    row = {{lp.var_index(s, xt, yt), 1.0}, {lp.var_index(s, xt2, yt), -1.0}};
                    push_row();
                }
        }
    }
    for (int yt = 0; yt < lp.y_tuple_count; ++yt) {
        tuple_digits(yt, ch.card_y, yt_digits);
        for (int k = 0; k + 1 < ylen; ++k) {
            auto swapped = yt_digits;
            std::swap(swapped[static_cast<std::size_t>(k)], swapped[static_cast<std::size_t>(k) + 1]);
            const int yt2 = tuple_index(swapped, ch.card_y);
            if (yt2 == yt) continue;
            for (int xt = 0; xt < lp.x_tuple_count; ++xt)
                for (int s = 0; s < ch.card_s; ++s) {
                    row = {{lp.var_index(s, xt, yt), 1.0}, {lp.var_index(s, xt, yt2), -1.0}};
                    push_row();
                }
        }
    }
    lp.symmetry_row_count = static_cast<int>(sparse_rows.size());
    lp.rows.reserve(sparse_rows.size());
    for (const auto& sr : sparse_rows) {
        std::vector<double> dense(static_cast<std::size_t>(lp.var_count), 0.0);
        for (const auto& [idx, v] : sr) dense[static_cast<std::size_t>(idx)] = v;
        lp.rows.push_back(std::move(dense));
        lp.rhs.push_back(0.0);
    }

    for (int xt = 0; xt < lp.x_tuple_count; ++xt)
        for (int yt = 0; yt < lp.y_tuple_count; ++yt) {
            std::vector<double> row(static_cast<std::size_t>(lp.var_count), 0.0);
            for (int s = 0; s < ch.card_s; ++s)
                row[static_cast<std::size_t>(lp.var_index(s, xt, yt))] = 1.0;
            lp.rows.push_back(std::move(row));
            lp.rhs.push_back(1.0);
        }
    return lp;
}

double symmetry_residual(const SymmetrizingLp& lp, const CondDistribution& q) {
    if (static_cast<int>(q.rows().size()) != lp.var_count)
        throw std::invalid_argument("symmetry_residual: table shape mismatch");
    double worst = 0.0;
    for (int r = 0; r < lp.symmetry_row_count; ++r) {
        double acc = 0.0;
        for (int xt = 0; xt < lp.x_tuple_count; ++xt)
            for (int yt = 0; yt < lp.y_tuple_count; ++yt)
                for (int s = 0; s < lp.card_s; ++s)
                    acc += lp.rows[static_cast<std::size_t>(r)]
                                  [static_cast<std::size_t>(lp.var_index(s, xt, yt))] *
                           q.at(static_cast<std::size_t>(xt) * lp.y_tuple_count + yt, s);
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

bool symmetrizing_feasible(const SymmetrizingLp& lp) {
    const std::vector<double> zero_cost(static_cast<std::size_t>(lp.var_count), 0.0);
    return solve_lp(lp.rows, lp.rhs, zero_cost).status == LpStatus::optimal;
}

std::optional<GraphCost> weak_graph_cost(const DiscreteAVMAC& ch, const SymmetrizingLp& lp,
                                         const FactorizedInput& input) {
    GraphCost out;
    out.q_family.reserve(static_cast<std::size_t>(input.u_card()));
    for (int u = 0; u < input.u_card(); ++u) {
        const auto weights = cond_tuple_weights(lp, input, u);
        std::vector<double> cost(static_cast<std::size_t>(lp.var_count));
        for (int xt = 0; xt < lp.x_tuple_count; ++xt)
            for (int yt = 0; yt < lp.y_tuple_count; ++yt)
                for (int s = 0; s < ch.card_s; ++s)
                    cost[static_cast<std::size_t>(lp.var_index(s, xt, yt))] =
                        weights[static_cast<std::size_t>(xt) * lp.y_tuple_count + yt] * ch.g[s];
        const LpSolution sol = solve_lp(lp.rows, lp.rhs, cost);
        if (sol.status == LpStatus::infeasible) return std::nullopt;
        if (sol.status != LpStatus::optimal)
            throw std::runtime_error("weak_graph_cost: LP solve failed (" +
                                     std::string(to_string(sol.status)) + ") " + sol.note);
        out.cost += input.pu[u] * sol.value;
        out.q_family.push_back(q_from_vector(lp, sol.x));
    }
    return out;
}

std::optional<GraphCost> strong_graph_cost(const DiscreteAVMAC& ch, const SymmetrizingLp& lp,
                                           const FactorizedInput& input) {
    if (!symmetrizing_feasible(lp)) return std::nullopt;

    const int u_card = input.u_card();
    const int cells = lp.x_tuple_count * lp.y_tuple_count;
    const int xlen = lp.graph.left_count - 1;
    const int ylen = lp.graph.right_count - 1;
    const int row_count = static_cast<int>(lp.rows.size());

    LpBuilder builder;
    // Coupled spoofed-letter law P(u, x-tuple, y-tuple).
    std::vector<int> p_var(static_cast<std::size_t>(u_card) * cells);
    for (auto& v : p_var) v = builder.add_var(0.0, true);
    auto p_of = [&](int u, int xt, int yt) {
        return p_var[static_cast<std::size_t>(u) * cells + static_cast<std::size_t>(xt) * lp.y_tuple_count + yt];
    };
    // One dual vector per u for the inner minimization; maximizing
    // sum_u rhs'y_u, so the builder minimizes the negation.
    std::vector<int> y_var(static_cast<std::size_t>(u_card) * row_count);
    for (int u = 0; u < u_card; ++u)
        for (int r = 0; r < row_count; ++r)
            y_var[static_cast<std::size_t>(u) * row_count + r] = builder.add_var(-lp.rhs[r], false);

    // Dual feasibility rows: (R' y_u)[var] <= g(s) P(u, xt, yt).
    for (int u = 0; u < u_card; ++u)
        for (int xt = 0; xt < lp.x_tuple_count; ++xt)
            for (int yt = 0; yt < lp.y_tuple_count; ++yt)
                for (int s = 0; s < ch.card_s; ++s) {
                    std::vector<std::pair<int, double>> terms;
                    const int var = lp.var_index(s, xt, yt);
                    for (int r = 0; r < row_count; ++r) {
                        const double coef = lp.rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(var)];
                        if (coef != 0.0)
                            terms.emplace_back(y_var[static_cast<std::size_t>(u) * row_count + r], coef);
                    }
                    terms.emplace_back(p_of(u, xt, yt), -ch.g[s]);
                    builder.add_le(std::move(terms), 0.0);
                }

    // Marginal polytope of the coupled law.
    std::vector<int> xd(static_cast<std::size_t>(xlen)), yd(static_cast<std::size_t>(ylen));
    for (int u = 0; u < u_card; ++u) {
        {
            std::vector<std::pair<int, double>> terms;
            for (int xt = 0; xt < lp.x_tuple_count; ++xt)
                for (int yt = 0; yt < lp.y_tuple_count; ++yt)
                    terms.emplace_back(p_of(u, xt, yt), 1.0);
            builder.add_eq(std::move(terms), input.pu[u]);
        }
        for (int k = 0; k < xlen; ++k)
            for (int x = 0; x < ch.card_x; ++x) {
                std::vector<std::pair<int, double>> terms;
                for (int xt = 0; xt < lp.x_tuple_count; ++xt) {
                    tuple_digits(xt, ch.card_x, xd);
                    if (xd[static_cast<std::size_t>(k)] != x) continue;
                    for (int yt = 0; yt < lp.y_tuple_count; ++yt)
                        terms.emplace_back(p_of(u, xt, yt), 1.0);
                }
                builder.add_eq(std::move(terms), input.pu[u] * input.px_given_u.at(u, x));
            }
        for (int l = 0; l < ylen; ++l)
            for (int y = 0; y < ch.card_y; ++y) {
                std::vector<std::pair<int, double>> terms;
                for (int yt = 0; yt < lp.y_tuple_count; ++yt) {
                    tuple_digits(yt, ch.card_y, yd);
                    if (yd[static_cast<std::size_t>(l)] != y) continue;
                    for (int xt = 0; xt < lp.x_tuple_count; ++xt)
                        terms.emplace_back(p_of(u, xt, yt), 1.0);
                }
                builder.add_eq(std::move(terms), input.pu[u] * input.py_given_u.at(u, y));
            }
        // Pair marginals for edges surviving in the reduced index sets.
        for (const auto& [k, l] : lp.graph.edges) {
            if (k >= xlen || l >= ylen) continue;
            for (int x = 0; x < ch.card_x; ++x)
                for (int y = 0; y < ch.card_y; ++y) {
                    std::vector<std::pair<int, double>> terms;
                    for (int xt = 0; xt < lp.x_tuple_count; ++xt) {
                        tuple_digits(xt, ch.card_x, xd);
                        if (xd[static_cast<std::size_t>(k)] != x) continue;
                        for (int yt = 0; yt < lp.y_tuple_count; ++yt) {
                            tuple_digits(yt, ch.card_y, yd);
                            if (yd[static_cast<std::size_t>(l)] != y) continue;
                            terms.emplace_back(p_of(u, xt, yt), 1.0);
                        }
                    }
                    builder.add_eq(std::move(terms),
                                   input.pu[u] * input.px_given_u.at(u, x) * input.py_given_u.at(u, y));
                }
        }
    }

    const LpBuilder::Result res = builder.solve();
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("strong_graph_cost: saddle LP failed (" +
                                 std::string(to_string(res.status)) + ") " + res.note);
    GraphCost out;
    out.cost = -res.value;  // builder minimized the negated objective

    // Recover a witness family by re-solving the inner minimization at the
    // adversarial coupled law.
    for (int u = 0; u < u_card; ++u) {
        std::vector<double> cost(static_cast<std::size_t>(lp.var_count));
        for (int xt = 0; xt < lp.x_tuple_count; ++xt)
            for (int yt = 0; yt < lp.y_tuple_count; ++yt)
                for (int s = 0; s < ch.card_s; ++s)
                    cost[static_cast<std::size_t>(lp.var_index(s, xt, yt))] =
                        res.x[static_cast<std::size_t>(p_of(u, xt, yt))] * ch.g[s];
        const LpSolution sol = solve_lp(lp.rows, lp.rhs, cost);
        if (sol.status != LpStatus::optimal)
            throw std::runtime_error("strong_graph_cost: witness recovery failed");
        out.q_family.push_back(q_from_vector(lp, sol.x));
    }
    return out;
}

namespace {

SymmetrizabilityReport symmetrizability(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                        int list_cap, SymmMode mode) {
    require_valid(ch);
    input.validate();
    if (input.x_card() != ch.card_x || input.y_card() != ch.card_y)
        throw std::invalid_argument("symmetrizability: input alphabets do not match the channel");
    if (input.expected_cost_x(ch.f1) > ch.gamma1 + kDerivedTol ||
        input.expected_cost_y(ch.f2) > ch.gamma2 + kDerivedTol)
        throw std::invalid_argument("symmetrizability: input distribution violates cost budgets");

    SymmetrizabilityReport report;
    report.mode = mode;
    const double margin = strict_budget_margin(ch.lambda);
    for (int edges = 1; edges <= list_cap; ++edges) {
        std::optional<GraphCost> best;
        std::optional<BipartiteGraph> best_graph;
        for (const BipartiteGraph& graph : enumerate_graphs(edges, list_cap)) {
            const SymmetrizingLp lp = build_symmetrizing_lp(ch, graph);
            const auto gc = mode == SymmMode::weak ? weak_graph_cost(ch, lp, input)
                                                   : strong_graph_cost(ch, lp, input);
            if (!gc) continue;
            if (gc->cost <= ch.lambda - margin && (!best || gc->cost < best->cost)) {
                best = gc;
                best_graph = graph;
            }
        }
        if (best) {
            report.order = edges;
            report.witness_graph = best_graph;
            report.witness_q = best->q_family;
            report.witness_cost = best->cost;
        }
    }
    return report;
}

}  // namespace

SymmetrizabilityReport weak_symmetrizability(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                             int list_cap) {
    return symmetrizability(ch, input, list_cap, SymmMode::weak);
}

SymmetrizabilityReport strong_symmetrizability(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                               int list_cap) {
    return symmetrizability(ch, input, list_cap, SymmMode::strong);
}

MinSymmetrizability min_symmetrizability(const DiscreteAVMAC& ch, SymmMode mode, double grid_step,
                                         int u_card, int list_cap) {
    require_valid(ch);
    if (u_card < 1) throw std::invalid_argument("min_symmetrizability: u_card must be >= 1");
    const auto grid =
        input_grid(u_card, ch.card_x, ch.card_y, grid_step, ch.f1, ch.gamma1, ch.f2, ch.gamma2);
    if (grid.empty())
        throw std::invalid_argument(
            "min_symmetrizability: no grid input meets the cost budgets at this resolution");

    MinSymmetrizability out;
    out.order = list_cap + 1;
    for (const FactorizedInput& input : grid) {
        const auto report = mode == SymmMode::weak ? weak_symmetrizability(ch, input, list_cap)
                                                   : strong_symmetrizability(ch, input, list_cap);
        if (report.order < out.order) {
            out.order = report.order;
            out.minimizer = input;
            if (out.order == 0) break;
        }
    }
    return out;
}

}  // namespace avmac
