#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "avmac/information.hpp"
#include "avmac/lp.hpp"
#include "avmac/rng.hpp"

namespace oracle {

using avmac::CondDistribution;
using avmac::DiscreteAVMAC;
using avmac::FactorizedInput;
using avmac::JointDistribution;

double binary_entropy(double p) {
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

double kl_direct(const JointDistribution& p, const JointDistribution& q) {
    double d = 0.0;
    for (std::size_t i = 0; i < p.cell_count(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        d += p[i] * std::log2(p[i] / q[i]);
    }
    return d;
}

avmac::JointDistribution marginalize_direct(const JointDistribution& d, std::span<const int> keep) {
    std::vector<int> out_arity;
    for (int v : keep) out_arity.push_back(d.arity()[static_cast<std::size_t>(v)]);
    std::size_t out_cells = 1;
    for (int a : out_arity) out_cells *= static_cast<std::size_t>(a);
    std::vector<double> out(out_cells, 0.0);
    std::vector<int> sym(static_cast<std::size_t>(d.variable_count()));
    for (std::size_t flat = 0; flat < d.cell_count(); ++flat) {
        d.unflatten(flat, sym);
        std::size_t idx = 0;
        for (std::size_t k = 0; k < keep.size(); ++k)
            idx = idx * static_cast<std::size_t>(out_arity[k]) +
                  static_cast<std::size_t>(sym[static_cast<std::size_t>(keep[k])]);
        out[idx] += d[flat];
    }
    return JointDistribution(out_arity, std::move(out));
}

double cond_mi_direct(const JointDistribution& d, std::span<const int> a, std::span<const int> b,
                      std::span<const int> c) {
    // sum p(a,b,c) log [ p(a,b,c) p(c) / (p(a,c) p(b,c)) ]
    std::vector<int> abc(a.begin(), a.end());
    abc.insert(abc.end(), b.begin(), b.end());
    abc.insert(abc.end(), c.begin(), c.end());
    const JointDistribution m_abc = marginalize_direct(d, abc);

    std::vector<int> ac(a.begin(), a.end());
    ac.insert(ac.end(), c.begin(), c.end());
    std::vector<int> bc(b.begin(), b.end());
    bc.insert(bc.end(), c.begin(), c.end());
    const JointDistribution m_ac = marginalize_direct(d, ac);
    const JointDistribution m_bc = marginalize_direct(d, bc);
    const bool has_c = !c.empty();
    const JointDistribution m_c = has_c ? marginalize_direct(d, c) : JointDistribution({1}, {1.0});

    double total = 0.0;
    std::vector<int> sym(abc.size());
    for (std::size_t flat = 0; flat < m_abc.cell_count(); ++flat) {
        const double p = m_abc[flat];
        if (p <= 0.0) continue;
        m_abc.unflatten(flat, sym);
        std::vector<int> sa(sym.begin(), sym.begin() + a.size());
        std::vector<int> sb(sym.begin() + a.size(), sym.begin() + a.size() + b.size());
        std::vector<int> sc(sym.begin() + a.size() + b.size(), sym.end());
        std::vector<int> sac = sa;
        sac.insert(sac.end(), sc.begin(), sc.end());
        std::vector<int> sbc = sb;
        sbc.insert(sbc.end(), sc.begin(), sc.end());
        const double pc = has_c ? m_c[m_c.flat_index(sc)] : 1.0;
        const double pac = m_ac[m_ac.flat_index(sac)];
        const double pbc = m_bc[m_bc.flat_index(sbc)];
        total += p * std::log2(p * pc / (pac * pbc));
    }
    return total;
}

VertexLpResult vertex_enumeration_lp(const std::vector<std::vector<double>>& a,
                                     const std::vector<double>& b, const std::vector<double>& c) {
    const int m = static_cast<int>(a.size());
    const int n = static_cast<int>(c.size());
    VertexLpResult best;

    // Gaussian elimination over a chosen column subset.
    std::vector<int> cols(static_cast<std::size_t>(std::min(m, n)));
    std::iota(cols.begin(), cols.end(), 0);
    auto try_basis = [&](const std::vector<int>& basis) {
        const int k = static_cast<int>(basis.size());
        std::vector<std::vector<double>> mat(static_cast<std::size_t>(m),
                                             std::vector<double>(static_cast<std::size_t>(k) + 1));
        for (int r = 0; r < m; ++r) {
            for (int j = 0; j < k; ++j) mat[r][static_cast<std::size_t>(j)] = a[r][basis[static_cast<std::size_t>(j)]];
            mat[r][static_cast<std::size_t>(k)] = b[static_cast<std::size_t>(r)];
        }
        // Row reduce.
        int rank = 0;
        for (int col = 0; col < k && rank < m; ++col) {
            int piv = -1;
            double best_abs = 1e-9;
            for (int r = rank; r < m; ++r)
                if (std::abs(mat[r][static_cast<std::size_t>(col)]) > best_abs) {
                    best_abs = std::abs(mat[r][static_cast<std::size_t>(col)]);
                    piv = r;
                }
            if (piv < 0) return;  // singular selection
            std::swap(mat[static_cast<std::size_t>(rank)], mat[static_cast<std::size_t>(piv)]);
            const double d = mat[static_cast<std::size_t>(rank)][static_cast<std::size_t>(col)];
            for (auto& v : mat[static_cast<std::size_t>(rank)]) v /= d;
            for (int r = 0; r < m; ++r) {
                if (r == rank) continue;
                const double f = mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
                if (f == 0.0) continue;
                for (int j = 0; j <= k; ++j)
                    mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] -=
                        f * mat[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)];
            }
            ++rank;
        }
        for (int r = rank; r < m; ++r)
            if (std::abs(mat[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)]) > 1e-8)
                return;  // inconsistent
        if (rank < k) return;

        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < k; ++j) {
            const double v = mat[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            if (v < -1e-8) return;  // infeasible vertex
            x[static_cast<std::size_t>(basis[static_cast<std::size_t>(j)])] = std::max(v, 0.0);
        }
        // Verify residual (guards against rank/order mismatches).
        for (int r = 0; r < m; ++r) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += a[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
            if (std::abs(acc - b[static_cast<std::size_t>(r)]) > 1e-7) return;
        }
        double value = 0.0;
        for (int j = 0; j < n; ++j) value += c[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
        if (!best.feasible || value < best.value) {
            best.feasible = true;
            best.value = value;
            best.x = std::move(x);
        }
    };

    // All column subsets of size up to min(m, n).
    const int kmax = std::min(m, n);
    for (int k = 0; k <= kmax; ++k) {
        std::vector<int> pick(static_cast<std::size_t>(k));
        std::iota(pick.begin(), pick.end(), 0);
        if (k == 0) {
            try_basis({});
            continue;
        }
        while (true) {
            try_basis(pick);
            int i = k - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - k + i) --i;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return best;
}

namespace {

bool graphs_isomorphic(int left, int right, const std::vector<std::pair<int, int>>& e1,
                       const std::vector<std::pair<int, int>>& e2) {
    std::vector<int> sigma(static_cast<std::size_t>(left));
    std::iota(sigma.begin(), sigma.end(), 0);
    auto sorted2 = e2;
    std::sort(sorted2.begin(), sorted2.end());
    do {
        std::vector<int> pi(static_cast<std::size_t>(right));
        std::iota(pi.begin(), pi.end(), 0);
        do {
            std::vector<std::pair<int, int>> mapped;
            mapped.reserve(e1.size());
            for (auto [i, j] : e1)
                mapped.emplace_back(sigma[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]);
            std::sort(mapped.begin(), mapped.end());
            if (mapped == sorted2) return true;
        } while (std::next_permutation(pi.begin(), pi.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return false;
}

}  // namespace

int graph_class_count(int edges) {
    int classes = 0;
    for (int left = 1; left <= edges; ++left)
        for (int right = 1; right <= edges; ++right) {
            if (left * right < edges) continue;
            std::vector<std::vector<std::pair<int, int>>> reps;
            const int cells = left * right;
            std::vector<int> pick(static_cast<std::size_t>(edges));
            std::iota(pick.begin(), pick.end(), 0);
            while (true) {
                std::vector<std::pair<int, int>> e;
                for (int p : pick) e.emplace_back(p / right, p % right);
                std::vector<bool> ls(static_cast<std::size_t>(left), false),
                    rs(static_cast<std::size_t>(right), false);
                for (auto [i, j] : e) {
                    ls[static_cast<std::size_t>(i)] = true;
                    rs[static_cast<std::size_t>(j)] = true;
                }
                const bool covered = std::all_of(ls.begin(), ls.end(), [](bool v) { return v; }) &&
                                     std::all_of(rs.begin(), rs.end(), [](bool v) { return v; });
                if (covered) {
                    bool known = false;
                    for (const auto& rep : reps)
                        if (graphs_isomorphic(left, right, e, rep)) {
                            known = true;
                            break;
                        }
                    if (!known) reps.push_back(e);
                }
                int i = edges - 1;
                while (i >= 0 && pick[static_cast<std::size_t>(i)] == cells - edges + i) --i;
                if (i < 0) break;
                ++pick[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < edges; ++j)
                    pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
            classes += static_cast<int>(reps.size());
        }
    return classes;
}

namespace {

int ipow(int b, int e) {
    int v = 1;
    while (e-- > 0) v *= b;
    return v;
}

void digits_of(int idx, int base, std::span<int> out) {
    for (std::size_t k = out.size(); k-- > 0;) {
        out[k] = idx % base;
        idx /= base;
    }
}

}  // namespace

double symmetrizing_residual_direct(const DiscreteAVMAC& ch, const avmac::BipartiteGraph& graph,
                                    const CondDistribution& q) {
    const int left = graph.left_count, right = graph.right_count;
    const int yt_count = ipow(ch.card_y, right - 1);
    auto q_at = [&](int xt, int yt, int s) {
        return q.at(static_cast<std::size_t>(xt) * yt_count + yt, s);
    };
    double worst = 0.0;
    std::vector<int> xd(static_cast<std::size_t>(left)), yd(static_cast<std::size_t>(right));

    // Side of the swap equality for one edge: the genuine pair sits on (i,j)
    // and the table is conditioned on the remaining letters.
    auto mixed = [&](int i, int j, int z) {
        int xt = 0, yt = 0;
        for (int k = 0; k < left; ++k)
            if (k != i) xt = xt * ch.card_x + xd[static_cast<std::size_t>(k)];
        for (int k = 0; k < right; ++k)
            if (k != j) yt = yt * ch.card_y + yd[static_cast<std::size_t>(k)];
        double out = 0.0;
        for (int s = 0; s < ch.card_s; ++s)
            out += ch.transition(xd[static_cast<std::size_t>(i)], yd[static_cast<std::size_t>(j)],
                                 s, z) *
                   q_at(xt, yt, s);
        return out;
    };

    for (std::size_t e1 = 0; e1 < graph.edges.size(); ++e1)
        for (std::size_t e2 = e1 + 1; e2 < graph.edges.size(); ++e2)
            for (int xf = 0; xf < ipow(ch.card_x, left); ++xf) {
                digits_of(xf, ch.card_x, xd);
                for (int yf = 0; yf < ipow(ch.card_y, right); ++yf) {
                    digits_of(yf, ch.card_y, yd);
                    for (int z = 0; z < ch.card_z; ++z)
                        worst = std::max(
                            worst, std::abs(mixed(graph.edges[e1].first, graph.edges[e1].second, z) -
                                            mixed(graph.edges[e2].first, graph.edges[e2].second, z)));
                }
            }

    // Order of the spoofed letters must not matter.
    const int xt_count = ipow(ch.card_x, left - 1);
    std::vector<int> xtd(static_cast<std::size_t>(left - 1)), ytd(static_cast<std::size_t>(right - 1));
    for (int xt = 0; xt < xt_count; ++xt) {
        digits_of(xt, ch.card_x, xtd);
        auto permuted = xtd;
        std::sort(permuted.begin(), permuted.end());
        do {
            int xt2 = 0;
            for (int d : permuted) xt2 = xt2 * ch.card_x + d;
            for (int yt = 0; yt < yt_count; ++yt)
                for (int s = 0; s < ch.card_s; ++s)
                    worst = std::max(worst, std::abs(q_at(xt, yt, s) - q_at(xt2, yt, s)));
        } while (std::next_permutation(permuted.begin(), permuted.end()));
    }
    for (int yt = 0; yt < yt_count; ++yt) {
        digits_of(yt, ch.card_y, ytd);
        auto permuted = ytd;
        std::sort(permuted.begin(), permuted.end());
        do {
            int yt2 = 0;
            for (int d : permuted) yt2 = yt2 * ch.card_y + d;
            for (int xt = 0; xt < xt_count; ++xt)
                for (int s = 0; s < ch.card_s; ++s)
                    worst = std::max(worst, std::abs(q_at(xt, yt, s) - q_at(xt, yt2, s)));
        } while (std::next_permutation(permuted.begin(), permuted.end()));
    }
    return worst;
}

GridSymmetrizingResult grid_search_weak_cost(const DiscreteAVMAC& ch,
                                             const avmac::BipartiteGraph& graph,
                                             const FactorizedInput& input, double step,
                                             double residual_tol) {
    // Exact-penalty grid search: minimize cost + mu * residual over the table
    // space (convex: the cost is linear and the residual a max of |affine|
    // forms), first at the requested step, then on shrinking grids around the
    // incumbent. The verdict is conclusive because a feasible system refines
    // to residual ~ final step while an empty one stays at its positive
    // distance-to-feasibility. One free parameter per row keeps the scan
    // exhaustive; binary state alphabets only.
    if (ch.card_s != 2)
        throw std::invalid_argument("grid_search_weak_cost: binary state alphabets only");
    const int left = graph.left_count, right = graph.right_count;
    const int xt_count = ipow(ch.card_x, left - 1);
    const int yt_count = ipow(ch.card_y, right - 1);
    const int rows = xt_count * yt_count;
    constexpr double kPenalty = 1000.0;

    const std::vector<int> cond_arity = [&] {
        std::vector<int> arity;
        for (int k = 0; k + 1 < left; ++k) arity.push_back(ch.card_x);
        for (int k = 0; k + 1 < right; ++k) arity.push_back(ch.card_y);
        if (arity.empty()) arity.push_back(1);
        return arity;
    }();

    // Product-law weights per row, summed over u.
    std::vector<double> row_weight(static_cast<std::size_t>(rows), 0.0);
    {
        std::vector<int> xd(static_cast<std::size_t>(left - 1)), yd(static_cast<std::size_t>(right - 1));
        for (int u = 0; u < input.u_card(); ++u)
            for (int xt = 0; xt < xt_count; ++xt) {
                digits_of(xt, ch.card_x, xd);
                double wx = 1.0;
                for (int d : xd) wx *= input.px_given_u.at(u, d);
                for (int yt = 0; yt < yt_count; ++yt) {
                    digits_of(yt, ch.card_y, yd);
                    double wy = 1.0;
                    for (int d : yd) wy *= input.py_given_u.at(u, d);
                    row_weight[static_cast<std::size_t>(xt) * yt_count + yt] +=
                        input.pu[static_cast<std::size_t>(u)] * wx * wy;
                }
            }
    }

    std::vector<double> table(static_cast<std::size_t>(rows) * 2);
    auto evaluate = [&](const std::vector<double>& p, double& cost_out, double& res_out) {
        for (int r = 0; r < rows; ++r) {
            table[static_cast<std::size_t>(r) * 2] = 1.0 - p[static_cast<std::size_t>(r)];
            table[static_cast<std::size_t>(r) * 2 + 1] = p[static_cast<std::size_t>(r)];
        }
        const CondDistribution q(cond_arity, 2, table);
        res_out = symmetrizing_residual_direct(ch, graph, q);
        cost_out = 0.0;
        for (int r = 0; r < rows; ++r)
            cost_out += row_weight[static_cast<std::size_t>(r)] *
                        (ch.g[0] * (1.0 - p[static_cast<std::size_t>(r)]) +
                         ch.g[1] * p[static_cast<std::size_t>(r)]);
        return cost_out + kPenalty * res_out;
    };

    std::vector<double> best(static_cast<std::size_t>(rows), 0.5);
    double best_cost = 0.0, best_res = 0.0;
    double best_val = evaluate(best, best_cost, best_res);

    // Level 0 covers [0,1] at the requested step; later levels shrink by 5x.
    double level_step = step;
    for (int level = 0; level < 10; ++level) {
        const int span = level == 0 ? static_cast<int>(std::llround(0.5 / step)) : 5;
        bool improved = true;
        for (int sweep = 0; sweep < 3 && improved; ++sweep) {
            improved = false;
            std::vector<int> offset(static_cast<std::size_t>(rows), -span);
            std::vector<double> cand(static_cast<std::size_t>(rows));
            while (true) {
                bool in_box = true;
                for (int r = 0; r < rows; ++r) {
                    cand[static_cast<std::size_t>(r)] =
                        best[static_cast<std::size_t>(r)] + offset[static_cast<std::size_t>(r)] * level_step;
                    if (cand[static_cast<std::size_t>(r)] < -1e-12 ||
                        cand[static_cast<std::size_t>(r)] > 1.0 + 1e-12)
                        in_box = false;
                    cand[static_cast<std::size_t>(r)] =
                        std::clamp(cand[static_cast<std::size_t>(r)], 0.0, 1.0);
                }
                if (in_box) {
                    double c = 0.0, res = 0.0;
                    const double v = evaluate(cand, c, res);
                    if (v < best_val - 1e-15) {
                        best_val = v;
                        best = cand;
                        best_cost = c;
                        best_res = res;
                        improved = true;
                    }
                }
                int r = rows - 1;
                while (r >= 0 && ++offset[static_cast<std::size_t>(r)] > span) {
                    offset[static_cast<std::size_t>(r)] = -span;
                    --r;
                }
                if (r < 0) break;
            }
        }
        level_step /= 5.0;
    }

    GridSymmetrizingResult out;
    out.feasible = best_res <= residual_tol;
    out.cost = best_cost;
    return out;
}

double grid_worst_case_jammer(const DiscreteAVMAC& ch, const FactorizedInput& input, int objective,
                              double step) {
    const int cu = input.u_card();
    const auto points = avmac::simplex_grid(ch.card_s, step);
    std::vector<std::size_t> pick(static_cast<std::size_t>(cu), 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        double budget = 0.0;
        for (int u = 0; u < cu; ++u)
            for (int s = 0; s < ch.card_s; ++s)
                budget += input.pu[static_cast<std::size_t>(u)] *
                          points[pick[static_cast<std::size_t>(u)]][static_cast<std::size_t>(s)] *
                          ch.g[static_cast<std::size_t>(s)];
        if (budget <= ch.lambda + 1e-12) {
            // Build the joint and evaluate by the direct formula.
            std::vector<double> probs(static_cast<std::size_t>(cu) * ch.card_x * ch.card_y *
                                      ch.card_s * ch.card_z);
            std::size_t idx = 0;
            for (int u = 0; u < cu; ++u)
                for (int x = 0; x < ch.card_x; ++x)
                    for (int y = 0; y < ch.card_y; ++y)
                        for (int s = 0; s < ch.card_s; ++s)
                            for (int z = 0; z < ch.card_z; ++z)
                                probs[idx++] = input.pu[static_cast<std::size_t>(u)] *
                                               input.px_given_u.at(u, x) * input.py_given_u.at(u, y) *
                                               points[pick[static_cast<std::size_t>(u)]][static_cast<std::size_t>(s)] *
                                               ch.transition(x, y, s, z);
            JointDistribution joint({cu, ch.card_x, ch.card_y, ch.card_s, ch.card_z},
                                    std::move(probs));
            double value = 0.0;
            const std::vector<int> vu{0}, vx{1}, vy{2}, vz{4};
            if (objective == 0) {
                const std::vector<int> c{2, 0};
                value = cond_mi_direct(joint, vx, vz, c);
            } else if (objective == 1) {
                const std::vector<int> c{1, 0};
                value = cond_mi_direct(joint, vy, vz, c);
            } else {
                const std::vector<int> ab{1, 2};
                value = cond_mi_direct(joint, ab, vz, vu);
            }
            best = std::min(best, value);
        }
        int r = cu - 1;
        while (r >= 0 && ++pick[static_cast<std::size_t>(r)] == points.size()) {
            pick[static_cast<std::size_t>(r)] = 0;
            --r;
        }
        if (r < 0) break;
    }
    return best;
}

SaddleBracket best_response_bracket(const DiscreteAVMAC& ch, const avmac::SymmetrizingLp& lp,
                                    const FactorizedInput& input, int random_starts,
                                    std::uint64_t seed) {
    using avmac::LpBuilder;
    using avmac::LpStatus;
    const int cu = input.u_card();
    const int cells = lp.x_tuple_count * lp.y_tuple_count;
    const int xlen = lp.graph.left_count - 1;
    const int ylen = lp.graph.right_count - 1;

    // max_P sum over (u,cells,s) P(u,xt,yt) Q_u(s|xt,yt) g(s) over the
    // coupled-law polytope; used as the P best response.
    auto p_step = [&](const std::vector<CondDistribution>& q_family) {
        LpBuilder b;
        std::vector<int> pv(static_cast<std::size_t>(cu) * cells);
        for (std::size_t i = 0; i < pv.size(); ++i) {
            const int u = static_cast<int>(i) / cells;
            const int cell = static_cast<int>(i) % cells;
            double coef = 0.0;
            for (int s = 0; s < ch.card_s; ++s)
                coef += q_family[static_cast<std::size_t>(u)].at(static_cast<std::size_t>(cell), s) *
                        ch.g[static_cast<std::size_t>(s)];
            pv[i] = b.add_var(-coef, true);  // maximize -> negate
        }
        auto pof = [&](int u, int cell) { return pv[static_cast<std::size_t>(u) * cells + cell]; };
        std::vector<int> xd(static_cast<std::size_t>(xlen)), yd(static_cast<std::size_t>(ylen));
        for (int u = 0; u < cu; ++u) {
            std::vector<std::pair<int, double>> total;
            for (int cell = 0; cell < cells; ++cell) total.emplace_back(pof(u, cell), 1.0);
            b.add_eq(std::move(total), input.pu[static_cast<std::size_t>(u)]);
            for (int k = 0; k < xlen; ++k)
                for (int x = 0; x < ch.card_x; ++x) {
                    std::vector<std::pair<int, double>> terms;
                    for (int cell = 0; cell < cells; ++cell) {
                        digits_of(cell / lp.y_tuple_count, ch.card_x, xd);
                        if (xd[static_cast<std::size_t>(k)] == x) terms.emplace_back(pof(u, cell), 1.0);
                    }
                    b.add_eq(std::move(terms),
                             input.pu[static_cast<std::size_t>(u)] * input.px_given_u.at(u, x));
                }
            for (int l = 0; l < ylen; ++l)
                for (int y = 0; y < ch.card_y; ++y) {
                    std::vector<std::pair<int, double>> terms;
                    for (int cell = 0; cell < cells; ++cell) {
                        digits_of(cell % lp.y_tuple_count, ch.card_y, yd);
                        if (yd[static_cast<std::size_t>(l)] == y) terms.emplace_back(pof(u, cell), 1.0);
                    }
                    b.add_eq(std::move(terms),
                             input.pu[static_cast<std::size_t>(u)] * input.py_given_u.at(u, y));
                }
            for (auto [k, l] : lp.graph.edges) {
                if (k >= xlen || l >= ylen) continue;
                for (int x = 0; x < ch.card_x; ++x)
                    for (int y = 0; y < ch.card_y; ++y) {
                        std::vector<std::pair<int, double>> terms;
                        for (int cell = 0; cell < cells; ++cell) {
                            digits_of(cell / lp.y_tuple_count, ch.card_x, xd);
                            digits_of(cell % lp.y_tuple_count, ch.card_y, yd);
                            if (xd[static_cast<std::size_t>(k)] == x && yd[static_cast<std::size_t>(l)] == y)
                                terms.emplace_back(pof(u, cell), 1.0);
                        }
                        b.add_eq(std::move(terms),
                                 input.pu[static_cast<std::size_t>(u)] * input.px_given_u.at(u, x) *
                                     input.py_given_u.at(u, y));
                    }
            }
        }
        auto res = b.solve();
        if (res.status != LpStatus::optimal) throw std::runtime_error("oracle p_step failed");
        return std::make_pair(-res.value, res.x);
    };

    // min over symmetrizing Q for a fixed coupled law.
    auto q_step = [&](const std::vector<double>& p) {
        double total = 0.0;
        std::vector<CondDistribution> family;
        for (int u = 0; u < cu; ++u) {
            std::vector<double> cost(static_cast<std::size_t>(lp.var_count), 0.0);
            for (int cell = 0; cell < cells; ++cell)
                for (int s = 0; s < ch.card_s; ++s)
                    cost[static_cast<std::size_t>(cell * ch.card_s + s)] =
                        p[static_cast<std::size_t>(u) * cells + cell] * ch.g[static_cast<std::size_t>(s)];
            const auto sol = avmac::solve_lp(lp.rows, lp.rhs, cost);
            if (sol.status != LpStatus::optimal) throw std::runtime_error("oracle q_step failed");
            total += sol.value;
            std::vector<double> t(static_cast<std::size_t>(lp.var_count));
            for (int cell = 0; cell < cells; ++cell)
                for (int s = 0; s < ch.card_s; ++s)
                    t[static_cast<std::size_t>(cell) * ch.card_s + s] =
                        std::max(sol.x[static_cast<std::size_t>(cell * ch.card_s + s)], 0.0);
            family.emplace_back(lp.cond_arity(), ch.card_s, std::move(t));
        }
        return std::make_pair(total, family);
    };

    SaddleBracket bracket{-std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity()};
    for (int start = 0; start < random_starts; ++start) {
        // Random feasible Q via a random-cost LP vertex.
        avmac::Rng rng(avmac::derive_seed(seed, static_cast<std::uint64_t>(start)));
        std::vector<CondDistribution> family;
        for (int u = 0; u < cu; ++u) {
            std::vector<double> cost(static_cast<std::size_t>(lp.var_count));
            for (double& v : cost) v = rng.next_unit();
            const auto sol = avmac::solve_lp(lp.rows, lp.rhs, cost);
            if (sol.status != LpStatus::optimal) throw std::runtime_error("oracle start failed");
            std::vector<double> t(static_cast<std::size_t>(lp.var_count));
            for (int cell = 0; cell < cells; ++cell)
                for (int s = 0; s < ch.card_s; ++s)
                    t[static_cast<std::size_t>(cell) * ch.card_s + s] =
                        std::max(sol.x[static_cast<std::size_t>(cell * ch.card_s + s)], 0.0);
            family.emplace_back(lp.cond_arity(), ch.card_s, std::move(t));
        }
        for (int round = 0; round < 30; ++round) {
            const auto [upper, p] = p_step(family);   // value of max_P given Q: >= saddle
            const auto [lower, fam2] = q_step(p);     // value of min_Q given P: <= saddle
            bracket.upper = std::min(bracket.upper, upper);
            bracket.lower = std::max(bracket.lower, lower);
            family = fam2;
            if (bracket.upper - bracket.lower < 1e-10) return bracket;
        }
    }
    return bracket;
}

std::vector<std::pair<int, int>> sorted_distance_decode(const avmac::SphericalCodebook& c1,
                                                        const avmac::SphericalCodebook& c2,
                                                        std::span<const double> z, int list_size) {
    struct E {
        double d2;
        int m, w;
    };
    std::vector<E> all;
    for (int m = 0; m < static_cast<int>(c1.vectors.size()); ++m)
        for (int w = 0; w < static_cast<int>(c2.vectors.size()); ++w) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < z.size(); ++i) {
                const double d = z[i] - c1.vectors[static_cast<std::size_t>(m)][i] -
                                 c2.vectors[static_cast<std::size_t>(w)][i];
                d2 += d * d;
            }
            all.push_back({d2, m, w});
        }
    std::sort(all.begin(), all.end(), [](const E& a, const E& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.m != b.m) return a.m < b.m;
        return a.w < b.w;
    });
    std::vector<std::pair<int, int>> out;
    for (int k = 0; k < list_size; ++k) out.emplace_back(all[static_cast<std::size_t>(k)].m, all[static_cast<std::size_t>(k)].w);
    return out;
}

unsigned long long count_types_enumerated(int cells, int n) {
    // Count compositions of n into `cells` nonnegative parts.
    std::vector<std::vector<unsigned long long>> memo(
        static_cast<std::size_t>(cells) + 1,
        std::vector<unsigned long long>(static_cast<std::size_t>(n) + 1, 0));
    for (int r = 0; r <= n; ++r) memo[1][static_cast<std::size_t>(r)] = 1;
    for (int k = 2; k <= cells; ++k)
        for (int r = 0; r <= n; ++r) {
            unsigned long long acc = 0;
            for (int take = 0; take <= r; ++take) acc += memo[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(r - take)];
            memo[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)] = acc;
        }
    return memo[static_cast<std::size_t>(cells)][static_cast<std::size_t>(n)];
}

unsigned long long multiset_coefficient(int cells, int n) {
    // C(n + cells - 1, cells - 1)
    unsigned long long result = 1;
    const int k = cells - 1;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<unsigned long long>(n + i) / static_cast<unsigned long long>(i);
    }
    return result;
}

avmac::DiscreteAVMAC random_channel(int cx, int cy, int cs, int cz, std::uint64_t seed,
                                    double lambda_scale) {
    avmac::Rng rng(seed);
    DiscreteAVMAC ch;
    ch.card_x = cx;
    ch.card_y = cy;
    ch.card_s = cs;
    ch.card_z = cz;
    ch.w.resize(static_cast<std::size_t>(cx) * cy * cs * cz);
    for (int x = 0; x < cx; ++x)
        for (int y = 0; y < cy; ++y)
            for (int s = 0; s < cs; ++s) {
                double total = 0.0;
                std::vector<double> row(static_cast<std::size_t>(cz));
                for (double& v : row) {
                    v = -std::log(1.0 - rng.next_unit());
                    total += v;
                }
                for (int z = 0; z < cz; ++z) ch.w[ch.w_index(x, y, s, z)] = row[static_cast<std::size_t>(z)] / total;
            }
    ch.f1.resize(static_cast<std::size_t>(cx));
    ch.f2.resize(static_cast<std::size_t>(cy));
    ch.g.resize(static_cast<std::size_t>(cs));
    for (double& v : ch.f1) v = rng.next_unit();
    for (double& v : ch.f2) v = rng.next_unit();
    for (double& v : ch.g) v = rng.next_unit();
    ch.gamma1 = *std::max_element(ch.f1.begin(), ch.f1.end());
    ch.gamma2 = *std::max_element(ch.f2.begin(), ch.f2.end());
    const double gmin = *std::min_element(ch.g.begin(), ch.g.end());
    const double gmax = *std::max_element(ch.g.begin(), ch.g.end());
    ch.lambda = gmin + lambda_scale * (gmax - gmin);
    ch.name = "random";
    return ch;
}

avmac::FactorizedInput random_factorized_input(int u_card, int x_card, int y_card,
                                               std::uint64_t seed) {
    avmac::Rng rng(seed);
    auto simplex_point = [&](int k) {
        std::vector<double> p(static_cast<std::size_t>(k));
        double total = 0.0;
        for (double& v : p) {
            v = -std::log(1.0 - rng.next_unit());
            total += v;
        }
        for (double& v : p) v /= total;
        return p;
    };
    FactorizedInput fi;
    fi.pu = simplex_point(u_card);
    std::vector<double> rx, ry;
    for (int u = 0; u < u_card; ++u) {
        const auto px = simplex_point(x_card);
        rx.insert(rx.end(), px.begin(), px.end());
        const auto py = simplex_point(y_card);
        ry.insert(ry.end(), py.begin(), py.end());
    }
    fi.px_given_u = CondDistribution({u_card}, x_card, std::move(rx));
    fi.py_given_u = CondDistribution({u_card}, y_card, std::move(ry));
    return fi;
}

avmac::JointDistribution random_joint(std::vector<int> arity, std::uint64_t seed) {
    avmac::Rng rng(seed);
    std::size_t cells = 1;
    for (int a : arity) cells *= static_cast<std::size_t>(a);
    std::vector<double> probs(cells);
    double total = 0.0;
    for (double& v : probs) {
        v = -std::log(1.0 - rng.next_unit());
        total += v;
    }
    for (double& v : probs) v /= total;
    return JointDistribution(std::move(arity), std::move(probs));
}

}  // namespace oracle
