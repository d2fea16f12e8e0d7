#include "avmac/region.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "avmac/lp.hpp"
#include "avmac/parallel.hpp"

namespace avmac {

namespace {

// Joint P(u,x,y,s,z) induced by the input law, a jamming table q[u][s] and
// the channel. Variable order: u,x,y,s,z.
JointDistribution build_joint(const DiscreteAVMAC& ch, const FactorizedInput& input,
                              const std::vector<double>& q) {
    const int cu = input.u_card();
    std::vector<double> probs(static_cast<std::size_t>(cu) * ch.card_x * ch.card_y * ch.card_s *
                              ch.card_z);
    std::size_t idx = 0;
    for (int u = 0; u < cu; ++u)
        for (int x = 0; x < ch.card_x; ++x)
            for (int y = 0; y < ch.card_y; ++y) {
                const double pxy = input.pu[u] * input.px_given_u.at(u, x) * input.py_given_u.at(u, y);
                for (int s = 0; s < ch.card_s; ++s) {
                    const double ps = q[static_cast<std::size_t>(u) * ch.card_s + s];
                    for (int z = 0; z < ch.card_z; ++z)
                        probs[idx++] = pxy * ps * ch.transition(x, y, s, z);
                }
            }
    return JointDistribution({cu, ch.card_x, ch.card_y, ch.card_s, ch.card_z}, std::move(probs));
}

struct ObjectiveSets {
    std::vector<int> a, b, c;
};

ObjectiveSets objective_sets(JammerObjective obj) {
    switch (obj) {
        case JammerObjective::rate1: return {{1}, {4}, {2, 0}};
        case JammerObjective::rate2: return {{2}, {4}, {1, 0}};
        case JammerObjective::sum_rate: return {{1, 2}, {4}, {0}};
    }
    throw std::logic_error("objective_sets: bad objective");
}

double objective_value(const DiscreteAVMAC& ch, const FactorizedInput& input,
                       JammerObjective obj, const std::vector<double>& q) {
    const auto sets = objective_sets(obj);
    return cond_mutual_information(build_joint(ch, input, q), sets.a, sets.b, sets.c);
}

// Gradient of the objective w.r.t. q[u][s]. The joint is affine in q and the
// derivative of I(A;B|C) in a joint cell is the information density
// log2(M(abc) M(c) / (M(ac) M(bc))) of the (u,x,y,z) marginal; log ratios at
// empty cells are clamped so the linear minimization stays well posed.
std::vector<double> objective_gradient(const DiscreteAVMAC& ch, const FactorizedInput& input,
                                       JammerObjective obj, const std::vector<double>& q) {
    constexpr double kClamp = 64.0;
    const auto sets = objective_sets(obj);
    const JointDistribution joint = build_joint(ch, input, q);
    const JointDistribution m_uxyz = joint.marginalize(std::array{0, 1, 2, 4});

    auto concat = [](std::span<const int> s1, std::span<const int> s2) {
        std::vector<int> out(s1.begin(), s1.end());
        out.insert(out.end(), s2.begin(), s2.end());
        return out;
    };
    // Index sets relative to the (u,x,y,z) marginal: u->0, x->1, y->2, z->3.
    auto remap = [](std::span<const int> set) {
        std::vector<int> out;
        for (int v : set) out.push_back(v == 4 ? 3 : v);
        return out;
    };
    const auto a = remap(sets.a), b = remap(sets.b), c = remap(sets.c);
    const JointDistribution m_abc = m_uxyz.marginalize(concat(concat(a, b), c));
    const JointDistribution m_ac = m_uxyz.marginalize(concat(a, c));
    const JointDistribution m_bc = m_uxyz.marginalize(concat(b, c));
    const JointDistribution m_c =
        c.empty() ? JointDistribution({1}, {1.0}) : m_uxyz.marginalize(c);

    const int cu = input.u_card();
    std::vector<double> grad(static_cast<std::size_t>(cu) * ch.card_s, 0.0);
    std::vector<int> cell(4);
    auto pick = [&](const std::vector<int>& set) {
        std::vector<int> out;
        out.reserve(set.size());
        for (int v : set) out.push_back(cell[static_cast<std::size_t>(v)]);
        return out;
    };
    for (std::size_t flat = 0; flat < m_uxyz.cell_count(); ++flat) {
        m_uxyz.unflatten(flat, cell);
        const int u = cell[0], x = cell[1], y = cell[2], z = cell[3];
        const double weight = input.pu[u] * input.px_given_u.at(u, x) * input.py_given_u.at(u, y);
        if (weight == 0.0) continue;
        const double num = m_abc[m_abc.flat_index(pick(concat(concat(a, b), c)))] *
                           (c.empty() ? 1.0 : m_c[m_c.flat_index(pick(c))]);
        const double den = m_ac[m_ac.flat_index(pick(concat(a, c)))] *
                           m_bc[m_bc.flat_index(pick(concat(b, c)))];
        double iota;
        if (num <= 0.0 && den <= 0.0)
            iota = 0.0;
        else
            iota = std::clamp(log2_safe(num) - log2_safe(den), -kClamp, kClamp);
        if (iota == 0.0) continue;
        for (int s = 0; s < ch.card_s; ++s)
            grad[static_cast<std::size_t>(u) * ch.card_s + s] +=
                weight * ch.transition(x, y, s, z) * iota;
    }
    return grad;
}

// Linear minimization oracle over { q : q(.|u) in the simplex,
// sum_u pu(u) sum_s q(s|u) g(s) <= lambda }.
std::vector<double> lmo(const DiscreteAVMAC& ch, const FactorizedInput& input,
                        const std::vector<double>& grad) {
    const int cu = input.u_card();
    LpBuilder builder;
    std::vector<int> vars(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) vars[i] = builder.add_var(grad[i], true);
    for (int u = 0; u < cu; ++u) {
        std::vector<std::pair<int, double>> terms;
        for (int s = 0; s < ch.card_s; ++s)
            terms.emplace_back(vars[static_cast<std::size_t>(u) * ch.card_s + s], 1.0);
        builder.add_eq(std::move(terms), 1.0);
    }
    std::vector<std::pair<int, double>> budget;
    for (int u = 0; u < cu; ++u)
        for (int s = 0; s < ch.card_s; ++s)
            budget.emplace_back(vars[static_cast<std::size_t>(u) * ch.card_s + s],
                                input.pu[u] * ch.g[s]);
    builder.add_le(std::move(budget), ch.lambda);
    const auto res = builder.solve();
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("worst_case_jammer: linear minimization failed (" +
                                 std::string(to_string(res.status)) + ")");
    std::vector<double> v(grad.size());
    for (std::size_t i = 0; i < grad.size(); ++i) v[i] = std::max(res.x[vars[i]], 0.0);
    return v;
}

}  // namespace

double jammer_objective_value(const DiscreteAVMAC& ch, const FactorizedInput& input,
                              JammerObjective objective, const CondDistribution& ps_given_u) {
    std::vector<double> q(ps_given_u.rows());
    return objective_value(ch, input, objective, q);
}

JammerResult worst_case_jammer(const DiscreteAVMAC& ch, const FactorizedInput& input,
                               JammerObjective objective, const FwOptions& opts) {
    require_valid(ch);
    input.validate();
    if (ch.g_min() > ch.lambda + kDerivedTol)
        throw std::invalid_argument("worst_case_jammer: even the cheapest state exceeds lambda");

    const int cu = input.u_card();
    std::vector<double> q(static_cast<std::size_t>(cu) * ch.card_s, 0.0);
    for (int u = 0; u < cu; ++u)
        q[static_cast<std::size_t>(u) * ch.card_s + ch.arg_g_min()] = 1.0;

    JammerResult result;
    double value = objective_value(ch, input, objective, q);
    double gap = 0.0;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const auto grad = objective_gradient(ch, input, objective, q);
        const auto v = lmo(ch, input, grad);
        gap = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i) gap += grad[i] * (q[i] - v[i]);
        if (gap < opts.gap_tol) break;

        // Exact line search on the segment toward the oracle vertex.
        std::vector<double> cand(q.size());
        auto eval = [&](double t) {
            for (std::size_t i = 0; i < q.size(); ++i) cand[i] = q[i] + t * (v[i] - q[i]);
            return objective_value(ch, input, objective, cand);
        };
        double lo = 0.0, hi = 1.0;
        constexpr double kGolden = 0.6180339887498949;
        double t1 = hi - kGolden * (hi - lo), t2 = lo + kGolden * (hi - lo);
        double f1 = eval(t1), f2 = eval(t2);
        for (int ls = 0; ls < opts.line_search_iters; ++ls) {
            if (f1 <= f2) {
                hi = t2;
                t2 = t1;
                f2 = f1;
                t1 = hi - kGolden * (hi - lo);
                f1 = eval(t1);
            } else {
                lo = t1;
                t1 = t2;
                f1 = f2;
                t2 = lo + kGolden * (hi - lo);
                f2 = eval(t2);
            }
        }
        double t_best = 0.5 * (lo + hi);
        double f_best = eval(t_best);
        if (eval(1.0) <= f_best) {
            t_best = 1.0;
            f_best = eval(1.0);
        }
        if (f_best >= value - 1e-15 && t_best < 1e-15) break;
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += t_best * (v[i] - q[i]);
        value = std::min(f_best, value);
    }

    result.value_bits = objective_value(ch, input, objective, q);
    result.ps_given_u = CondDistribution({cu}, ch.card_s, std::move(q));
    result.fw_gap = gap;
    result.iterations = it;
    return result;
}

Pentagon make_pentagon(const DiscreteAVMAC& ch, const FactorizedInput& input,
                       const FwOptions& opts) {
    Pentagon p;
    p.input = input;
    const JammerResult j1 = worst_case_jammer(ch, input, JammerObjective::rate1, opts);
    const JammerResult j2 = worst_case_jammer(ch, input, JammerObjective::rate2, opts);
    const JammerResult j12 = worst_case_jammer(ch, input, JammerObjective::sum_rate, opts);
    p.r1 = j1.value_bits;
    p.r2 = j2.value_bits;
    // A sum bound above r1 + r2 is geometrically inactive; clamping keeps the
    // stored pentagon internally consistent.
    p.r12 = std::min(j12.value_bits, p.r1 + p.r2);
    p.jammer_witnesses = {j1.ps_given_u, j2.ps_given_u, j12.ps_given_u};
    return p;
}

std::vector<std::pair<double, double>> pentagon_corners(const Pentagon& p) {
    auto clip = [](double v) { return std::max(v, 0.0); };
    std::vector<std::pair<double, double>> corners = {
        {0.0, 0.0},
        {clip(p.r1), 0.0},
        {clip(p.r1), clip(std::min(p.r2, p.r12 - p.r1))},
        {clip(std::min(p.r1, p.r12 - p.r2)), clip(p.r2)},
        {0.0, clip(p.r2)},
    };
    return corners;
}

std::vector<std::pair<double, double>> frontier_of_corners(
    std::vector<std::pair<double, double>> corners) {
    if (corners.empty()) return {{0.0, 0.0}};
    std::sort(corners.begin(), corners.end());
    corners.erase(std::unique(corners.begin(), corners.end()), corners.end());

    // Pareto-maximal points.
    std::vector<std::pair<double, double>> pareto;
    for (const auto& p : corners) {
        bool dominated = false;
        for (const auto& q : corners)
            if (q != p && q.first >= p.first - 1e-15 && q.second >= p.second - 1e-15 &&
                (q.first > p.first + 1e-15 || q.second > p.second + 1e-15)) {
                dominated = true;
                break;
            }
        if (!dominated) pareto.push_back(p);
    }
    if (pareto.empty()) return {{0.0, 0.0}};
    std::sort(pareto.begin(), pareto.end());

    // Upper concave chain over the Pareto staircase.
    std::vector<std::pair<double, double>> hull;
    auto cross = [](const std::pair<double, double>& o, const std::pair<double, double>& a,
                    const std::pair<double, double>& b) {
        return (a.first - o.first) * (b.second - o.second) -
               (a.second - o.second) * (b.first - o.first);
    };
    for (const auto& p : pareto) {
        while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= -1e-15)
            hull.pop_back();
        hull.push_back(p);
    }
    return hull;
}

namespace {

// True when some graph with edge count in [list_size, cap] symmetrizes below
// budget, i.e. the order filter "order < list_size" fails.
bool order_reaches(const DiscreteAVMAC& ch, const FactorizedInput& input, SymmMode mode,
                   int list_size, int cap) {
    const double margin = strict_budget_margin(ch.lambda);
    for (int edges = list_size; edges <= cap; ++edges)
        for (const BipartiteGraph& graph : enumerate_graphs(edges, cap)) {
            const SymmetrizingLp lp = build_symmetrizing_lp(ch, graph);
            const auto gc = mode == SymmMode::weak ? weak_graph_cost(ch, lp, input)
                                                   : strong_graph_cost(ch, lp, input);
            if (gc && gc->cost <= ch.lambda - margin) return true;
        }
    return false;
}

RegionBound region(const DiscreteAVMAC& ch, int list_size, RegionMode mode,
                   const RegionOptions& opts) {
    require_valid(ch);
    if (list_size < 1) throw std::invalid_argument("region: list size must be >= 1");
    RegionBound bound;
    bound.list_size = list_size;
    bound.mode = mode;
    bound.grid_step = opts.grid_step;
    bound.u_card = opts.u_card;
    bound.list_cap = opts.list_cap;

    const auto grid = input_grid(opts.u_card, ch.card_x, ch.card_y, opts.grid_step, ch.f1,
                                 ch.gamma1, ch.f2, ch.gamma2);
    const int cap = std::max(opts.list_cap, list_size);
    const SymmMode symm_mode = mode == RegionMode::inner ? SymmMode::weak : SymmMode::strong;

    std::vector<std::optional<Pentagon>> slots(grid.size());
    parallel_for_index(grid.size(), opts.threads, [&](std::size_t i) {
        if (!order_reaches(ch, grid[i], symm_mode, list_size, cap))
            slots[i] = make_pentagon(ch, grid[i], opts.fw);
    });
    std::vector<std::pair<double, double>> corners;
    for (auto& slot : slots)
        if (slot) {
            const auto c = pentagon_corners(*slot);
            corners.insert(corners.end(), c.begin(), c.end());
            bound.pentagons.push_back(std::move(*slot));
        }
    bound.boundary =
        bound.pentagons.empty() ? std::vector<std::pair<double, double>>{{0.0, 0.0}}
                                : frontier_of_corners(std::move(corners));
    return bound;
}

}  // namespace

RegionBound inner_region(const DiscreteAVMAC& ch, int list_size, const RegionOptions& opts) {
    return region(ch, list_size, RegionMode::inner, opts);
}

RegionBound outer_region(const DiscreteAVMAC& ch, int list_size, const RegionOptions& opts) {
    return region(ch, list_size, RegionMode::outer, opts);
}

RegionBound unconstrained_region(const DiscreteAVMAC& ch, int list_size,
                                 const RegionOptions& opts) {
    DiscreteAVMAC slack = ch;
    slack.gamma1 = *std::max_element(ch.f1.begin(), ch.f1.end());
    slack.gamma2 = *std::max_element(ch.f2.begin(), ch.f2.end());
    slack.lambda = ch.g_max();
    const RegionBound inner = inner_region(slack, list_size, opts);
    const RegionBound outer = outer_region(slack, list_size, opts);
    if (inner.pentagons.size() != outer.pentagons.size() ||
        inner.boundary.size() != outer.boundary.size())
        throw std::logic_error("unconstrained_region: inner/outer collapse assertion failed");
    for (std::size_t i = 0; i < inner.boundary.size(); ++i)
        if (std::abs(inner.boundary[i].first - outer.boundary[i].first) > 1e-9 ||
            std::abs(inner.boundary[i].second - outer.boundary[i].second) > 1e-9)
            throw std::logic_error("unconstrained_region: inner/outer frontier mismatch");
    return inner;
}

bool region_contains(const RegionBound& region, double r1, double r2, double tol) {
    if (r1 <= tol && r2 <= tol) return true;
    for (const Pentagon& p : region.pentagons)
        if (r1 <= p.r1 + tol && r2 <= p.r2 + tol && r1 + r2 <= p.r12 + tol) return true;
    return false;
}

}  // namespace avmac
