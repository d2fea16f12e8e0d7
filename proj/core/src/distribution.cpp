#include "avmac/distribution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace avmac {

namespace {

std::size_t product_of(std::span<const int> arity) {
    std::size_t n = 1;
    for (int a : arity) {
        if (a <= 0) throw std::invalid_argument("alphabet size must be positive");
        n *= static_cast<std::size_t>(a);
    }
    return n;
}

}  // namespace

JointDistribution::JointDistribution(std::vector<int> arity, std::vector<double> probs)
    : arity_(std::move(arity)), probs_(std::move(probs)) {
    if (probs_.size() != product_of(arity_))
        throw std::invalid_argument("JointDistribution: table size does not match arity product");
}

JointDistribution JointDistribution::uniform(std::vector<int> arity) {
    const std::size_t n = product_of(arity);
    return JointDistribution(std::move(arity), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::size_t JointDistribution::flat_index(std::span<const int> symbols) const {
    if (symbols.size() != arity_.size())
        throw std::invalid_argument("flat_index: wrong tuple length");
    std::size_t idx = 0;
    for (std::size_t v = 0; v < arity_.size(); ++v) {
        if (symbols[v] < 0 || symbols[v] >= arity_[v])
            throw std::out_of_range("flat_index: symbol out of alphabet");
        idx = idx * static_cast<std::size_t>(arity_[v]) + static_cast<std::size_t>(symbols[v]);
    }
    return idx;
}

void JointDistribution::unflatten(std::size_t flat, std::span<int> symbols_out) const {
    for (std::size_t v = arity_.size(); v-- > 0;) {
        const auto a = static_cast<std::size_t>(arity_[v]);
        symbols_out[v] = static_cast<int>(flat % a);
        flat /= a;
    }
}

void JointDistribution::validate(double tol) const {
    double total = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0)) throw std::invalid_argument("JointDistribution: negative or NaN entry");
        total += p;
    }
    if (std::abs(total - 1.0) > tol)
        throw std::invalid_argument("JointDistribution: entries sum to " + std::to_string(total));
}

JointDistribution JointDistribution::marginalize(std::span<const int> keep) const {
    if (keep.empty()) throw std::invalid_argument("marginalize: empty keep set");
    std::vector<bool> seen(arity_.size(), false);
    std::vector<int> out_arity;
    out_arity.reserve(keep.size());
    for (int v : keep) {
        if (v < 0 || v >= variable_count())
            throw std::out_of_range("marginalize: variable index out of range");
        if (seen[static_cast<std::size_t>(v)])
            throw std::invalid_argument("marginalize: duplicate variable in keep set");
        seen[static_cast<std::size_t>(v)] = true;
        out_arity.push_back(arity_[static_cast<std::size_t>(v)]);
    }
    JointDistribution out(out_arity, std::vector<double>(product_of(out_arity), 0.0));
    std::vector<int> sym(arity_.size());
    std::vector<int> kept(keep.size());
    for (std::size_t flat = 0; flat < probs_.size(); ++flat) {
        unflatten(flat, sym);
        for (std::size_t i = 0; i < keep.size(); ++i) kept[i] = sym[static_cast<std::size_t>(keep[i])];
        out[out.flat_index(kept)] += probs_[flat];
    }
    return out;
}

JointDistribution JointDistribution::product_of_group_marginals(std::span<const int> group_a,
                                                                std::span<const int> group_b) const {
    std::vector<int> all(group_a.begin(), group_a.end());
    all.insert(all.end(), group_b.begin(), group_b.end());
    const JointDistribution joint_ab = marginalize(all);
    const JointDistribution ma = joint_ab.marginalize(
        [&] {
            std::vector<int> idx(group_a.size());
            std::iota(idx.begin(), idx.end(), 0);
            return idx;
        }());
    const JointDistribution mb = joint_ab.marginalize(
        [&] {
            std::vector<int> idx(group_b.size());
            std::iota(idx.begin(), idx.end(), static_cast<int>(group_a.size()));
            return idx;
        }());
    JointDistribution out = joint_ab;
    std::vector<int> sym(all.size());
    std::vector<int> sa(group_a.size());
    std::vector<int> sb(group_b.size());
    for (std::size_t flat = 0; flat < out.cell_count(); ++flat) {
        out.unflatten(flat, sym);
        for (std::size_t i = 0; i < group_a.size(); ++i) sa[i] = sym[i];
        for (std::size_t i = 0; i < group_b.size(); ++i) sb[i] = sym[group_a.size() + i];
        out[flat] = ma[ma.flat_index(sa)] * mb[mb.flat_index(sb)];
    }
    return out;
}

JointDistribution marginalize(const JointDistribution& d, std::span<const int> keep) {
    return d.marginalize(keep);
}

CondDistribution::CondDistribution(std::vector<int> cond_arity, int target_arity,
                                   std::vector<double> rows)
    : cond_arity_(std::move(cond_arity)), target_arity_(target_arity), rows_(std::move(rows)) {
    if (target_arity_ <= 0) throw std::invalid_argument("CondDistribution: target arity must be positive");
    if (rows_.size() != product_of(cond_arity_) * static_cast<std::size_t>(target_arity_))
        throw std::invalid_argument("CondDistribution: row table size mismatch");
}

CondDistribution CondDistribution::uniform(std::vector<int> cond_arity, int target_arity) {
    const std::size_t n = product_of(cond_arity) * static_cast<std::size_t>(target_arity);
    return CondDistribution(std::move(cond_arity), target_arity,
                            std::vector<double>(n, 1.0 / static_cast<double>(target_arity)));
}

std::size_t CondDistribution::row_count() const { return product_of(cond_arity_); }

void CondDistribution::validate(double tol) const {
    for (std::size_t r = 0; r < row_count(); ++r) {
        double total = 0.0;
        for (int t = 0; t < target_arity_; ++t) {
            const double p = at(r, t);
            if (!(p >= 0.0))
                throw std::invalid_argument("CondDistribution: negative or NaN entry in row " +
                                            std::to_string(r));
            total += p;
        }
        if (std::abs(total - 1.0) > tol)
            throw std::invalid_argument("CondDistribution: row " + std::to_string(r) + " sums to " +
                                        std::to_string(total));
    }
}

void EmpiricalType::validate(double tol) const {
    dist.validate(tol);
    if (blocklength <= 0) throw std::invalid_argument("EmpiricalType: blocklength must be positive");
    for (double p : dist.probs()) {
        const double scaled = p * blocklength;
        if (std::abs(scaled - std::round(scaled)) > tol * blocklength)
            throw std::invalid_argument("EmpiricalType: entry is not a multiple of 1/n");
    }
}

EmpiricalType empirical_joint_type(std::span<const std::vector<int>> seqs,
                                   std::span<const int> arity) {
    if (seqs.empty()) throw std::invalid_argument("empirical_joint_type: no sequences");
    if (seqs.size() != arity.size())
        throw std::invalid_argument("empirical_joint_type: arity count mismatch");
    const std::size_t n = seqs[0].size();
    if (n == 0) throw std::invalid_argument("empirical_joint_type: empty sequences");
    for (const auto& s : seqs)
        if (s.size() != n) throw std::invalid_argument("empirical_joint_type: length mismatch");

    JointDistribution dist(std::vector<int>(arity.begin(), arity.end()),
                           std::vector<double>(product_of(arity), 0.0));
    std::vector<int> sym(seqs.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t v = 0; v < seqs.size(); ++v) {
            const int s = seqs[v][i];
            if (s < 0 || s >= arity[v])
                throw std::out_of_range("empirical_joint_type: symbol out of alphabet");
            sym[v] = s;
        }
        dist[dist.flat_index(sym)] += 1.0;
    }
    for (double& p : dist.mutable_probs()) p /= static_cast<double>(n);
    return EmpiricalType{std::move(dist), static_cast<int>(n)};
}

double average_cost(std::span<const int> seq, std::span<const double> cost) {
    if (seq.empty()) throw std::invalid_argument("average_cost: empty sequence");
    double total = 0.0;
    for (int s : seq) {
        if (s < 0 || static_cast<std::size_t>(s) >= cost.size())
            throw std::out_of_range("average_cost: symbol out of range");
        total += cost[static_cast<std::size_t>(s)];
    }
    return total / static_cast<double>(seq.size());
}

void FactorizedInput::validate(double tol) const {
    if (pu.empty()) throw std::invalid_argument("FactorizedInput: empty P_u");
    double total = 0.0;
    for (double p : pu) {
        if (!(p >= 0.0)) throw std::invalid_argument("FactorizedInput: negative P_u entry");
        total += p;
    }
    if (std::abs(total - 1.0) > tol) throw std::invalid_argument("FactorizedInput: P_u not normalized");
    px_given_u.validate(tol);
    py_given_u.validate(tol);
    if (px_given_u.cond_arity() != std::vector<int>{u_card()} ||
        py_given_u.cond_arity() != std::vector<int>{u_card()})
        throw std::invalid_argument("FactorizedInput: conditional rows not indexed by U");
}

JointDistribution FactorizedInput::joint_uxy() const {
    const int cu = u_card(), cx = x_card(), cy = y_card();
    std::vector<double> probs(static_cast<std::size_t>(cu) * cx * cy);
    std::size_t idx = 0;
    for (int u = 0; u < cu; ++u)
        for (int x = 0; x < cx; ++x)
            for (int y = 0; y < cy; ++y)
                probs[idx++] = pu[u] * px_given_u.at(u, x) * py_given_u.at(u, y);
    return JointDistribution({cu, cx, cy}, std::move(probs));
}

double FactorizedInput::expected_cost_x(std::span<const double> f1) const {
    double e = 0.0;
    for (int u = 0; u < u_card(); ++u)
        for (int x = 0; x < x_card(); ++x) e += pu[u] * px_given_u.at(u, x) * f1[x];
    return e;
}

double FactorizedInput::expected_cost_y(std::span<const double> f2) const {
    double e = 0.0;
    for (int u = 0; u < u_card(); ++u)
        for (int y = 0; y < y_card(); ++y) e += pu[u] * py_given_u.at(u, y) * f2[y];
    return e;
}

FactorizedInput factorize_input(const JointDistribution& puxy, double tol) {
    if (puxy.variable_count() != 3)
        throw std::invalid_argument("factorize_input: expected a (u,x,y) joint");
    const int cu = puxy.arity()[0], cx = puxy.arity()[1], cy = puxy.arity()[2];
    const JointDistribution mu = puxy.marginalize(std::array{0});
    const JointDistribution mux = puxy.marginalize(std::array{0, 1});
    const JointDistribution muy = puxy.marginalize(std::array{0, 2});

    CondDistribution px({cu}, cx, std::vector<double>(static_cast<std::size_t>(cu) * cx));
    CondDistribution py({cu}, cy, std::vector<double>(static_cast<std::size_t>(cu) * cy));
    for (int u = 0; u < cu; ++u) {
        const double p = mu[static_cast<std::size_t>(u)];
        for (int x = 0; x < cx; ++x)
            px.at(u, x) = p > 0.0 ? mux[static_cast<std::size_t>(u) * cx + x] / p : (x == 0 ? 1.0 : 0.0);
        for (int y = 0; y < cy; ++y)
            py.at(u, y) = p > 0.0 ? muy[static_cast<std::size_t>(u) * cy + y] / p : (y == 0 ? 1.0 : 0.0);
    }
    FactorizedInput fi{std::vector<double>(mu.probs()), std::move(px), std::move(py)};
    const JointDistribution rebuilt = fi.joint_uxy();
    for (std::size_t i = 0; i < rebuilt.cell_count(); ++i)
        if (std::abs(rebuilt[i] - puxy[i]) > tol)
            throw std::invalid_argument("factorize_input: joint is not of product form P_u P_{x|u} P_{y|u}");
    return fi;
}

std::vector<std::vector<double>> simplex_grid(int k, double step) {
    if (k <= 0) throw std::invalid_argument("simplex_grid: dimension must be positive");
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("simplex_grid: step must be in (0,1]");
    const int m = static_cast<int>(std::lround(1.0 / step));
    if (m <= 0) throw std::invalid_argument("simplex_grid: step too large");

    std::vector<std::vector<double>> points;
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    // Enumerate compositions of m into k nonnegative parts.
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == k - 1) {
            counts[static_cast<std::size_t>(pos)] = remaining;
            std::vector<double> p(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = static_cast<double>(counts[i]) / m;
            points.push_back(std::move(p));
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[static_cast<std::size_t>(pos)] = c;
            self(self, pos + 1, remaining - c);
        }
    };
    rec(rec, 0, m);
    return points;
}

std::vector<FactorizedInput> input_grid(int u_card, int x_card, int y_card, double step,
                                        std::span<const double> f1, double gamma1,
                                        std::span<const double> f2, double gamma2) {
    const auto pu_points = simplex_grid(u_card, step);
    const auto px_points = simplex_grid(x_card, step);
    const auto py_points = simplex_grid(y_card, step);

    // All assignments of one conditional row per u-symbol.
    auto row_assignments = [&](const std::vector<std::vector<double>>& points, int target) {
        std::vector<CondDistribution> out;
        std::vector<std::size_t> pick(static_cast<std::size_t>(u_card), 0);
        while (true) {
            std::vector<double> rows;
            rows.reserve(static_cast<std::size_t>(u_card) * target);
            for (int u = 0; u < u_card; ++u)
                rows.insert(rows.end(), points[pick[static_cast<std::size_t>(u)]].begin(),
                            points[pick[static_cast<std::size_t>(u)]].end());
            out.emplace_back(std::vector<int>{u_card}, target, std::move(rows));
            int v = u_card - 1;
            while (v >= 0 && ++pick[static_cast<std::size_t>(v)] == points.size()) {
                pick[static_cast<std::size_t>(v)] = 0;
                --v;
            }
            if (v < 0) break;
        }
        return out;
    };

    const auto px_all = row_assignments(px_points, x_card);
    const auto py_all = row_assignments(py_points, y_card);

    std::vector<FactorizedInput> grid;
    for (const auto& pu : pu_points)
        for (const auto& px : px_all)
            for (const auto& py : py_all) {
                FactorizedInput fi{pu, px, py};
                if (fi.expected_cost_x(f1) <= gamma1 + kDerivedTol &&
                    fi.expected_cost_y(f2) <= gamma2 + kDerivedTol)
                    grid.push_back(std::move(fi));
            }
    return grid;
}

}  // namespace avmac
