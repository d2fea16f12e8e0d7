#include "avmac/information.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace avmac {

double log2_safe(double x) { return x > 0.0 ? std::log2(x) : -std::numeric_limits<double>::infinity(); }

double entropy(const JointDistribution& d) {
    double h = 0.0;
    for (double p : d.probs())
        if (p > 0.0) h -= p * std::log2(p);
    return h;
}

double kl_divergence(const JointDistribution& p, const JointDistribution& q) {
    if (p.arity() != q.arity()) throw std::invalid_argument("kl_divergence: shape mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.cell_count(); ++i) {
        const double pi = p[i];
        if (pi <= 0.0) continue;
        const double qi = q[i];
        if (qi <= 0.0) return kInfiniteDivergence;
        d += pi * std::log2(pi / qi);
    }
    return std::max(d, 0.0);
}

double cond_mutual_information(const JointDistribution& d, std::span<const int> a,
                               std::span<const int> b, std::span<const int> c) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("cond_mutual_information: a and b must be nonempty");
    std::vector<bool> used(static_cast<std::size_t>(d.variable_count()), false);
    auto mark = [&](std::span<const int> set) {
        for (int v : set) {
            if (v < 0 || v >= d.variable_count())
                throw std::out_of_range("cond_mutual_information: variable index out of range");
            if (used[static_cast<std::size_t>(v)])
                throw std::invalid_argument("cond_mutual_information: overlapping index sets");
            used[static_cast<std::size_t>(v)] = true;
        }
    };
    mark(a);
    mark(b);
    mark(c);

    auto concat = [](std::span<const int> x, std::span<const int> y) {
        std::vector<int> out(x.begin(), x.end());
        out.insert(out.end(), y.begin(), y.end());
        return out;
    };

    // I(A;B|C) = H(A,C) + H(B,C) - H(A,B,C) - H(C)
    const double h_ac = entropy(d.marginalize(concat(a, c)));
    const double h_bc = entropy(d.marginalize(concat(b, c)));
    const double h_abc = entropy(d.marginalize(concat(concat(a, b), c)));
    const double h_c = c.empty() ? 0.0 : entropy(d.marginalize(c));
    return std::max(h_ac + h_bc - h_abc - h_c, 0.0);
}

}  // namespace avmac
