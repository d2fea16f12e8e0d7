#include "avmac/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace avmac {

bool BipartiteGraph::has_edge(int i, int j) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(i, j));
}

std::string BipartiteGraph::describe() const {
    std::string s = "I=" + std::to_string(left_count) + ",J=" + std::to_string(right_count) + ",E={";
    for (std::size_t k = 0; k < edges.size(); ++k) {
        if (k) s += ",";
        s += "(" + std::to_string(edges[k].first) + "," + std::to_string(edges[k].second) + ")";
    }
    return s + "}";
}

void validate_graph(const BipartiteGraph& b) {
    if (b.left_count <= 0 || b.right_count <= 0)
        throw std::invalid_argument("graph: vertex counts must be positive");
    std::vector<bool> left_seen(static_cast<std::size_t>(b.left_count), false);
    std::vector<bool> right_seen(static_cast<std::size_t>(b.right_count), false);
    auto sorted = b.edges;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        const auto [i, j] = sorted[k];
        if (i < 0 || i >= b.left_count || j < 0 || j >= b.right_count)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (k > 0 && sorted[k] == sorted[k - 1]) throw std::invalid_argument("graph: duplicate edge");
        left_seen[static_cast<std::size_t>(i)] = true;
        right_seen[static_cast<std::size_t>(j)] = true;
    }
    for (bool s : left_seen)
        if (!s) throw std::invalid_argument("graph: isolated left vertex");
    for (bool s : right_seen)
        if (!s) throw std::invalid_argument("graph: isolated right vertex");
}

namespace {

std::vector<std::vector<int>> all_permutations(int n) {
    std::vector<int> base(static_cast<std::size_t>(n));
    std::iota(base.begin(), base.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(base);
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

std::vector<std::pair<int, int>> relabel(const std::vector<std::pair<int, int>>& edges,
                                         const std::vector<int>& sigma,
                                         const std::vector<int>& pi) {
    std::vector<std::pair<int, int>> out;
    out.reserve(edges.size());
    for (const auto& [i, j] : edges)
        out.emplace_back(sigma[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

BipartiteGraph canonical_form(const BipartiteGraph& b) {
    const auto sigmas = all_permutations(b.left_count);
    const auto pis = all_permutations(b.right_count);
    std::vector<std::pair<int, int>> best;
    for (const auto& sigma : sigmas)
        for (const auto& pi : pis) {
            auto cand = relabel(b.edges, sigma, pi);
            if (best.empty() || cand < best) best = std::move(cand);
        }
    BipartiteGraph out{b.left_count, b.right_count, std::move(best)};
    return out;
}

std::vector<BipartiteGraph> enumerate_graphs(int edge_count, int cap) {
    if (edge_count < 1 || edge_count > cap)
        throw std::invalid_argument("enumerate_graphs: edge count must be in [1, cap]");

    std::vector<BipartiteGraph> reps;
    std::vector<std::vector<std::pair<int, int>>> seen;  // canonical edge lists, per (I,J)

    for (int left = 1; left <= edge_count; ++left) {
        for (int right = 1; right <= edge_count; ++right) {
            if (left * right < edge_count) continue;
            seen.clear();
            const int cells = left * right;
            // All edge subsets of the I x J grid of the requested size.
            std::vector<int> pick(static_cast<std::size_t>(edge_count));
            std::iota(pick.begin(), pick.end(), 0);
            while (true) {
                BipartiteGraph g{left, right, {}};
                g.edges.reserve(static_cast<std::size_t>(edge_count));
                for (int p : pick) g.edges.emplace_back(p / right, p % right);
                bool covered = true;
                {
                    std::vector<bool> ls(static_cast<std::size_t>(left), false),
                        rs(static_cast<std::size_t>(right), false);
                    for (const auto& [i, j] : g.edges) {
                        ls[static_cast<std::size_t>(i)] = true;
                        rs[static_cast<std::size_t>(j)] = true;
                    }
                    for (bool v : ls) covered = covered && v;
                    for (bool v : rs) covered = covered && v;
                }
                if (covered) {
                    BipartiteGraph canon = canonical_form(g);
                    if (std::find(seen.begin(), seen.end(), canon.edges) == seen.end()) {
                        seen.push_back(canon.edges);
                        reps.push_back(std::move(canon));
                    }
                }
                // next combination
                int i = edge_count - 1;
                while (i >= 0 && pick[static_cast<std::size_t>(i)] == cells - edge_count + i) --i;
                if (i < 0) break;
                ++pick[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < edge_count; ++j)
                    pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    return reps;
}

std::vector<std::pair<std::vector<int>, std::vector<int>>> edge_preserving_permutations(
    const BipartiteGraph& b) {
    validate_graph(b);
    auto sorted_edges = b.edges;
    std::sort(sorted_edges.begin(), sorted_edges.end());
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    for (const auto& sigma : all_permutations(b.left_count))
        for (const auto& pi : all_permutations(b.right_count))
            if (relabel(sorted_edges, sigma, pi) == sorted_edges) out.emplace_back(sigma, pi);
    return out;
}

}  // namespace avmac
