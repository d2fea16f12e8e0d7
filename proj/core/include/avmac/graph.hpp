#pragma once

#include <string>
#include <utility>
#include <vector>

namespace avmac {

// Bipartite confusion graph with left vertices [0, I), right vertices [0, J)
// and edge set E. Vertices are 0-based; every vertex must be covered by some
// edge and edges are kept sorted and duplicate-free.
struct BipartiteGraph {
    int left_count = 0;
    int right_count = 0;
    std::vector<std::pair<int, int>> edges;

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_edge(int i, int j) const;
    std::string describe() const;  // "I=2,J=1,E={(0,0),(1,0)}"
};

// Throws std::invalid_argument on isolated vertices, duplicate edges or
// out-of-range endpoints.
void validate_graph(const BipartiteGraph& b);

// Lexicographically minimal edge list over independent relabelings of the two
// sides; two graphs are equivalent iff their canonical forms are equal.
BipartiteGraph canonical_form(const BipartiteGraph& b);

// One canonical representative per equivalence class of graphs with exactly
// `edge_count` edges, no isolated vertex, and both sides of size at most
// `edge_count`. `cap` bounds the admissible edge count.
std::vector<BipartiteGraph> enumerate_graphs(int edge_count, int cap = 4);

// All permutation pairs (sigma on the left, pi on the right) that map the edge
// set onto itself; always contains the identity pair. Permutations are given
// as images: sigma[i] is where left vertex i goes.
std::vector<std::pair<std::vector<int>, std::vector<int>>> edge_preserving_permutations(
    const BipartiteGraph& b);

}  // namespace avmac
