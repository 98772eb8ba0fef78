#pragma once

// Exhaustive optima for tiny bipartite graphs given as per-arrival lists of
// distinct U neighbours.

#include <algorithm>
#include <cstdint>
#include <vector>

namespace oracle {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

inline int b_matching_rec(const Adjacency& adj, std::size_t v, std::vector<int>& cap) {
    if (v == adj.size()) return 0;
    int best = b_matching_rec(adj, v + 1, cap);
    for (auto u : adj[v]) {
        if (cap[u] == 0) continue;
        --cap[u];
        best = std::max(best, 1 + b_matching_rec(adj, v + 1, cap));
        ++cap[u];
    }
    return best;
}

inline int brute_b_matching(const Adjacency& adj, std::vector<int> capacities) {
    return b_matching_rec(adj, 0, capacities);
}

inline int brute_matching(const Adjacency& adj, std::size_t n_u) {
    return brute_b_matching(adj, std::vector<int>(n_u, 1));
}

// Smallest set of U and V vertices touching every edge.
inline int brute_vertex_cover(const Adjacency& adj, std::size_t n_u) {
    const std::size_t total = n_u + adj.size();
    int best = static_cast<int>(total);
    for (std::uint32_t mask = 0; mask < (1U << total); ++mask) {
        const int size = __builtin_popcount(mask);
        if (size >= best) continue;
        bool covers = true;
        for (std::size_t v = 0; v < adj.size() && covers; ++v)
            for (auto u : adj[v])
                if (!((mask >> u) & 1U) && !((mask >> (n_u + v)) & 1U)) {
                    covers = false;
                    break;
                }
        if (covers) best = size;
    }
    return best;
}

}  // namespace oracle
