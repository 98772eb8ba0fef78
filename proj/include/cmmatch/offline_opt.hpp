#pragma once

// Exact offline optima on a realized multigraph. Balancing-vertex edges are
// dropped and parallel edges collapsed before solving.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "cmmatch/graph_stream.hpp"

namespace cmmatch {

enum class OptMethod { augmenting_paths, max_flow };

struct OptResult {
    std::int64_t size = 0;
    OptMethod method = OptMethod::augmenting_paths;
};

// Distinct real neighbours of every arrival v < T.
inline std::vector<std::vector<VertexId>> simple_adjacency(const Multigraph& g) {
    std::vector<std::vector<VertexId>> adj(g.t);
    for (std::size_t v = 0; v < g.t; ++v) {
        for (const auto& e : g.adjacency[v])
            if (!e.balancing) adj[v].push_back(e.u);
        std::sort(adj[v].begin(), adj[v].end());
        adj[v].erase(std::unique(adj[v].begin(), adj[v].end()), adj[v].end());
    }
    return adj;
}

// Hopcroft-Karp: BFS layers from free arrivals, then vertex-disjoint
// shortest augmenting paths by DFS.
class HopcroftKarp {
public:
    HopcroftKarp(std::size_t n_u, std::vector<std::vector<VertexId>> adj)
        : n_u_(n_u), adj_(std::move(adj)), mate_v_(adj_.size(), kNone), mate_u_(n_u, kNone), dist_(adj_.size()) {}

    std::int64_t solve() {
        std::int64_t size = 0;
        while (bfs())
            for (std::size_t v = 0; v < adj_.size(); ++v)
                if (mate_v_[v] == kNone && dfs(v)) ++size;
        return size;
    }

private:
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    bool bfs() {
        std::queue<std::size_t> queue;
        bool found = false;
        for (std::size_t v = 0; v < adj_.size(); ++v) {
            if (mate_v_[v] == kNone) {
                dist_[v] = 0;
                queue.push(v);
            } else {
                dist_[v] = kNone;
            }
        }
        while (!queue.empty()) {
            const std::size_t v = queue.front();
            queue.pop();
            for (VertexId u : adj_[v]) {
                const std::uint32_t w = mate_u_[u];
                if (w == kNone) {
                    found = true;
                } else if (dist_[w] == kNone) {
                    dist_[w] = dist_[v] + 1;
                    queue.push(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t v) {
        for (VertexId u : adj_[v]) {
            const std::uint32_t w = mate_u_[u];
            if (w == kNone || (dist_[w] == dist_[v] + 1 && dfs(w))) {
                mate_u_[u] = static_cast<std::uint32_t>(v);
                mate_v_[v] = u;
                return true;
            }
        }
        dist_[v] = kNone;
        return false;
    }

    std::size_t n_u_;
    std::vector<std::vector<VertexId>> adj_;
    std::vector<std::uint32_t> mate_v_;
    std::vector<std::uint32_t> mate_u_;
    std::vector<std::uint32_t> dist_;
};

inline OptResult max_matching(const Multigraph& g) {
    HopcroftKarp hk(g.n, simple_adjacency(g));
    return {hk.solve(), OptMethod::augmenting_paths};
}

// Dinic's max flow on an integer-capacity network.
class Dinic {
public:
    explicit Dinic(std::size_t nodes) : head_(nodes, -1), level_(nodes), iter_(nodes) {}

    void add_arc(std::size_t from, std::size_t to, std::int64_t cap) {
        arcs_.push_back({to, head_[from], cap});
        head_[from] = static_cast<int>(arcs_.size()) - 1;
        arcs_.push_back({from, head_[to], 0});
        head_[to] = static_cast<int>(arcs_.size()) - 1;
    }

    std::int64_t max_flow(std::size_t source, std::size_t sink) {
        std::int64_t flow = 0;
        while (build_levels(source, sink)) {
            for (std::size_t i = 0; i < head_.size(); ++i) iter_[i] = head_[i];
            while (const std::int64_t pushed = push(source, sink, std::numeric_limits<std::int64_t>::max()))
                flow += pushed;
        }
        return flow;
    }

private:
    struct Arc {
        std::size_t to;
        int next;
        std::int64_t cap;
    };

    bool build_levels(std::size_t source, std::size_t sink) {
        std::fill(level_.begin(), level_.end(), -1);
        std::queue<std::size_t> queue;
        level_[source] = 0;
        queue.push(source);
        while (!queue.empty()) {
            const std::size_t x = queue.front();
            queue.pop();
            for (int a = head_[x]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
                const auto& arc = arcs_[static_cast<std::size_t>(a)];
                if (arc.cap > 0 && level_[arc.to] < 0) {
                    level_[arc.to] = level_[x] + 1;
                    queue.push(arc.to);
                }
            }
        }
        return level_[sink] >= 0;
    }

    std::int64_t push(std::size_t x, std::size_t sink, std::int64_t limit) {
        if (x == sink) return limit;
        for (int& a = iter_[x]; a != -1; a = arcs_[static_cast<std::size_t>(a)].next) {
            auto& arc = arcs_[static_cast<std::size_t>(a)];
            if (arc.cap <= 0 || level_[arc.to] != level_[x] + 1) continue;
            const std::int64_t got = push(arc.to, sink, std::min(limit, arc.cap));
            if (got > 0) {
                arc.cap -= got;
                arcs_[static_cast<std::size_t>(a) ^ 1U].cap += got;
                return got;
            }
        }
        return 0;
    }

    std::vector<Arc> arcs_;
    std::vector<int> head_;
    std::vector<int> level_;
    std::vector<int> iter_;
};

// source -> u (capacity omega_u), u -> v (1 per distinct pair), v -> sink (1).
inline OptResult max_b_matching(const Multigraph& g, const std::vector<int>& capacities) {
    if (capacities.size() != g.n) throw std::invalid_argument("capacity array length does not match N");
    const auto adj = simple_adjacency(g);
    const std::size_t source = g.n + g.t;
    const std::size_t sink = source + 1;
    Dinic net(sink + 1);
    for (std::size_t u = 0; u < g.n; ++u) {
        if (capacities[u] < 0) throw std::invalid_argument("negative capacity");
        net.add_arc(source, u, capacities[u]);
    }
    for (std::size_t v = 0; v < g.t; ++v) {
        for (VertexId u : adj[v]) net.add_arc(u, g.n + v, 1);
        net.add_arc(g.n + v, sink, 1);
    }
    return {net.max_flow(source, sink), OptMethod::max_flow};
}

}  // namespace cmmatch
