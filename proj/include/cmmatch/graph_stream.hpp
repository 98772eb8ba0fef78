#pragma once

// Bipartite configuration model exposed as an online stream.
//
// Offline vertices U = {0..N-1} hold half-edges in a flat pool. Each arriving
// vertex v_t pairs its half-edges one at a time with uniformly chosen live
// pool slots; the pairing order doubles as the uniform edge order seen by the
// matching policies. A balancing vertex absorbs the half-edge deficit: on the
// V side it arrives after v_T and takes whatever is left in the pool, on the
// U side it is vertex N and is never matchable.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmmatch/degree_models.hpp"
#include "cmmatch/random.hpp"

namespace cmmatch {

using VertexId = std::uint32_t;

enum class BalanceSide { none, u, v };

struct DegreeSequencePair {
    std::vector<int> deg_u;
    std::vector<int> deg_v;  // arrival order
    BalanceSide balance_side = BalanceSide::none;
    int balance_degree = 0;

    std::size_t n() const { return deg_u.size(); }
    std::size_t t() const { return deg_v.size(); }

    std::int64_t real_total_u() const { return std::accumulate(deg_u.begin(), deg_u.end(), std::int64_t{0}); }
    std::int64_t real_total_v() const { return std::accumulate(deg_v.begin(), deg_v.end(), std::int64_t{0}); }
    std::int64_t total_u() const { return real_total_u() + (balance_side == BalanceSide::u ? balance_degree : 0); }
    std::int64_t total_v() const { return real_total_v() + (balance_side == BalanceSide::v ? balance_degree : 0); }

    // Attaches the balancing vertex for arbitrary nonnegative sequences.
    static DegreeSequencePair from_degrees(std::vector<int> deg_u, std::vector<int> deg_v) {
        DegreeSequencePair seq{std::move(deg_u), std::move(deg_v)};
        for (int d : seq.deg_u)
            if (d < 0) throw std::invalid_argument("negative degree in U sequence");
        for (int d : seq.deg_v)
            if (d < 0) throw std::invalid_argument("negative degree in V sequence");
        const std::int64_t diff = seq.real_total_u() - seq.real_total_v();
        if (diff > 0) {
            seq.balance_side = BalanceSide::v;
            seq.balance_degree = static_cast<int>(diff);
        } else if (diff < 0) {
            seq.balance_side = BalanceSide::u;
            seq.balance_degree = static_cast<int>(-diff);
        }
        return seq;
    }

    void validate() const {
        if (balance_degree < 0) throw std::invalid_argument("negative balancing degree");
        if (balance_side == BalanceSide::none && balance_degree != 0)
            throw std::invalid_argument("balancing degree without a balancing side");
        if (total_u() != total_v()) throw std::invalid_argument("half-edge totals differ after balancing");
    }
};

// T = round(n * mean_u / mean_v); i.i.d. degrees per side from the degree
// stream of `seed`.
inline DegreeSequencePair sample_degree_sequences(const DegreePMF& pmf_u, const DegreePMF& pmf_v, std::size_t n,
                                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need n >= 1");
    if (!(pmf_u.mean() > 0.0) || !(pmf_v.mean() > 0.0))
        throw std::invalid_argument("degree laws must have positive mean");
    const auto t = static_cast<std::size_t>(std::llround(static_cast<double>(n) * pmf_u.mean() / pmf_v.mean()));
    Rng rng = make_stream(seed, Stream::degrees);
    std::vector<int> deg_u(n);
    std::vector<int> deg_v(t);
    for (auto& d : deg_u) d = sample_degree(pmf_u, rng);
    for (auto& d : deg_v) d = sample_degree(pmf_v, rng);
    return DegreeSequencePair::from_degrees(std::move(deg_u), std::move(deg_v));
}

class HalfEdgePool {
public:
    HalfEdgePool() = default;
    explicit HalfEdgePool(const DegreeSequencePair& seq) { reset(seq); }

    void reset(const DegreeSequencePair& seq) {
        const bool extra = seq.balance_side == BalanceSide::u;
        remaining_.assign(seq.deg_u.begin(), seq.deg_u.end());
        if (extra) remaining_.push_back(seq.balance_degree);
        slots_.clear();
        slots_.reserve(static_cast<std::size_t>(seq.total_u()));
        for (std::size_t u = 0; u < remaining_.size(); ++u)
            slots_.insert(slots_.end(), static_cast<std::size_t>(remaining_[u]), static_cast<VertexId>(u));
        live_ = slots_.size();
    }

    std::size_t live_count() const { return live_; }
    std::size_t vertex_count() const { return remaining_.size(); }
    int remaining_degree(VertexId u) const { return remaining_[u]; }
    std::span<const int> remaining_degrees() const { return remaining_; }
    std::span<const VertexId> live_slots() const { return {slots_.data(), live_}; }

    // Uniform live half-edge, removed by swap with the last live slot.
    // nullopt once the pool is exhausted.
    std::optional<VertexId> pair_one(Rng& rng) {
        if (live_ == 0) return std::nullopt;
        const std::size_t idx = std::uniform_int_distribution<std::size_t>(0, live_ - 1)(rng);
        const VertexId u = slots_[idx];
        slots_[idx] = slots_[live_ - 1];
        slots_[live_ - 1] = u;
        --live_;
        --remaining_[u];
        return u;
    }

    // Appends up to d_v endpoints to `out` in pairing order.
    void reveal_into(int d_v, Rng& rng, std::vector<VertexId>& out) {
        for (int i = 0; i < d_v; ++i) {
            const auto u = pair_one(rng);
            if (!u) break;
            out.push_back(*u);
        }
    }

    std::vector<VertexId> reveal_vertex(int d_v, Rng& rng) {
        if (d_v < 0) throw std::invalid_argument("negative arrival degree");
        std::vector<VertexId> out;
        out.reserve(static_cast<std::size_t>(d_v));
        reveal_into(d_v, rng, out);
        return out;
    }

private:
    std::vector<VertexId> slots_;
    std::size_t live_ = 0;
    std::vector<int> remaining_;
};

struct GraphEdge {
    VertexId u;
    bool balancing;  // excluded from every matching computation
    bool operator==(const GraphEdge&) const = default;
};

struct Multigraph {
    std::size_t n = 0;  // real offline vertices
    std::size_t t = 0;  // real arrivals
    // Index T holds the V-side balancing vertex when present.
    std::vector<std::vector<GraphEdge>> adjacency;

    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto& a : adjacency) total += a.size();
        return total;
    }

    // No parallel real edges.
    bool is_simple() const {
        std::vector<std::size_t> seen(n, SIZE_MAX);
        for (std::size_t v = 0; v < adjacency.size(); ++v)
            for (const auto& e : adjacency[v]) {
                if (e.balancing) continue;
                if (seen[e.u] == v) return false;
                seen[e.u] = v;
            }
        return true;
    }
};

struct GraphOptions {
    bool require_simple = false;
    int max_attempts = 100000;
};

namespace detail {
inline Multigraph realize(const DegreeSequencePair& seq, Rng& pairing) {
    HalfEdgePool pool(seq);
    Multigraph g;
    g.n = seq.n();
    g.t = seq.t();
    const bool v_balance = seq.balance_side == BalanceSide::v && seq.balance_degree > 0;
    g.adjacency.resize(seq.t() + (v_balance ? 1 : 0));
    std::vector<VertexId> revealed;
    auto attach = [&](std::size_t v, int degree, bool from_balance) {
        revealed.clear();
        pool.reveal_into(degree, pairing, revealed);
        auto& adj = g.adjacency[v];
        adj.reserve(revealed.size());
        for (VertexId u : revealed) adj.push_back({u, from_balance || u >= g.n});
    };
    for (std::size_t v = 0; v < seq.t(); ++v) attach(v, seq.deg_v[v], false);
    if (v_balance) attach(seq.t(), seq.balance_degree, true);
    return g;
}
}  // namespace detail

// Whole pairing, drawn from the same pairing stream as run_policy(seq, seed):
// with identical (seq, seed) the edges coincide with the streamed reveals.
inline Multigraph build_full_graph(const DegreeSequencePair& seq, std::uint64_t seed, const GraphOptions& options = {}) {
    seq.validate();
    Rng pairing = make_stream(seed, Stream::pairing);
    Multigraph g = detail::realize(seq, pairing);
    if (!options.require_simple) return g;
    for (int attempt = 1; !g.is_simple(); ++attempt) {
        if (attempt >= options.max_attempts) throw std::runtime_error("no simple realization within attempt budget");
        Rng retry = make_stream(seed, Stream::simple_retry, static_cast<std::uint64_t>(attempt));
        g = detail::realize(seq, retry);
    }
    return g;
}

// Edge-list dump: header "N T", then one "v u flag" line per edge record.
inline void write_edge_list(std::ostream& os, const Multigraph& g) {
    os << g.n << ' ' << g.t << '\n';
    for (std::size_t v = 0; v < g.adjacency.size(); ++v)
        for (const auto& e : g.adjacency[v]) os << v << ' ' << e.u << ' ' << (e.balancing ? 1 : 0) << '\n';
}

}  // namespace cmmatch
