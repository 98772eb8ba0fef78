#pragma once

// Online matching policies run while the configuration model is generated.
//
// Each arrival first pairs all of its half-edges (pairing stream), then the
// policy picks one free endpoint among the distinct revealed U vertices
// (decision stream). GREEDY takes the first free endpoint in pairing order,
// which is exactly the early-stopping rule of the sequential construction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmmatch/capacity.hpp"
#include "cmmatch/graph_stream.hpp"
#include "cmmatch/random.hpp"

namespace cmmatch {

enum class PolicyKind { greedy, ranking, smallest, highest, biased_greedy };

struct Policy {
    PolicyKind kind = PolicyKind::greedy;
    double bias = 2.0 / 3.0;  // BIASED_GREEDY only: P(pick the residual-degree-2 endpoint)

    static Policy greedy() { return {PolicyKind::greedy}; }
    static Policy ranking() { return {PolicyKind::ranking}; }
    static Policy smallest() { return {PolicyKind::smallest}; }
    static Policy highest() { return {PolicyKind::highest}; }
    static Policy biased_greedy(double beta = 2.0 / 3.0) {
        if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("bias must lie in [0,1]");
        return {PolicyKind::biased_greedy, beta};
    }

    // GREEDY | RANKING | SMALLEST | HIGHEST | BIASED_GREEDY | BIASED_GREEDY(0.6)
    static Policy parse(std::string_view name) {
        if (name == "GREEDY") return greedy();
        if (name == "RANKING") return ranking();
        if (name == "SMALLEST") return smallest();
        if (name == "HIGHEST") return highest();
        if (name == "BIASED_GREEDY") return biased_greedy();
        constexpr std::string_view prefix = "BIASED_GREEDY(";
        if (name.starts_with(prefix) && name.ends_with(")")) {
            const std::string arg(name.substr(prefix.size(), name.size() - prefix.size() - 1));
            std::size_t used = 0;
            double beta = 0.0;
            try {
                beta = std::stod(arg, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == arg.size() && used > 0) return biased_greedy(beta);
        }
        throw std::invalid_argument("unknown policy: " + std::string(name));
    }

    std::string name() const {
        switch (kind) {
            case PolicyKind::greedy: return "GREEDY";
            case PolicyKind::ranking: return "RANKING";
            case PolicyKind::smallest: return "SMALLEST";
            case PolicyKind::highest: return "HIGHEST";
            case PolicyKind::biased_greedy: {
                if (std::abs(bias - 2.0 / 3.0) < 1e-15) return "BIASED_GREEDY";
                std::string s = std::to_string(bias);
                return "BIASED_GREEDY(" + s + ")";
            }
        }
        return "UNKNOWN";
    }

    bool uses_decision_stream() const { return kind != PolicyKind::greedy; }
    bool operator==(const Policy&) const = default;
};

struct HistogramSnapshot {
    std::int64_t step = 0;
    std::map<int, std::int64_t> free_by_degree;    // F_i
    std::map<int, std::int64_t> marked_by_degree;  // M_i
    std::map<std::pair<int, int>, std::int64_t> free_by_degree_capacity;  // F_i^(c), keyed (i, c)
};

struct Trajectory {
    std::vector<std::int64_t> matched_at_step;  // |M_k|, k = 0..T
    std::vector<HistogramSnapshot> checkpoints;
    std::uint64_t seed = 0;
    Policy policy;
    std::size_t n = 0;
    std::size_t t = 0;
    std::int64_t total_capacity = 0;  // sum of initial capacities over real U vertices

    std::int64_t final_matched() const { return matched_at_step.back(); }
    double final_fraction() const { return static_cast<double>(final_matched()) / static_cast<double>(total_capacity); }
};

struct Candidate {
    VertexId u;
    int degree_before;  // residual degree before this arrival paired
    int degree_after;   // residual degree after this arrival paired
    int capacity_left;
};

struct DecisionEvent {
    std::size_t step;                    // 1-based arrival index
    std::span<const VertexId> revealed;  // pairing order, balancing endpoints included
    std::span<const Candidate> candidates;  // distinct free endpoints, first-occurrence order
    std::optional<std::size_t> chosen;   // index into candidates
    std::span<const std::uint32_t> ranks;   // RANKING only, else empty
};

struct RunOptions {
    // Snapshot spacing in arrivals; nullopt means T/100. Step T is always kept.
    std::optional<std::int64_t> checkpoint_every;
    bool record_histograms = true;
    std::function<void(const DecisionEvent&)> on_decision;
};

// Mutable per-run matching state.
struct MatchState {
    std::vector<int> capacity_left;
    std::int64_t matched_count = 0;
    std::vector<std::uint32_t> ranks;  // RANKING only
};

// Reusable run engine; keeps buffers alive across many short runs.
class Simulator {
public:
    Trajectory run(const DegreeSequencePair& seq, const Capacities& capacities, Policy policy, std::uint64_t seed,
                   const RunOptions& options = {}) {
        pairing_.seed(derive_seed(seed, Stream::pairing));
        if (policy.uses_decision_stream()) decision_.seed(derive_seed(seed, Stream::decision));
        auto traj = run_streams(seq, capacities, policy, pairing_, decision_, options);
        traj.seed = seed;
        return traj;
    }

    // Same run driven by caller-owned engines, which keep advancing across
    // calls. Useful for many short runs where reseeding would dominate.
    Trajectory run_streams(const DegreeSequencePair& seq, const Capacities& capacities, Policy policy, Rng& pairing,
                           Rng& decision, const RunOptions& options = {}) {
        seq.validate();
        const std::size_t n = seq.n();
        const std::size_t t = seq.t();
        state_.capacity_left = capacities.resolve(n);
        state_.matched_count = 0;
        pool_.reset(seq);

        Trajectory traj;
        traj.policy = policy;
        traj.n = n;
        traj.t = t;
        traj.total_capacity = std::accumulate(state_.capacity_left.begin(), state_.capacity_left.end(), std::int64_t{0});
        traj.matched_at_step.assign(t + 1, 0);

        state_.ranks.clear();
        if (policy.kind == PolicyKind::ranking) {
            state_.ranks.resize(n);
            std::iota(state_.ranks.begin(), state_.ranks.end(), 0U);
            std::shuffle(state_.ranks.begin(), state_.ranks.end(), decision);
        }

        std::int64_t every = 0;
        if (options.record_histograms) {
            every = options.checkpoint_every.value_or(static_cast<std::int64_t>(t / 100));
            every = std::max<std::int64_t>(every, 1);
            snapshot(traj, 0);
        }

        stamp_.assign(pool_.vertex_count(), 0);
        for (std::size_t k = 1; k <= t; ++k) {
            revealed_.clear();
            pool_.reveal_into(seq.deg_v[k - 1], pairing, revealed_);
            collect_candidates(n, k);
            const auto chosen = choose(policy, decision);
            if (chosen) {
                --state_.capacity_left[candidates_[*chosen].u];
                ++state_.matched_count;
            }
            traj.matched_at_step[k] = state_.matched_count;
            if (options.on_decision)
                options.on_decision(DecisionEvent{k, revealed_, candidates_, chosen, state_.ranks});
            if (every > 0 && (static_cast<std::int64_t>(k) % every == 0 || k == t)) snapshot(traj, k);
        }
        return traj;
    }

    const MatchState& state() const { return state_; }
    const HalfEdgePool& pool() const { return pool_; }

private:
    void collect_candidates(std::size_t n, std::size_t step) {
        candidates_.clear();
        const auto mark = static_cast<std::uint64_t>(step);
        for (VertexId u : revealed_) {
            if (u >= n || stamp_[u] == mark) continue;
            stamp_[u] = mark;
            if (state_.capacity_left[u] < 1) continue;
            const int multiplicity = static_cast<int>(std::count(revealed_.begin(), revealed_.end(), u));
            const int after = pool_.remaining_degree(u);
            candidates_.push_back({u, after + multiplicity, after, state_.capacity_left[u]});
        }
    }

    std::optional<std::size_t> uniform_among(const std::vector<std::size_t>& ties, Rng& decision) {
        if (ties.size() == 1) return ties.front();
        return ties[std::uniform_int_distribution<std::size_t>(0, ties.size() - 1)(decision)];
    }

    std::optional<std::size_t> choose(const Policy& policy, Rng& decision) {
        if (candidates_.empty()) return std::nullopt;
        switch (policy.kind) {
            case PolicyKind::greedy: return 0;
            case PolicyKind::ranking: {
                std::size_t best = 0;
                for (std::size_t i = 1; i < candidates_.size(); ++i)
                    if (state_.ranks[candidates_[i].u] < state_.ranks[candidates_[best].u]) best = i;
                return best;
            }
            case PolicyKind::smallest:
            case PolicyKind::highest: {
                const bool want_small = policy.kind == PolicyKind::smallest;
                int target = candidates_.front().degree_after;
                for (const auto& c : candidates_)
                    target = want_small ? std::min(target, c.degree_after) : std::max(target, c.degree_after);
                ties_.clear();
                for (std::size_t i = 0; i < candidates_.size(); ++i)
                    if (candidates_[i].degree_after == target) ties_.push_back(i);
                return uniform_among(ties_, decision);
            }
            case PolicyKind::biased_greedy: {
                std::optional<std::size_t> first_one, first_two;
                for (std::size_t i = 0; i < candidates_.size(); ++i) {
                    const int d = candidates_[i].degree_before;
                    if (d == 1 && !first_one) first_one = i;
                    else if (d == 2 && !first_two) first_two = i;
                    else if (d != 1 && d != 2) return 0;
                }
                if (!first_one || !first_two) return 0;
                const bool pick_two = std::bernoulli_distribution(policy.bias)(decision);
                return pick_two ? first_two : first_one;
            }
        }
        throw std::invalid_argument("unknown policy");
    }

    void snapshot(Trajectory& traj, std::size_t step) const {
        HistogramSnapshot snap;
        snap.step = static_cast<std::int64_t>(step);
        for (std::size_t u = 0; u < traj.n; ++u) {
            const int deg = pool_.remaining_degree(static_cast<VertexId>(u));
            const int cap = state_.capacity_left[u];
            if (cap >= 1) {
                ++snap.free_by_degree[deg];
                ++snap.free_by_degree_capacity[{deg, cap}];
            } else {
                ++snap.marked_by_degree[deg];
            }
        }
        traj.checkpoints.push_back(std::move(snap));
    }

    MatchState state_;
    HalfEdgePool pool_;
    Rng pairing_;
    Rng decision_;
    std::vector<VertexId> revealed_;
    std::vector<Candidate> candidates_;
    std::vector<std::size_t> ties_;
    std::vector<std::uint64_t> stamp_;
};

inline Trajectory run_policy(const DegreeSequencePair& seq, const Capacities& capacities, Policy policy,
                             std::uint64_t seed, const RunOptions& options = {}) {
    Simulator sim;
    return sim.run(seq, capacities, policy, seed, options);
}

// Matched count after floor(s*T) arrivals, normalized by total capacity
// (N, C*N or sum of a capacity profile).
inline double matched_fraction_at(const Trajectory& traj, double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("matched_fraction_at: s outside [0,1]");
    auto idx = static_cast<std::size_t>(std::floor(s * static_cast<double>(traj.t) + 1e-9));
    idx = std::min(idx, traj.t);
    return static_cast<double>(traj.matched_at_step[idx]) / static_cast<double>(traj.total_capacity);
}

inline const HistogramSnapshot& histograms_at(const Trajectory& traj, std::int64_t step) {
    for (const auto& snap : traj.checkpoints)
        if (snap.step == step) return snap;
    throw std::out_of_range("no checkpoint recorded at step " + std::to_string(step));
}

}  // namespace cmmatch
