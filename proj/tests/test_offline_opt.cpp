#include <random>

#include <gtest/gtest.h>

#include "cmmatch/offline_opt.hpp"
#include "oracles/brute_force.hpp"

using namespace cmmatch;

namespace {

Multigraph from_lists(std::size_t n, const std::vector<std::vector<VertexId>>& lists) {
    Multigraph g;
    g.n = n;
    g.t = lists.size();
    for (const auto& l : lists) {
        g.adjacency.emplace_back();
        for (auto u : l) g.adjacency.back().push_back({u, false});
    }
    return g;
}

Multigraph random_graph(std::mt19937_64& rng, std::size_t n_u, std::size_t n_v, double density) {
    std::vector<std::vector<VertexId>> lists(n_v);
    std::bernoulli_distribution edge(density);
    for (auto& l : lists)
        for (VertexId u = 0; u < n_u; ++u)
            if (edge(rng)) l.push_back(u);
    return from_lists(n_u, lists);
}

// Independent route to the b-matching optimum: split u into omega_u copies and
// run plain Hopcroft-Karp.
std::int64_t split_b_matching(const Multigraph& g, const std::vector<int>& caps) {
    std::vector<std::size_t> first(g.n + 1, 0);
    for (std::size_t u = 0; u < g.n; ++u) first[u + 1] = first[u] + static_cast<std::size_t>(caps[u]);
    auto adj = simple_adjacency(g);
    for (auto& l : adj) {
        std::vector<VertexId> copies;
        for (auto u : l)
            for (std::size_t c = first[u]; c < first[u + 1]; ++c) copies.push_back(static_cast<VertexId>(c));
        l = std::move(copies);
    }
    return HopcroftKarp(first.back(), std::move(adj)).solve();
}

}  // namespace

TEST(MaxMatching, SmallCases) {
    EXPECT_EQ(max_matching(from_lists(1, {{0}})).size, 1);
    EXPECT_EQ(max_matching(from_lists(1, {{0}, {0}, {0}})).size, 1);
    EXPECT_EQ(max_matching(from_lists(2, {{0, 0, 1}, {1, 1}})).size, 2);
    EXPECT_EQ(max_matching(from_lists(3, {})).size, 0);
    EXPECT_EQ(max_matching(from_lists(1, {{0}})).method, OptMethod::augmenting_paths);
}

TEST(MaxMatching, BalancingEdgesIgnored) {
    const auto seq = DegreeSequencePair::from_degrees({2}, {1});
    const auto g = build_full_graph(seq, 0);
    EXPECT_EQ(max_matching(g).size, 1);
    Multigraph only_balance;
    only_balance.n = 1;
    only_balance.t = 1;
    only_balance.adjacency = {{{0, true}}};
    EXPECT_EQ(max_matching(only_balance).size, 0);
}

TEST(MaxMatching, RegularSimpleInstancesArePerfect) {
    GraphOptions simple;
    simple.require_simple = true;
    for (int d : {2, 3, 4})
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto seq = sample_degree_sequences(pmf_regular(d), pmf_regular(d), 100, seed);
            EXPECT_EQ(max_matching(build_full_graph(seq, seed, simple)).size, 100);
        }
}

TEST(MaxMatching, AgreesWithBruteForceAndKonig) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n_u = 1 + rng() % 8, n_v = 1 + rng() % 8;
        const auto g = random_graph(rng, n_u, n_v, 0.1 + 0.6 * std::uniform_real_distribution<double>()(rng));
        const auto adj = simple_adjacency(g);
        const auto size = max_matching(g).size;
        EXPECT_EQ(size, oracle::brute_matching(adj, n_u));
        EXPECT_EQ(size, oracle::brute_vertex_cover(adj, n_u));
    }
}

TEST(MaxMatching, IdempotentAndMonotone) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto g = random_graph(rng, 20, 20, 0.1);
        const auto before = max_matching(g).size;
        EXPECT_EQ(max_matching(g).size, before);
        g.adjacency[rng() % 20].push_back({static_cast<VertexId>(rng() % 20), false});
        EXPECT_GE(max_matching(g).size, before);
    }
}

TEST(BMatching, SmallCases) {
    const auto g = from_lists(1, {{0}, {0}});
    EXPECT_EQ(max_b_matching(g, {2}).size, 2);
    EXPECT_EQ(max_b_matching(g, {1}).size, 1);
    EXPECT_EQ(max_b_matching(g, {2}).method, OptMethod::max_flow);
    EXPECT_THROW(max_b_matching(g, {1, 1}), std::invalid_argument);
}

TEST(BMatching, UnitCapacityEqualsMatching) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = random_graph(rng, 30, 25, 0.08);
        EXPECT_EQ(max_b_matching(g, std::vector<int>(30, 1)).size, max_matching(g).size);
    }
}

TEST(BMatching, AgreesWithExhaustiveSearch) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n_u = 1 + rng() % 6, n_v = 1 + rng() % 7;
        const auto g = random_graph(rng, n_u, n_v, 0.5);
        std::vector<int> caps(n_u);
        for (auto& c : caps) c = 1 + static_cast<int>(rng() % 3);
        EXPECT_EQ(max_b_matching(g, caps).size, oracle::brute_b_matching(simple_adjacency(g), caps));
    }
}

TEST(BMatching, PoissonInstanceCapacityTwo) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto seq = sample_degree_sequences(pmf_poisson(4.0), pmf_poisson(4.0), 50, seed);
        const auto g = build_full_graph(seq, seed);
        const std::vector<int> caps(50, 2);
        EXPECT_EQ(max_b_matching(g, caps).size, split_b_matching(g, caps));
    }
}
