#pragma once

// Exact expectation of GREEDY's final matched count by enumerating every
// bijection between arrival half-edges and U half-edges. Written
// independently of the simulator: no pools, no RNG.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Expectation {
    std::int64_t total = 0;      // sum of matched counts over all pairings
    std::int64_t pairings = 0;   // D!
    double mean() const { return static_cast<double>(total) / static_cast<double>(pairings); }
};

inline Expectation greedy_expectation(const std::vector<int>& deg_u, const std::vector<int>& deg_v) {
    std::vector<int> slots;  // U vertex id per half-edge
    for (std::size_t u = 0; u < deg_u.size(); ++u) slots.insert(slots.end(), deg_u[u], static_cast<int>(u));
    const int d = std::accumulate(deg_v.begin(), deg_v.end(), 0);
    if (static_cast<int>(slots.size()) != d) throw std::invalid_argument("oracle needs equal totals");
    if (d > 10) throw std::invalid_argument("oracle limited to 10 half-edges");

    std::vector<int> perm(slots.size());
    std::iota(perm.begin(), perm.end(), 0);
    Expectation out;
    do {
        std::vector<char> taken(deg_u.size(), 0);
        std::size_t cursor = 0;
        int matched = 0;
        for (int dv : deg_v) {
            bool done = false;
            for (int j = 0; j < dv; ++j) {
                const int u = slots[static_cast<std::size_t>(perm[cursor++])];
                if (!done && !taken[static_cast<std::size_t>(u)]) {
                    taken[static_cast<std::size_t>(u)] = 1;
                    done = true;
                    ++matched;
                }
            }
        }
        out.total += matched;
        ++out.pairings;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

// All compositions of `total` into `parts` positive integers.
inline void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 0) {
        if (total == 0) out.push_back(cur);
        return;
    }
    for (int first = 1; first <= total - (parts - 1); ++first) {
        cur.push_back(first);
        compositions(total - first, parts - 1, cur, out);
        cur.pop_back();
    }
}

// Every ordered pair of positive degree sequences with equal totals D and
// sum of all degrees 2D <= max_total_degree.
struct SequenceCase {
    std::vector<int> deg_u;
    std::vector<int> deg_v;
};

inline std::vector<SequenceCase> small_cases(int max_total_degree) {
    std::vector<SequenceCase> cases;
    for (int d = 1; 2 * d <= max_total_degree; ++d) {
        std::vector<std::vector<int>> all;
        for (int parts = 1; parts <= d; ++parts) {
            std::vector<int> cur;
            compositions(d, parts, cur, all);
        }
        for (const auto& u : all)
            for (const auto& v : all) cases.push_back({u, v});
    }
    return cases;
}

}  // namespace oracle
