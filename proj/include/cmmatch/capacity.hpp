#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cmmatch {

// Fractions p_c of offline vertices with initial capacity c = 1..C.
class CapacityProfile {
public:
    // p[0] is the fraction with capacity 1.
    explicit CapacityProfile(std::vector<double> p) : p_(std::move(p)) {
        if (p_.empty()) throw std::invalid_argument("capacity profile needs at least one class");
        double total = 0.0;
        for (double x : p_) {
            if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("capacity fractions must be >= 0");
            total += x;
        }
        if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("capacity fractions must sum to 1");
        for (double& x : p_) x /= total;
        while (p_.size() > 1 && p_.back() == 0.0) p_.pop_back();
        cdf_.resize(p_.size());
        std::partial_sum(p_.begin(), p_.end(), cdf_.begin());
        cdf_.back() = 1.0;
        mean_ = 0.0;
        for (std::size_t c = 1; c <= p_.size(); ++c) mean_ += static_cast<double>(c) * p_[c - 1];
    }

    static CapacityProfile point_mass(int c) {
        if (c < 1) throw std::invalid_argument("capacity must be >= 1");
        std::vector<double> p(static_cast<std::size_t>(c), 0.0);
        p.back() = 1.0;
        return CapacityProfile(std::move(p));
    }

    int max_capacity() const { return static_cast<int>(p_.size()); }
    // p_c, zero outside 1..C
    double p(int c) const { return (c < 1 || c > max_capacity()) ? 0.0 : p_[static_cast<std::size_t>(c - 1)]; }
    // P_c = sum_{k <= c} p_k
    double cdf(int c) const {
        if (c < 1) return 0.0;
        return c >= max_capacity() ? 1.0 : cdf_[static_cast<std::size_t>(c - 1)];
    }
    double mean_capacity() const { return mean_; }
    const std::vector<double>& fractions() const { return p_; }

private:
    std::vector<double> p_;
    std::vector<double> cdf_;
    double mean_ = 1.0;
};

// Per-vertex capacity assignment for a simulation run.
class Capacities {
public:
    static Capacities all_ones() { return Capacities(Kind::uniform, 1, {}); }
    static Capacities uniform(int c) {
        if (c < 1) throw std::invalid_argument("capacity must be >= 1");
        return Capacities(Kind::uniform, c, {});
    }
    static Capacities per_vertex(std::vector<int> caps) {
        for (int c : caps)
            if (c < 1) throw std::invalid_argument("capacity must be >= 1");
        return Capacities(Kind::explicit_list, 0, std::move(caps));
    }
    // Largest-remainder rounding of n * p_c; vertices are filled in order of
    // increasing capacity. Degrees are i.i.d., so the placement is immaterial.
    static Capacities from_profile(const CapacityProfile& profile, std::size_t n) {
        const int big_c = profile.max_capacity();
        std::vector<std::size_t> counts(static_cast<std::size_t>(big_c));
        std::vector<std::pair<double, int>> remainders;
        std::size_t assigned = 0;
        for (int c = 1; c <= big_c; ++c) {
            const double exact = profile.p(c) * static_cast<double>(n);
            counts[static_cast<std::size_t>(c - 1)] = static_cast<std::size_t>(std::floor(exact));
            assigned += counts[static_cast<std::size_t>(c - 1)];
            remainders.emplace_back(exact - std::floor(exact), c);
        }
        std::stable_sort(remainders.begin(), remainders.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        for (std::size_t i = 0; assigned < n; ++i, ++assigned)
            ++counts[static_cast<std::size_t>(remainders[i % remainders.size()].second - 1)];
        std::vector<int> caps;
        caps.reserve(n);
        for (int c = 1; c <= big_c; ++c) caps.insert(caps.end(), counts[static_cast<std::size_t>(c - 1)], c);
        return per_vertex(std::move(caps));
    }

    std::vector<int> resolve(std::size_t n) const {
        if (kind_ == Kind::uniform) return std::vector<int>(n, uniform_);
        if (list_.size() != n) throw std::invalid_argument("capacity array length does not match N");
        return list_;
    }

    bool is_uniform() const { return kind_ == Kind::uniform; }
    int uniform_value() const { return uniform_; }

private:
    enum class Kind { uniform, explicit_list };
    Capacities(Kind kind, int uniform, std::vector<int> list) : kind_(kind), uniform_(uniform), list_(std::move(list)) {}

    Kind kind_;
    int uniform_;
    std::vector<int> list_;
};

}  // namespace cmmatch
