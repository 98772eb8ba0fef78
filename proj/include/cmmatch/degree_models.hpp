#pragma once

// Finitely supported degree laws and their generating series.
//
// phi(s) = sum_k p_k s^k is evaluated by Horner's rule; derivatives use the
// falling-factorial coefficients of the same polynomial. Every law is
// normalized at construction so phi(1) == 1 to rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cmmatch/random.hpp"

namespace cmmatch {

class DegreePMF {
public:
    static DegreePMF regular(int d) {
        if (d < 1) throw std::invalid_argument("regular degree law needs d >= 1");
        std::vector<double> p(static_cast<std::size_t>(d) + 1, 0.0);
        p.back() = 1.0;
        return DegreePMF(std::move(p), "regular(d=" + std::to_string(d) + ")");
    }

    // Poisson(c) truncated at the smallest k_max whose upper tail is below
    // tail_eps, then renormalized.
    static DegreePMF poisson(double c, double tail_eps = 1e-12) {
        if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("poisson law needs c > 0");
        if (!(tail_eps > 0.0) || tail_eps > 1e-6)
            throw std::invalid_argument("poisson tail_eps must lie in (0, 1e-6]");
        const auto horizon = static_cast<std::size_t>(c + 40.0 * std::sqrt(c) + 60.0);
        std::vector<double> terms(horizon + 1);
        const double log_c = std::log(c);
        for (std::size_t k = 0; k <= horizon; ++k)
            terms[k] = std::exp(-c + static_cast<double>(k) * log_c - std::lgamma(static_cast<double>(k) + 1.0));
        // suffix[k] = sum_{j >= k} terms[j]
        std::vector<double> suffix(horizon + 2, 0.0);
        for (std::size_t k = horizon + 1; k-- > 0;) suffix[k] = suffix[k + 1] + terms[k];
        std::size_t k_max = 0;
        while (k_max < horizon && suffix[k_max + 1] >= tail_eps) ++k_max;
        k_max = std::max<std::size_t>(k_max, 1);
        terms.resize(k_max + 1);
        std::ostringstream label;
        label << "poisson(c=" << c << ")";
        return DegreePMF(normalized(std::move(terms), 1.0), label.str());
    }

    // Raw probabilities indexed by degree; must sum to 1 within 1e-9.
    static DegreePMF explicit_probs(std::vector<double> probs) {
        if (probs.empty()) throw std::invalid_argument("explicit degree law needs at least one probability");
        for (double p : probs)
            if (!(p >= 0.0) || !std::isfinite(p))
                throw std::invalid_argument("explicit degree law has a negative or non-finite probability");
        std::ostringstream label;
        label << "explicit[";
        for (std::size_t k = 0; k < probs.size(); ++k) label << (k ? "," : "") << probs[k];
        label << "]";
        return DegreePMF(normalized(std::move(probs), 1e-9), label.str());
    }

    // Law of C * X for X ~ this: pi~(k*C) = pi(k).
    DegreePMF scaled(int factor) const {
        if (factor < 1) throw std::invalid_argument("scale factor must be >= 1");
        std::vector<double> p(static_cast<std::size_t>(k_max()) * static_cast<std::size_t>(factor) + 1, 0.0);
        for (int k = 0; k <= k_max(); ++k) p[static_cast<std::size_t>(k * factor)] = probs_[static_cast<std::size_t>(k)];
        return DegreePMF(std::move(p), label_ + "*" + std::to_string(factor));
    }

    const std::vector<double>& probs() const { return probs_; }
    double prob(int k) const {
        return (k < 0 || k > k_max()) ? 0.0 : probs_[static_cast<std::size_t>(k)];
    }
    int k_max() const { return static_cast<int>(probs_.size()) - 1; }
    double mean() const { return mean_; }
    double variance() const { return variance_; }
    const std::vector<double>& cdf() const { return cdf_; }
    const std::string& label() const { return label_; }

private:
    DegreePMF(std::vector<double> probs, std::string label) : probs_(std::move(probs)), label_(std::move(label)) {
        while (probs_.size() > 1 && probs_.back() == 0.0) probs_.pop_back();
        mean_ = 0.0;
        double second = 0.0;
        for (std::size_t k = 0; k < probs_.size(); ++k) {
            const double kd = static_cast<double>(k);
            mean_ += kd * probs_[k];
            second += kd * kd * probs_[k];
        }
        variance_ = std::max(0.0, second - mean_ * mean_);
        cdf_.resize(probs_.size());
        std::partial_sum(probs_.begin(), probs_.end(), cdf_.begin());
        cdf_.back() = 1.0;
    }

    static std::vector<double> normalized(std::vector<double> p, double tolerance) {
        const double total = std::accumulate(p.begin(), p.end(), 0.0);
        if (!(total > 0.0) || std::abs(total - 1.0) > tolerance)
            throw std::invalid_argument("degree probabilities must sum to 1");
        for (double& x : p) x /= total;
        return p;
    }

    std::vector<double> probs_;
    std::vector<double> cdf_;
    double mean_ = 0.0;
    double variance_ = 0.0;
    std::string label_;
};

inline DegreePMF pmf_regular(int d) { return DegreePMF::regular(d); }
inline DegreePMF pmf_poisson(double c, double tail_eps = 1e-12) { return DegreePMF::poisson(c, tail_eps); }
inline DegreePMF pmf_explicit(std::vector<double> probs) { return DegreePMF::explicit_probs(std::move(probs)); }

namespace detail {
inline void check_unit_interval(double s, const char* what) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error(std::string(what) + " argument outside [0,1]");
}
}  // namespace detail

inline double eval_phi(const DegreePMF& pmf, double s) {
    detail::check_unit_interval(s, "eval_phi");
    const auto& p = pmf.probs();
    double acc = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * s + p[k];
    return acc;
}

// order-th derivative of phi at s; zero when order exceeds the support.
inline double eval_phi_deriv(const DegreePMF& pmf, double s, int order) {
    detail::check_unit_interval(s, "eval_phi_deriv");
    if (order < 1) throw std::invalid_argument("derivative order must be >= 1");
    if (order > pmf.k_max()) return 0.0;
    const auto& p = pmf.probs();
    double acc = 0.0;
    for (int j = pmf.k_max(); j >= order; --j) {
        double falling = 1.0;
        for (int r = 0; r < order; ++r) falling *= static_cast<double>(j - r);
        acc = acc * s + p[static_cast<std::size_t>(j)] * falling;
    }
    return acc;
}

// h(q) = (1 - phi(q)) / (1 - q), extended by its polynomial form
// sum_k p_k (1 + q + ... + q^{k-1}) near q = 1, where h(1) = mean.
inline double h_ratio(const DegreePMF& pmf, double q) {
    constexpr double switch_gap = 1e-7;
    detail::check_unit_interval(q, "h_ratio");
    if (q == 1.0) return pmf.mean();
    if (q <= 1.0 - switch_gap) return (1.0 - eval_phi(pmf, q)) / (1.0 - q);
    const auto& p = pmf.probs();
    double geometric = 0.0;  // 1 + q + ... + q^{k-1}
    double power = 1.0;
    double acc = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) {
        geometric += power;
        power *= q;
        acc += p[k] * geometric;
    }
    return acc;
}

inline int sample_degree(const DegreePMF& pmf, Rng& rng) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto& cdf = pmf.cdf();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), pmf.k_max()));
}

// Generating-series dominance phi_a >= phi_b on an interior grid, for laws of
// equal mean.
inline bool dominates(const DegreePMF& a, const DegreePMF& b, int grid_size = 1000) {
    if (std::abs(a.mean() - b.mean()) > 1e-9)
        throw std::invalid_argument("dominance comparison requires equal means");
    if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");
    for (int i = 1; i < grid_size; ++i) {
        const double s = static_cast<double>(i) / grid_size;
        if (eval_phi(a, s) < eval_phi(b, s) - 1e-12) return false;
    }
    return true;
}

}  // namespace cmmatch
