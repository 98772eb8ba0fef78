#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>

namespace cmmatch {

inline double sample_mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of an empty sample");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

// Unbiased (n-1) standard deviation; 0 for a single observation.
inline double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double mu = sample_mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

struct SignTest {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t ties = 0;
    double p_value = 1.0;  // P(X >= positive), X ~ Bin(positive + negative, 1/2)
};

// One-sided sign test for a positive median paired difference; ties dropped.
inline SignTest sign_test_positive(std::span<const double> differences) {
    SignTest out;
    for (double d : differences) {
        if (d > 0.0) ++out.positive;
        else if (d < 0.0) ++out.negative;
        else ++out.ties;
    }
    const std::size_t trials = out.positive + out.negative;
    if (trials == 0 || out.positive == 0) return out;
    boost::math::binomial_distribution<double> law(static_cast<double>(trials), 0.5);
    out.p_value = boost::math::cdf(boost::math::complement(law, static_cast<double>(out.positive) - 1.0));
    return out;
}

}  // namespace cmmatch
