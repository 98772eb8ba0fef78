#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "cmmatch/degree_models.hpp"

using namespace cmmatch;

TEST(Pmf, RegularIsPointMass) {
    const auto d2 = pmf_regular(2);
    ASSERT_EQ(d2.probs().size(), 3U);
    EXPECT_EQ(d2.probs()[0], 0.0);
    EXPECT_EQ(d2.probs()[1], 0.0);
    EXPECT_EQ(d2.probs()[2], 1.0);
    EXPECT_EQ(d2.mean(), 2.0);
    EXPECT_EQ(d2.variance(), 0.0);

    const auto d1 = pmf_regular(1);
    EXPECT_EQ(d1.k_max(), 1);
    EXPECT_EQ(d1.mean(), 1.0);

    for (double s : {0.0, 0.3, 0.77, 1.0}) EXPECT_NEAR(eval_phi(pmf_regular(4), s), std::pow(s, 4), 1e-15);
}

TEST(Pmf, RegularRejectsZero) {
    EXPECT_THROW(pmf_regular(0), std::invalid_argument);
    EXPECT_THROW(pmf_regular(-3), std::invalid_argument);
}

TEST(Pmf, PoissonTruncation) {
    const auto p4 = pmf_poisson(4.0, 1e-12);
    EXPECT_LE(p4.mean(), 4.0);
    EXPECT_GE(p4.mean(), 4.0 - 1e-9);
    const auto p1 = pmf_poisson(1.0, 1e-12);
    EXPECT_NEAR(p1.prob(0), std::exp(-1.0), 1e-12);
    for (int i = 0; i <= 100; ++i) {
        const double s = i / 100.0;
        EXPECT_NEAR(eval_phi(p4, s), std::exp(4.0 * (s - 1.0)), 1e-9);
    }
}

TEST(Pmf, PoissonRejectsBadArguments) {
    EXPECT_THROW(pmf_poisson(0.0), std::invalid_argument);
    EXPECT_THROW(pmf_poisson(-1.0), std::invalid_argument);
    EXPECT_THROW(pmf_poisson(2.0, 0.0), std::invalid_argument);
    EXPECT_THROW(pmf_poisson(2.0, 1e-3), std::invalid_argument);
}

TEST(Pmf, ExplicitNormalizesAndRejects) {
    const auto e = pmf_explicit({0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5});
    EXPECT_DOUBLE_EQ(e.mean(), 4.0);
    EXPECT_DOUBLE_EQ(e.variance(), 4.0);
    EXPECT_THROW(pmf_explicit({0.5, 0.2}), std::invalid_argument);
    EXPECT_THROW(pmf_explicit({-0.1, 1.1}), std::invalid_argument);
    EXPECT_THROW(pmf_explicit({}), std::invalid_argument);
}

// Invariants on a family of random explicit laws.
TEST(Pmf, MomentsConsistentProperty) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 12);
        std::vector<double> w(static_cast<std::size_t>(k) + 1);
        for (auto& x : w) x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const double total = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= total;
        const auto pmf = pmf_explicit(w);
        double sum = 0.0, mean = 0.0, second = 0.0;
        for (std::size_t i = 0; i < pmf.probs().size(); ++i) {
            EXPECT_GE(pmf.probs()[i], 0.0);
            sum += pmf.probs()[i];
            mean += static_cast<double>(i) * pmf.probs()[i];
            second += static_cast<double>(i * i) * pmf.probs()[i];
        }
        EXPECT_NEAR(sum, 1.0, 1e-12);
        EXPECT_NEAR(pmf.mean(), mean, 1e-12);
        EXPECT_NEAR(pmf.variance(), second - mean * mean, 1e-12);
        if (pmf.mean() > 0.0) {
            EXPECT_GE(pmf.k_max(), 1);
        }
        EXPECT_NEAR(eval_phi(pmf, 1.0), 1.0, 1e-12);
        EXPECT_NEAR(eval_phi_deriv(pmf, 1.0, 1), pmf.mean(), 1e-12);
        EXPECT_NEAR(h_ratio(pmf, 1.0), pmf.mean(), 1e-12);
    }
}

TEST(Phi, Values) {
    EXPECT_DOUBLE_EQ(eval_phi(pmf_regular(2), 0.5), 0.25);
    EXPECT_NEAR(eval_phi(pmf_poisson(4.0), 0.5), std::exp(-2.0), 1e-9);
    EXPECT_THROW(eval_phi(pmf_regular(2), -0.01), std::domain_error);
    EXPECT_THROW(eval_phi(pmf_regular(2), 1.01), std::domain_error);
}

TEST(Phi, Derivatives) {
    EXPECT_DOUBLE_EQ(eval_phi_deriv(pmf_regular(3), 1.0, 1), 3.0);
    EXPECT_DOUBLE_EQ(eval_phi_deriv(pmf_regular(3), 0.5, 2), 3.0);
    EXPECT_NEAR(eval_phi_deriv(pmf_poisson(2.0), 0.7, 1), 2.0 * std::exp(2.0 * (0.7 - 1.0)), 1e-9);
    EXPECT_EQ(eval_phi_deriv(pmf_regular(3), 0.4, 4), 0.0);
    EXPECT_DOUBLE_EQ(eval_phi_deriv(pmf_regular(3), 0.4, 3), 6.0);
}

// Derivatives against central differences of the next-lower order.
TEST(Phi, DerivativeMatchesFiniteDifferenceProperty) {
    const auto pmf = pmf_poisson(3.0);
    for (int order = 1; order <= 5; ++order)
        for (double s : {0.2, 0.5, 0.8}) {
            const double h = 1e-5;
            const auto lower = [&](double x) { return order == 1 ? eval_phi(pmf, x) : eval_phi_deriv(pmf, x, order - 1); };
            const double fd = (lower(s + h) - lower(s - h)) / (2 * h);
            EXPECT_NEAR(eval_phi_deriv(pmf, s, order), fd, 1e-5 * std::max(1.0, std::abs(fd)));
        }
}

TEST(HRatio, Values) {
    EXPECT_DOUBLE_EQ(h_ratio(pmf_regular(2), 1.0), 2.0);
    EXPECT_DOUBLE_EQ(h_ratio(pmf_regular(2), 0.0), 1.0);
    EXPECT_NEAR(h_ratio(pmf_regular(2), 0.5), 1.5, 1e-15);
    EXPECT_DOUBLE_EQ(h_ratio(pmf_poisson(4.0), 1.0), pmf_poisson(4.0).mean());
}

// Continuity across the switch between ratio and polynomial forms.
TEST(HRatio, ContinuousNearOne) {
    for (const auto& pmf : {pmf_regular(5), pmf_poisson(4.0), pmf_explicit({0.1, 0.2, 0.3, 0.4})}) {
        const double below = h_ratio(pmf, 1.0 - 1.0000001e-7);
        const double above = h_ratio(pmf, 1.0 - 0.9999999e-7);
        EXPECT_NEAR(below, above, 1e-6);
        EXPECT_NEAR(h_ratio(pmf, 1.0 - 1e-12), pmf.mean(), 1e-9);
    }
}

TEST(Sampling, RegularAlwaysD) {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_degree(pmf_regular(4), rng), 4);
}

TEST(Sampling, PoissonMomentsAndZeroMass) {
    Rng rng(11);
    const auto pmf = pmf_poisson(4.0);
    const int n = 1000000;
    double sum = 0.0;
    int zeros = 0;
    for (int i = 0; i < n; ++i) {
        const int k = sample_degree(pmf, rng);
        sum += k;
        zeros += k == 0;
    }
    EXPECT_NEAR(sum / n, 4.0, 0.01);
    EXPECT_NEAR(static_cast<double>(zeros) / n, std::exp(-4.0), 0.001);
}

TEST(Dominance, Cases) {
    EXPECT_TRUE(dominates(pmf_regular(4), pmf_regular(4)));
    EXPECT_TRUE(dominates(pmf_poisson(4.0, 1e-12), pmf_regular(4)));
    EXPECT_FALSE(dominates(pmf_regular(4), pmf_poisson(4.0, 1e-12)));
    EXPECT_THROW(dominates(pmf_regular(4), pmf_regular(3)), std::invalid_argument);
}

TEST(Scaled, MovesMassToMultiples) {
    const auto base = pmf_explicit({0.2, 0.3, 0.5});
    const auto merged = base.scaled(3);
    EXPECT_EQ(merged.k_max(), 6);
    EXPECT_DOUBLE_EQ(merged.prob(0), 0.2);
    EXPECT_DOUBLE_EQ(merged.prob(3), 0.3);
    EXPECT_DOUBLE_EQ(merged.prob(6), 0.5);
    EXPECT_DOUBLE_EQ(merged.prob(4), 0.0);
    EXPECT_NEAR(merged.mean(), 3.0 * base.mean(), 1e-12);
}
