#pragma once

// Fluid-limit solvers for GREEDY on the bipartite configuration model.
//
// Aggregated ODE (s = fraction of arrivals seen):
//   G'(s) = [1 - phi_V(q)] / [(mu_V/mu_U) * Gamma(G)],   q = 1 - Gamma(G)/mu_U
// where Gamma = phi_U'(1-G) without capacities. Since 1 - q = Gamma/mu_U the
// right-hand side equals h_V(q)/mu_V with h_V(q) = (1 - phi_V(q))/(1 - q),
// which stays finite as Gamma -> 0; that form is what gets integrated.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmmatch/capacity.hpp"
#include "cmmatch/degree_models.hpp"

namespace cmmatch {

struct FluidCurve {
    std::vector<double> grid;     // s values, uniform
    std::vector<double> G;
    std::vector<double> matched;  // normalized matched fraction
    double endpoint = 0.0;        // matched at s = 1

    double step() const { return grid.size() > 1 ? grid[1] - grid[0] : 1.0; }

    // Linear interpolation on the grid.
    double matched_at(double s) const { return interpolate(matched, s); }
    double G_at(double s) const { return interpolate(G, s); }

private:
    double interpolate(const std::vector<double>& values, double s) const {
        if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("FluidCurve: s outside [0,1]");
        const std::size_t intervals = grid.size() - 1;
        const double x = s * static_cast<double>(intervals);
        const auto i = std::min(static_cast<std::size_t>(x), intervals - 1);
        const double w = x - static_cast<double>(i);
        return (1.0 - w) * values[i] + w * values[i + 1];
    }
};

namespace fluid_detail {

inline double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

inline std::size_t step_count(double step) {
    if (!(step > 0.0 && step <= 1e-2)) throw std::invalid_argument("ODE step must lie in (0, 1e-2]");
    return static_cast<std::size_t>(std::llround(1.0 / step));
}

inline double factorial(int k) { return std::tgamma(static_cast<double>(k) + 1.0); }

// phi^(k), with phi^(0) = phi.
inline double phi_derivative(const DegreePMF& pmf, double s, int k) {
    return k == 0 ? eval_phi(pmf, s) : eval_phi_deriv(pmf, s, k);
}

// Classical RK4 on [0,1] for a scalar autonomous ODE y' = rhs(y), y(0) = 0.
template <class Rhs>
std::vector<double> integrate_unit_interval(std::size_t steps, Rhs&& rhs) {
    const double h = 1.0 / static_cast<double>(steps);
    std::vector<double> y(steps + 1, 0.0);
    for (std::size_t i = 0; i < steps; ++i) {
        const double y0 = y[i];
        const double k1 = rhs(y0);
        const double k2 = rhs(y0 + 0.5 * h * k1);
        const double k3 = rhs(y0 + 0.5 * h * k2);
        const double k4 = rhs(y0 + h * k3);
        y[i + 1] = y0 + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

// Shared driver: gamma(g) is the free half-edge intensity (phi_U'(1-g) for the
// capacity-less model), perf(g) the normalized matched fraction.
template <class Gamma, class Perf>
FluidCurve solve_with(const DegreePMF& pmf_u, const DegreePMF& pmf_v, double step, Gamma&& gamma, Perf&& perf) {
    const std::size_t steps = step_count(step);
    const double mu_u = pmf_u.mean();
    const double mu_v = pmf_v.mean();
    if (!(mu_u > 0.0) || !(mu_v > 0.0)) throw std::invalid_argument("degree laws must have positive mean");
    auto rhs = [&](double g) {
        const double q = clamp01(1.0 - gamma(clamp01(g)) / mu_u);
        return h_ratio(pmf_v, q) / mu_v;
    };
    FluidCurve curve;
    curve.G = integrate_unit_interval(steps, rhs);
    curve.grid.resize(steps + 1);
    curve.matched.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        curve.grid[i] = static_cast<double>(i) / static_cast<double>(steps);
        curve.matched[i] = clamp01(perf(clamp01(curve.G[i])));
    }
    curve.endpoint = curve.matched.back();
    return curve;
}

}  // namespace fluid_detail

// Capacity-less GREEDY: matched(s) = 1 - phi_U(1 - G(s)), normalized by N.
inline FluidCurve solve_G_capless(const DegreePMF& pmf_u, const DegreePMF& pmf_v, double step = 1e-4) {
    return fluid_detail::solve_with(
        pmf_u, pmf_v, step, [&](double g) { return eval_phi_deriv(pmf_u, 1.0 - g, 1); },
        [&](double g) { return 1.0 - eval_phi(pmf_u, 1.0 - g); });
}

// Uniform capacity C, normalized by C*N.
//   Gamma(g)   = sum_{k=0}^{C-1} g^k/k! phi_U^(k+1)(1-g)
//   matched(g) = 1 - sum_{k=0}^{C-1} (1-k/C)/k! g^k phi_U^(k)(1-g)
inline FluidCurve solve_G_fixed_capacity(const DegreePMF& pmf_u, const DegreePMF& pmf_v, int capacity,
                                         double step = 1e-4) {
    if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
    using fluid_detail::factorial;
    using fluid_detail::phi_derivative;
    const double big_c = capacity;
    auto gamma = [&](double g) {
        double acc = 0.0;
        for (int k = 0; k < capacity; ++k) acc += std::pow(g, k) / factorial(k) * phi_derivative(pmf_u, 1.0 - g, k + 1);
        return acc;
    };
    auto perf = [&](double g) {
        double acc = 0.0;
        for (int k = 0; k < capacity; ++k)
            acc += (1.0 - k / big_c) / factorial(k) * std::pow(g, k) * phi_derivative(pmf_u, 1.0 - g, k);
        return 1.0 - acc;
    };
    return fluid_detail::solve_with(pmf_u, pmf_v, step, gamma, perf);
}

// Capacity profile p, normalized by N*E_p[c].
//   Gamma(g)   = phi_U'(1-g) + sum_{k=1}^{C-1} (1-P_k) g^k/k! phi_U^(k+1)(1-g)
//   matched(g) = 1 - sum_{k=0}^{C-1} w_k/k! g^k phi_U^(k)(1-g),
//   w_k = sum_c c p_{c+k} / E_p[c]
inline FluidCurve solve_G_general_capacity(const DegreePMF& pmf_u, const DegreePMF& pmf_v,
                                           const CapacityProfile& profile, double step = 1e-4) {
    using fluid_detail::factorial;
    using fluid_detail::phi_derivative;
    const int big_c = profile.max_capacity();
    std::vector<double> weights(static_cast<std::size_t>(big_c), 0.0);
    for (int k = 0; k < big_c; ++k) {
        double acc = 0.0;
        for (int c = 1; c + k <= big_c; ++c) acc += c * profile.p(c + k);
        weights[static_cast<std::size_t>(k)] = acc / profile.mean_capacity();
    }
    auto gamma = [&](double g) {
        double acc = eval_phi_deriv(pmf_u, 1.0 - g, 1);
        for (int k = 1; k < big_c; ++k)
            acc += (1.0 - profile.cdf(k)) * std::pow(g, k) / factorial(k) * phi_derivative(pmf_u, 1.0 - g, k + 1);
        return acc;
    };
    auto perf = [&](double g) {
        double acc = 0.0;
        for (int k = 0; k < big_c; ++k)
            acc += weights[static_cast<std::size_t>(k)] / factorial(k) * std::pow(g, k) * phi_derivative(pmf_u, 1.0 - g, k);
        return 1.0 - acc;
    };
    return fluid_detail::solve_with(pmf_u, pmf_v, step, gamma, perf);
}

// Per-degree densities of free (f) and marked (m) offline vertices at time t,
// measured in arrivals / N.
struct SystemState {
    std::vector<double> f;
    std::vector<double> m;
    double t = 0.0;

    double free_mass() const;
    double live_half_edges() const;  // sum_l l (f_l + m_l)
    // Generating series f(t, s) = sum_i f_i s^i.
    double free_series(double s) const;
};

inline double SystemState::free_mass() const {
    double acc = 0.0;
    for (double x : f) acc += x;
    return acc;
}

inline double SystemState::live_half_edges() const {
    double acc = 0.0;
    for (std::size_t l = 0; l < f.size(); ++l) acc += static_cast<double>(l) * (f[l] + m[l]);
    return acc;
}

inline double SystemState::free_series(double s) const {
    double acc = 0.0;
    for (std::size_t i = f.size(); i-- > 0;) acc = acc * s + f[i];
    return acc;
}

struct FullSystemSolution {
    double step = 0.0;
    double mean_u = 0.0;
    double mean_v = 0.0;
    std::vector<SystemState> states;  // states[j].t == j * step

    // Aggregated matched fraction 1 - sum_i f_i at grid index j.
    double matched(std::size_t j) const { return 1.0 - states[j].free_mass(); }
};

// RK4 on the per-degree drift system
//   f_i' = [-i mu_V f_i + (i+1) mu_V f_{i+1} - h(q) (i+1) f_{i+1}] / D
//   m_i' = [-i mu_V m_i + (i+1) mu_V m_{i+1} + h(q) (i+1) f_{i+1}] / D
// with D = sum_l l (f_l + m_l), q = sum_l l m_l / D, stopping 10 steps short
// of t = mu_U/mu_V where D vanishes.
inline FullSystemSolution solve_full_system(const DegreePMF& pmf_u, const DegreePMF& pmf_v, double step = 1e-4) {
    if (!(step > 0.0 && step <= 1e-3)) throw std::invalid_argument("full-system step must lie in (0, 1e-3]");
    const double mu_u = pmf_u.mean();
    const double mu_v = pmf_v.mean();
    if (!(mu_u > 0.0) || !(mu_v > 0.0)) throw std::invalid_argument("degree laws must have positive mean");
    const std::size_t dim = static_cast<std::size_t>(pmf_u.k_max()) + 1;
    const double t_end = mu_u / mu_v - 10.0 * step;
    const auto steps = static_cast<std::size_t>(std::floor(t_end / step + 1e-9));

    auto drift = [&](const std::vector<double>& f, const std::vector<double>& m, std::vector<double>& df,
                     std::vector<double>& dm) {
        double live = 0.0;
        double marked = 0.0;
        for (std::size_t l = 0; l < dim; ++l) {
            live += static_cast<double>(l) * (f[l] + m[l]);
            marked += static_cast<double>(l) * m[l];
        }
        const double hq = h_ratio(pmf_v, fluid_detail::clamp01(marked / live));
        for (std::size_t i = 0; i < dim; ++i) {
            const double up_f = i + 1 < dim ? static_cast<double>(i + 1) * f[i + 1] : 0.0;
            const double up_m = i + 1 < dim ? static_cast<double>(i + 1) * m[i + 1] : 0.0;
            const double id = static_cast<double>(i);
            df[i] = (-id * mu_v * f[i] + mu_v * up_f - hq * up_f) / live;
            dm[i] = (-id * mu_v * m[i] + mu_v * up_m + hq * up_f) / live;
        }
    };

    FullSystemSolution sol;
    sol.step = step;
    sol.mean_u = mu_u;
    sol.mean_v = mu_v;
    sol.states.reserve(steps + 1);
    SystemState state{pmf_u.probs(), std::vector<double>(dim, 0.0), 0.0};
    state.f.resize(dim, 0.0);
    sol.states.push_back(state);

    std::vector<double> k1f(dim), k1m(dim), k2f(dim), k2m(dim), k3f(dim), k3m(dim), k4f(dim), k4m(dim);
    std::vector<double> tf(dim), tm(dim);
    auto offset = [&](const std::vector<double>& base, const std::vector<double>& slope, double h,
                      std::vector<double>& out) {
        for (std::size_t i = 0; i < dim; ++i) out[i] = base[i] + h * slope[i];
    };
    for (std::size_t j = 0; j < steps; ++j) {
        const auto& f = state.f;
        const auto& m = state.m;
        drift(f, m, k1f, k1m);
        offset(f, k1f, 0.5 * step, tf);
        offset(m, k1m, 0.5 * step, tm);
        drift(tf, tm, k2f, k2m);
        offset(f, k2f, 0.5 * step, tf);
        offset(m, k2m, 0.5 * step, tm);
        drift(tf, tm, k3f, k3m);
        offset(f, k3f, step, tf);
        offset(m, k3m, step, tm);
        drift(tf, tm, k4f, k4m);
        for (std::size_t i = 0; i < dim; ++i) {
            state.f[i] += step / 6.0 * (k1f[i] + 2.0 * k2f[i] + 2.0 * k3f[i] + k4f[i]);
            state.m[i] += step / 6.0 * (k1m[i] + 2.0 * k2m[i] + 2.0 * k3m[i] + k4m[i]);
            state.f[i] = std::max(state.f[i], 0.0);
            state.m[i] = std::max(state.m[i], 0.0);
        }
        state.t = static_cast<double>(j + 1) * step;
        sol.states.push_back(state);
    }
    return sol;
}

struct CharacteristicsReport {
    double max_discrepancy = 0.0;
    double worst_t = 0.0;  // characteristic time, before the change to theta
    double worst_s = 0.0;
    std::size_t samples = 0;
};

// Solves F'(t) = h_V(q(F)) e^{-mu_V t}, q = 1 - phi_U'(1-F)/mu_U, F(0) = 0 by
// RK4 with steps of at most `step`, landing exactly on each requested time.
inline std::vector<double> solve_characteristic_F(const DegreePMF& pmf_u, const DegreePMF& pmf_v,
                                                  const std::vector<double>& sorted_times, double step) {
    const double mu_u = pmf_u.mean();
    const double mu_v = pmf_v.mean();
    auto rhs = [&](double t, double big_f) {
        const double free_share = eval_phi_deriv(pmf_u, fluid_detail::clamp01(1.0 - big_f), 1) / mu_u;
        return h_ratio(pmf_v, fluid_detail::clamp01(1.0 - free_share)) * std::exp(-mu_v * t);
    };
    std::vector<double> out;
    out.reserve(sorted_times.size());
    double t = 0.0;
    double big_f = 0.0;
    for (double target : sorted_times) {
        if (target < t) throw std::invalid_argument("characteristic times must be sorted");
        while (t < target) {
            const double h = std::min(step, target - t);
            const double k1 = rhs(t, big_f);
            const double k2 = rhs(t + 0.5 * h, big_f + 0.5 * h * k1);
            const double k3 = rhs(t + 0.5 * h, big_f + 0.5 * h * k2);
            const double k4 = rhs(t + h, big_f + h * k3);
            big_f += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t = (h == target - t) ? target : t + h;
        }
        out.push_back(big_f);
    }
    return out;
}

// Compares the integrated drift system against its characteristic-curve
// solution f(theta(t), s) = phi_U((s-1) e^{-mu_V t} + 1 - F(t)),
// theta(t) = (mu_U/mu_V)(1 - e^{-mu_V t}), at `samples` points (t, s).
// Sample times are chosen so that theta(t) falls on the system's grid.
inline CharacteristicsReport verify_characteristics(const DegreePMF& pmf_u, const DegreePMF& pmf_v,
                                                    const FullSystemSolution& system, std::size_t samples,
                                                    double step = 1e-4) {
    if (samples < 1) throw std::invalid_argument("need at least one sample");
    const double mu_u = pmf_u.mean();
    const double mu_v = pmf_v.mean();
    const std::size_t last = system.states.size() - 1;
    constexpr double golden = 0.6180339887498949;

    struct Sample {
        double t;
        double s;
        std::size_t index;
    };
    std::vector<Sample> pts;
    pts.reserve(samples + 1);
    pts.push_back({0.0, 0.5, 0});
    for (std::size_t j = 0; j < samples; ++j) {
        const double frac = (static_cast<double>(j) + 0.5) / static_cast<double>(samples);
        const auto index = std::min(last, static_cast<std::size_t>(std::llround(frac * static_cast<double>(last))));
        const double theta = system.states[index].t;
        const double t = -std::log1p(-theta * mu_v / mu_u) / mu_v;
        const double s = std::fmod(static_cast<double>(j + 1) * golden, 1.0);
        pts.push_back({t, s, index});
    }
    std::sort(pts.begin(), pts.end(), [](const Sample& a, const Sample& b) { return a.t < b.t; });
    std::vector<double> times;
    times.reserve(pts.size());
    for (const auto& p : pts) times.push_back(p.t);
    const auto big_f = solve_characteristic_F(pmf_u, pmf_v, times, step);

    CharacteristicsReport report;
    report.samples = pts.size();
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const auto& p = pts[j];
        const double arg = fluid_detail::clamp01((p.s - 1.0) * std::exp(-mu_v * p.t) + 1.0 - big_f[j]);
        const double lhs = system.states[p.index].free_series(p.s);
        const double diff = std::abs(lhs - eval_phi(pmf_u, arg));
        if (diff > report.max_discrepancy) {
            report.max_discrepancy = diff;
            report.worst_t = p.t;
            report.worst_s = p.s;
        }
    }
    return report;
}

inline CharacteristicsReport verify_characteristics(const DegreePMF& pmf_u, const DegreePMF& pmf_v,
                                                    std::size_t samples, double step = 1e-4) {
    return verify_characteristics(pmf_u, pmf_v, solve_full_system(pmf_u, pmf_v, step), samples, step);
}

struct ClosedForm2Regular {
    double G;
    double matched;
};

// d = 2 regular on both sides: G(s) = e^{s/2} - 1, matched = 1 - (1-G)^2.
inline ClosedForm2Regular closed_form_2regular(double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw std::domain_error("closed_form_2regular: s outside [0,1]");
    const double g = std::expm1(0.5 * s);
    return {g, 1.0 - (1.0 - g) * (1.0 - g)};
}

// Poisson(c) on both sides: endpoint 1 - ln(2 - e^{-c}) / c.
inline double closed_form_er(double c) {
    if (!(c >= 1e-6)) throw std::domain_error("closed_form_er: c must be >= 1e-6");
    return 1.0 - std::log(2.0 - std::exp(-c)) / c;
}

struct ModelComparison {
    bool hypothesis_holds = false;  // equal means and phi_v1 >= phi_v2
    std::string reason;             // set when the hypothesis fails
    double endpoint_1 = 0.0;
    double endpoint_2 = 0.0;
    bool ordering_holds = false;  // endpoint_2 >= endpoint_1 - 1e-6
};

// Online-side comparison: phi_V1 >= phi_V2 with equal means should yield
// endpoint_2 >= endpoint_1.
inline ModelComparison compare_models(const DegreePMF& pmf_u, const DegreePMF& pmf_v1, const DegreePMF& pmf_v2,
                                      double step = 1e-4) {
    ModelComparison out;
    try {
        out.hypothesis_holds = dominates(pmf_v1, pmf_v2);
        if (!out.hypothesis_holds) out.reason = "phi_v1 does not dominate phi_v2 on (0,1)";
    } catch (const std::invalid_argument& e) {
        out.reason = e.what();
    }
    if (!out.hypothesis_holds) return out;
    out.endpoint_1 = solve_G_capless(pmf_u, pmf_v1, step).endpoint;
    out.endpoint_2 = solve_G_capless(pmf_u, pmf_v2, step).endpoint;
    out.ordering_holds = out.endpoint_2 >= out.endpoint_1 - 1e-6;
    return out;
}

}  // namespace cmmatch
