#pragma once

// Experiment driver behind the command-line tool: configuration parsing,
// built-in presets, Monte Carlo orchestration and CSV/JSON emission.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <cctype>
#include <functional>
#include <map>
#include <new>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cmmatch/capacity.hpp"
#include "cmmatch/degree_models.hpp"
#include "cmmatch/fluid_limit.hpp"
#include "cmmatch/graph_stream.hpp"
#include "cmmatch/online_match.hpp"
#include "cmmatch/stats.hpp"

namespace cmmatch::bench {

using nlohmann::json;

// Invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// {"kind": "regular", "d": int} | {"kind": "poisson", "c": real}
// | {"kind": "explicit", "probs": [real, ...]}
inline DegreePMF pmf_from_json(const json& spec, const std::string& field) {
    try {
        if (!spec.is_object()) throw ConfigError(field + ": distribution spec must be an object");
        if (!spec.contains("kind")) throw ConfigError(field + ".kind: missing");
        const auto kind = spec.at("kind").get<std::string>();
        if (kind == "regular") {
            if (!spec.contains("d") || !spec.at("d").is_number_integer())
                throw ConfigError(field + ".d: integer required");
            return pmf_regular(spec.at("d").get<int>());
        }
        if (kind == "poisson") {
            if (!spec.contains("c") || !spec.at("c").is_number()) throw ConfigError(field + ".c: number required");
            return pmf_poisson(spec.at("c").get<double>(), spec.value("tail_eps", 1e-12));
        }
        if (kind == "explicit") {
            if (!spec.contains("probs") || !spec.at("probs").is_array())
                throw ConfigError(field + ".probs: array required");
            return pmf_explicit(spec.at("probs").get<std::vector<double>>());
        }
        throw ConfigError(field + ".kind: unknown distribution kind '" + kind + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

struct CapacitySpec {
    enum class Kind { none, fixed, profile } kind = Kind::none;
    int fixed = 1;
    std::vector<double> profile;

    Capacities for_n(std::size_t n) const {
        switch (kind) {
            case Kind::none: return Capacities::all_ones();
            case Kind::fixed: return Capacities::uniform(fixed);
            case Kind::profile: return Capacities::from_profile(CapacityProfile(profile), n);
        }
        return Capacities::all_ones();
    }

    std::string describe() const {
        switch (kind) {
            case Kind::none: return "none";
            case Kind::fixed: return "fixed(C=" + std::to_string(fixed) + ")";
            case Kind::profile: {
                std::ostringstream os;
                os << "profile[";
                for (std::size_t i = 0; i < profile.size(); ++i) os << (i ? "," : "") << profile[i];
                os << "]";
                return os.str();
            }
        }
        return "none";
    }
};

struct ModelSpec {
    std::string label;
    json u;
    json v;
};

struct ExperimentConfig {
    std::string experiment;
    json model_u;
    json model_v;
    std::vector<ModelSpec> models;  // fluid sweeps; defaults to (model_u, model_v)
    std::vector<std::size_t> n_values{100, 1000, 10000};
    int runs = 5;
    std::vector<std::string> policies{"GREEDY"};
    CapacitySpec capacities;
    std::uint64_t seed_base = 0;
    std::string outputs = "out";
    std::optional<std::string> preset;
    double step = 1e-4;
    bool write_trajectories = true;
    std::optional<std::int64_t> checkpoint_every;

    std::vector<ModelSpec> model_list() const {
        if (!models.empty()) return models;
        return {{"model", model_u, model_v}};
    }
};

inline std::vector<std::string> preset_names() {
    return {"figure1",        "erdos-renyi",      "concentration-regular4", "concentration-er4",
            "greedy-vs-ranking", "policies-d20", "fixed-capacity",         "capacity-merge"};
}

inline json regular_spec(int d) { return {{"kind", "regular"}, {"d", d}}; }
inline json poisson_spec(double c) { return {{"kind", "poisson"}, {"c", c}}; }

// Built-in experiment configurations at desk scale.
inline json preset_json(const std::string& name) {
    json cfg;
    cfg["preset"] = name;
    cfg["experiment"] = name;
    if (name == "figure1") {
        json models = json::array();
        for (int d : {2, 3, 4, 6, 10})
            models.push_back({{"label", "regular-d" + std::to_string(d)}, {"model_u", regular_spec(d)},
                              {"model_v", regular_spec(d)}});
        cfg["models"] = models;
        cfg["model_u"] = regular_spec(2);
        cfg["model_v"] = regular_spec(2);
    } else if (name == "erdos-renyi") {
        json models = json::array();
        for (double c : {1.0, 2.0, 4.0}) {
            std::ostringstream label;
            label << "poisson-c" << c;
            models.push_back({{"label", label.str()}, {"model_u", poisson_spec(c)}, {"model_v", poisson_spec(c)}});
        }
        cfg["models"] = models;
        cfg["model_u"] = poisson_spec(4.0);
        cfg["model_v"] = poisson_spec(4.0);
    } else if (name == "concentration-regular4") {
        cfg["model_u"] = regular_spec(4);
        cfg["model_v"] = regular_spec(4);
        cfg["n_values"] = {100, 1000, 10000};
        cfg["runs"] = 5;
        cfg["policies"] = {"GREEDY"};
    } else if (name == "concentration-er4") {
        cfg["model_u"] = poisson_spec(4.0);
        cfg["model_v"] = poisson_spec(4.0);
        cfg["n_values"] = {100, 1000, 10000};
        cfg["runs"] = 5;
        cfg["policies"] = {"GREEDY"};
    } else if (name == "greedy-vs-ranking") {
        cfg["model_u"] = regular_spec(2);
        cfg["model_v"] = regular_spec(2);
        cfg["n_values"] = {10000};
        cfg["runs"] = 20;
        cfg["policies"] = {"GREEDY", "RANKING", "SMALLEST", "HIGHEST"};
    } else if (name == "policies-d20") {
        cfg["model_u"] = regular_spec(20);
        cfg["model_v"] = regular_spec(20);
        cfg["n_values"] = {10000};
        cfg["runs"] = 5;
        cfg["policies"] = {"SMALLEST", "GREEDY", "RANKING", "HIGHEST"};
    } else if (name == "fixed-capacity") {
        cfg["model_u"] = poisson_spec(3.0);
        cfg["model_v"] = poisson_spec(3.0);
        cfg["n_values"] = {10000};
        cfg["runs"] = 10;
        cfg["policies"] = {"GREEDY"};
        cfg["capacities"] = {{"kind", "fixed"}, {"C", 2}};
    } else if (name == "capacity-merge") {
        cfg["model_u"] = poisson_spec(4.0);
        cfg["model_v"] = poisson_spec(4.0);
        cfg["n_values"] = {10000};
        cfg["runs"] = 10;
        cfg["policies"] = {"GREEDY"};
        cfg["capacities"] = {{"kind", "fixed"}, {"C", 2}};
    } else {
        throw ConfigError("preset: unknown preset '" + name + "'");
    }
    return cfg;
}

inline ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    ExperimentConfig cfg;
    auto field = [&](const char* key, auto& out) {
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(out);
        } catch (const json::exception& e) {
            throw ConfigError(std::string(key) + ": " + e.what());
        }
    };
    field("experiment", cfg.experiment);
    if (j.contains("preset")) {
        std::string p;
        field("preset", p);
        cfg.preset = p;
    }
    if (j.contains("model_u")) cfg.model_u = j.at("model_u");
    if (j.contains("model_v")) cfg.model_v = j.at("model_v");
    field("n_values", cfg.n_values);
    field("runs", cfg.runs);
    field("policies", cfg.policies);
    field("seed_base", cfg.seed_base);
    field("outputs", cfg.outputs);
    field("step", cfg.step);
    field("write_trajectories", cfg.write_trajectories);
    if (j.contains("checkpoint_every")) {
        std::int64_t every = 0;
        field("checkpoint_every", every);
        cfg.checkpoint_every = every;
    }
    if (j.contains("seed_base") && j.at("seed_base").is_number_integer() && j.at("seed_base").get<std::int64_t>() < 0)
        throw ConfigError("seed_base: must be >= 0");
    if (j.contains("models")) {
        const auto& arr = j.at("models");
        if (!arr.is_array()) throw ConfigError("models: array required");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto& m = arr[i];
            const std::string where = "models[" + std::to_string(i) + "]";
            if (!m.is_object() || !m.contains("model_u") || !m.contains("model_v"))
                throw ConfigError(where + ": needs model_u and model_v");
            cfg.models.push_back({m.value("label", "model" + std::to_string(i)), m.at("model_u"), m.at("model_v")});
        }
    }
    if (j.contains("capacities")) {
        const auto& c = j.at("capacities");
        const std::string kind = c.is_object() ? c.value("kind", "") : "";
        if (kind == "none") {
            cfg.capacities.kind = CapacitySpec::Kind::none;
        } else if (kind == "fixed") {
            if (!c.contains("C") || !c.at("C").is_number_integer() || c.at("C").get<int>() < 1)
                throw ConfigError("capacities.C: integer >= 1 required");
            cfg.capacities.kind = CapacitySpec::Kind::fixed;
            cfg.capacities.fixed = c.at("C").get<int>();
        } else if (kind == "profile") {
            if (!c.contains("p") || !c.at("p").is_array()) throw ConfigError("capacities.p: array required");
            cfg.capacities.kind = CapacitySpec::Kind::profile;
            cfg.capacities.profile = c.at("p").get<std::vector<double>>();
            try {
                CapacityProfile check(cfg.capacities.profile);
            } catch (const std::exception& e) {
                throw ConfigError(std::string("capacities.p: ") + e.what());
            }
        } else {
            throw ConfigError("capacities.kind: expected none | fixed | profile");
        }
    }
    if (cfg.runs < 1) throw ConfigError("runs: must be >= 1");
    if (cfg.n_values.empty()) throw ConfigError("n_values: must be nonempty");
    for (auto n : cfg.n_values)
        if (n < 1) throw ConfigError("n_values: entries must be >= 1");
    if (!(cfg.step > 0.0 && cfg.step <= 1e-2)) throw ConfigError("step: must lie in (0, 1e-2]");
    for (const auto& p : cfg.policies) {
        try {
            Policy::parse(p);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("policies: ") + e.what());
        }
    }
    if (cfg.model_u.is_null() && cfg.models.empty()) throw ConfigError("model_u: missing");
    if (cfg.model_v.is_null() && cfg.models.empty()) throw ConfigError("model_v: missing");
    if (!cfg.model_u.is_null()) pmf_from_json(cfg.model_u, "model_u");
    if (!cfg.model_v.is_null()) pmf_from_json(cfg.model_v, "model_v");
    for (std::size_t i = 0; i < cfg.models.size(); ++i) {
        pmf_from_json(cfg.models[i].u, "models[" + std::to_string(i) + "].model_u");
        pmf_from_json(cfg.models[i].v, "models[" + std::to_string(i) + "].model_v");
    }
    if (cfg.experiment.empty()) cfg.experiment = cfg.preset.value_or("custom");
    return cfg;
}

// Preset (if any) overlaid by the user's keys.
inline ExperimentConfig load_config(const std::optional<json>& user, const std::optional<std::string>& preset) {
    json merged = json::object();
    std::optional<std::string> name = preset;
    if (!name && user && user->contains("preset")) name = user->at("preset").get<std::string>();
    if (name) merged = preset_json(*name);
    if (user) {
        if (!user->is_object()) throw ConfigError("config: top level must be an object");
        for (const auto& [key, value] : user->items()) merged[key] = value;
    }
    if (name) merged["preset"] = *name;
    return parse_config(merged);
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path + ": " + e.what());
    }
}

// Deterministic decimal formatting for CSV output.
inline std::string fmt_real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline std::string sanitize(std::string s) {
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
    return s;
}

// FluidCurve CSV: a comment row echoing the model, then "s,G,matched".
inline void write_fluid_csv(std::ostream& os, const FluidCurve& curve, const std::string& model_echo) {
    os << "# " << model_echo << '\n';
    os << "s,G,matched\n";
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
        os << fmt_real(curve.grid[i]) << ',' << fmt_real(curve.G[i]) << ',' << fmt_real(curve.matched[i]) << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "step,matched\n";
    for (std::size_t k = 0; k < traj.matched_at_step.size(); ++k) os << k << ',' << traj.matched_at_step[k] << '\n';
}

// Histogram sidecar keyed by checkpoint step. kind is F, M or Fc; capacity is
// blank for F and M rows.
inline void write_histogram_csv(std::ostream& os, const Trajectory& traj) {
    os << "step,kind,degree,capacity,count\n";
    for (const auto& snap : traj.checkpoints) {
        for (const auto& [deg, count] : snap.free_by_degree) os << snap.step << ",F," << deg << ",," << count << '\n';
        for (const auto& [deg, count] : snap.marked_by_degree) os << snap.step << ",M," << deg << ",," << count << '\n';
        for (const auto& [key, count] : snap.free_by_degree_capacity)
            os << snap.step << ",Fc," << key.first << ',' << key.second << ',' << count << '\n';
    }
}

// sup over arrivals k of |matched_k / capacity - fluid(k / T)|.
inline double sup_deviation(const Trajectory& traj, const FluidCurve& fluid) {
    double worst = 0.0;
    const double cap = static_cast<double>(traj.total_capacity);
    for (std::size_t k = 0; k <= traj.t; ++k) {
        const double s = traj.t == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(traj.t);
        worst = std::max(worst, std::abs(static_cast<double>(traj.matched_at_step[k]) / cap - fluid.matched_at(s)));
    }
    return worst;
}

inline FluidCurve fluid_for(const DegreePMF& pmf_u, const DegreePMF& pmf_v, const CapacitySpec& caps, double step) {
    switch (caps.kind) {
        case CapacitySpec::Kind::none: return solve_G_capless(pmf_u, pmf_v, step);
        case CapacitySpec::Kind::fixed: return solve_G_fixed_capacity(pmf_u, pmf_v, caps.fixed, step);
        case CapacitySpec::Kind::profile:
            return solve_G_general_capacity(pmf_u, pmf_v, CapacityProfile(caps.profile), step);
    }
    return solve_G_capless(pmf_u, pmf_v, step);
}

// Runs job(i) for i in [0, count) on a pool of worker threads. Each worker
// gets its own Simulator; results land by index, so order is irrelevant.
template <class Job>
void parallel_for(std::size_t count, Job&& job) {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        Simulator sim;
        for (std::size_t i = next++; i < count; i = next++) job(i, sim);
    };
    if (workers == 1) {
        work();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
}

struct RunRecord {
    std::size_t n = 0;
    std::string policy;
    std::uint64_t seed = 0;
    double final_fraction = 0.0;
    std::optional<double> sup_dev;
    std::optional<std::string> error;
};

inline json result_row(std::size_t n, const std::string& policy, const std::vector<double>& finals,
                       std::optional<double> sup_dev) {
    json row;
    row["n"] = n;
    row["policy"] = policy;
    row["mean"] = finals.empty() ? 0.0 : sample_mean(finals);
    row["stddev"] = sample_stddev(finals);
    row["sup_dev"] = sup_dev ? json(*sup_dev) : json(nullptr);
    row["runs"] = finals.size();
    return row;
}

class Bench {
public:
    explicit Bench(ExperimentConfig cfg) : cfg_(std::move(cfg)) {}

    const ExperimentConfig& config() const { return cfg_; }

    json run_fluid() {
        prepare_output();
        json summary = base_summary();
        for (const auto& model : cfg_.model_list()) {
            const auto pmf_u = pmf_from_json(model.u, model.label + ".model_u");
            const auto pmf_v = pmf_from_json(model.v, model.label + ".model_v");
            const auto curve = fluid_for(pmf_u, pmf_v, cfg_.capacities, cfg_.step);
            std::ofstream out(path("fluid_" + sanitize(model.label) + ".csv"));
            write_fluid_csv(out, curve, echo(pmf_u, pmf_v));
            summary["fluid_endpoints"][model.label] = curve.endpoint;
        }
        write_json("summary.json", summary);
        return summary;
    }

    json run_simulate() {
        prepare_output();
        const auto pmf_u = pmf_from_json(cfg_.model_u, "model_u");
        const auto pmf_v = pmf_from_json(cfg_.model_v, "model_v");
        const auto fluid = fluid_for(pmf_u, pmf_v, cfg_.capacities, cfg_.step);

        struct Job {
            std::size_t n;
            Policy policy;
            std::uint64_t seed;
        };
        std::vector<Job> jobs;
        for (auto n : cfg_.n_values)
            for (const auto& name : cfg_.policies)
                for (int r = 0; r < cfg_.runs; ++r)
                    jobs.push_back({n, Policy::parse(name), cfg_.seed_base + static_cast<std::uint64_t>(r)});

        std::vector<RunRecord> records(jobs.size());
        parallel_for(jobs.size(), [&](std::size_t i, Simulator& sim) {
            const auto& job = jobs[i];
            RunRecord& rec = records[i];
            rec.n = job.n;
            rec.policy = job.policy.name();
            rec.seed = job.seed;
            try {
                const auto seq = sample_degree_sequences(pmf_u, pmf_v, job.n, job.seed);
                RunOptions opts;
                opts.checkpoint_every = cfg_.checkpoint_every;
                opts.record_histograms = cfg_.write_trajectories;
                const auto traj = sim.run(seq, cfg_.capacities.for_n(job.n), job.policy, job.seed, opts);
                rec.final_fraction = traj.final_fraction();
                if (job.policy.kind == PolicyKind::greedy) rec.sup_dev = sup_deviation(traj, fluid);
                if (cfg_.write_trajectories) {
                    const std::string stem = run_stem(job.n, rec.policy, job.seed);
                    std::ofstream traj_out(path("traj_" + stem + ".csv"));
                    write_trajectory_csv(traj_out, traj);
                    std::ofstream hist_out(path("hist_" + stem + ".csv"));
                    write_histogram_csv(hist_out, traj);
                }
            } catch (const std::bad_alloc&) {
                rec.error = "resource exhaustion";
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        });

        json summary = base_summary();
        summary["fluid_endpoints"]["model"] = fluid.endpoint;
        append_results(summary, records);
        write_runs_csv(records);
        write_json("summary.json", summary);
        return summary;
    }

    // Coupled runs: every policy sees the same degree sequence and pairing
    // stream for a given seed.
    json run_compare() {
        if (cfg_.policies.size() < 2) throw ConfigError("policies: compare needs at least two policies");
        prepare_output();
        const auto pmf_u = pmf_from_json(cfg_.model_u, "model_u");
        const auto pmf_v = pmf_from_json(cfg_.model_v, "model_v");
        const auto fluid = fluid_for(pmf_u, pmf_v, cfg_.capacities, cfg_.step);
        const std::size_t n_policies = cfg_.policies.size();

        struct Job {
            std::size_t n;
            std::uint64_t seed;
        };
        std::vector<Job> jobs;
        for (auto n : cfg_.n_values)
            for (int r = 0; r < cfg_.runs; ++r) jobs.push_back({n, cfg_.seed_base + static_cast<std::uint64_t>(r)});

        std::vector<std::vector<RunRecord>> records(jobs.size(), std::vector<RunRecord>(n_policies));
        parallel_for(jobs.size(), [&](std::size_t i, Simulator& sim) {
            const auto& job = jobs[i];
            const auto seq = sample_degree_sequences(pmf_u, pmf_v, job.n, job.seed);
            RunOptions opts;
            opts.record_histograms = false;
            for (std::size_t p = 0; p < n_policies; ++p) {
                const auto policy = Policy::parse(cfg_.policies[p]);
                auto& rec = records[i][p];
                rec.n = job.n;
                rec.policy = cfg_.policies[p];
                rec.seed = job.seed;
                try {
                    const auto traj = sim.run(seq, cfg_.capacities.for_n(job.n), policy, job.seed, opts);
                    rec.final_fraction = traj.final_fraction();
                    if (policy.kind == PolicyKind::greedy) rec.sup_dev = sup_deviation(traj, fluid);
                } catch (const std::bad_alloc&) {
                    rec.error = "resource exhaustion";
                }
            }
        });

        json summary = base_summary();
        summary["fluid_endpoints"]["model"] = fluid.endpoint;
        std::vector<RunRecord> flat;
        for (const auto& row : records) flat.insert(flat.end(), row.begin(), row.end());
        append_results(summary, flat);
        write_runs_csv(flat);

        json paired = json::array();
        for (auto n : cfg_.n_values) {
            for (std::size_t a = 0; a < n_policies; ++a) {
                for (std::size_t b = a + 1; b < n_policies; ++b) {
                    std::vector<double> diffs;
                    for (std::size_t i = 0; i < jobs.size(); ++i) {
                        if (jobs[i].n != n || records[i][a].error || records[i][b].error) continue;
                        diffs.push_back(records[i][a].final_fraction - records[i][b].final_fraction);
                    }
                    if (diffs.empty()) continue;
                    const auto test = sign_test_positive(diffs);
                    paired.push_back({{"n", n},
                                      {"a", cfg_.policies[a]},
                                      {"b", cfg_.policies[b]},
                                      {"mean_diff", sample_mean(diffs)},
                                      {"positive", test.positive},
                                      {"negative", test.negative},
                                      {"ties", test.ties},
                                      {"sign_test_p", test.p_value}});
                }
            }
        }
        summary["paired"] = paired;
        write_json("summary.json", summary);
        return summary;
    }

    // Baseline (capacity 1, N vertices) against the merged model (N/C
    // vertices of capacity C whose degrees are C times a draw from pi_U).
    json run_capacity_merge() {
        if (cfg_.capacities.kind != CapacitySpec::Kind::fixed)
            throw ConfigError("capacities: capacity-merge needs {\"kind\": \"fixed\", \"C\": int}");
        prepare_output();
        const int big_c = cfg_.capacities.fixed;
        const auto pmf_u = pmf_from_json(cfg_.model_u, "model_u");
        const auto pmf_v = pmf_from_json(cfg_.model_v, "model_v");
        const auto merged_u = pmf_u.scaled(big_c);
        const auto fluid_base = solve_G_capless(pmf_u, pmf_v, cfg_.step);
        const auto fluid_merged = solve_G_fixed_capacity(merged_u, pmf_v, big_c, cfg_.step);

        json warnings = json::array();
        struct Job {
            std::size_t n_vertices;
            std::size_t n_label;
            bool merged;
            std::uint64_t seed;
        };
        std::vector<Job> jobs;
        for (auto n : cfg_.n_values) {
            const std::size_t merged_n = n / static_cast<std::size_t>(big_c);
            if (n % static_cast<std::size_t>(big_c) != 0)
                warnings.push_back("n=" + std::to_string(n) + " not divisible by C=" + std::to_string(big_c) +
                                   "; merged model uses " + std::to_string(merged_n) + " vertices");
            if (merged_n < 1) throw ConfigError("n_values: n must be >= C for capacity-merge");
            for (int r = 0; r < cfg_.runs; ++r) {
                const auto seed = cfg_.seed_base + static_cast<std::uint64_t>(r);
                jobs.push_back({n, n, false, seed});
                jobs.push_back({merged_n, n, true, seed});
            }
        }
        std::vector<RunRecord> records(jobs.size());
        const std::string merged_name = "GREEDY/merged-C" + std::to_string(big_c);
        parallel_for(jobs.size(), [&](std::size_t i, Simulator& sim) {
            const auto& job = jobs[i];
            auto& rec = records[i];
            rec.n = job.n_label;
            rec.seed = job.seed;
            rec.policy = job.merged ? merged_name : "GREEDY/baseline";
            const auto& law_u = job.merged ? merged_u : pmf_u;
            const auto seq = sample_degree_sequences(law_u, pmf_v, job.n_vertices, job.seed);
            RunOptions opts;
            opts.record_histograms = false;
            const auto caps = job.merged ? Capacities::uniform(big_c) : Capacities::all_ones();
            try {
                const auto traj = sim.run(seq, caps, Policy::greedy(), job.seed, opts);
                rec.final_fraction = traj.final_fraction();
                rec.sup_dev = sup_deviation(traj, job.merged ? fluid_merged : fluid_base);
            } catch (const std::bad_alloc&) {
                rec.error = "resource exhaustion";
            }
        });

        json summary = base_summary();
        summary["fluid_endpoints"]["baseline"] = fluid_base.endpoint;
        summary["fluid_endpoints"]["merged"] = fluid_merged.endpoint;
        append_results(summary, records);
        write_runs_csv(records);
        if (!warnings.empty()) summary["warnings"] = warnings;
        write_json("summary.json", summary);
        return summary;
    }

private:
    static std::string echo(const DegreePMF& u, const DegreePMF& v) {
        return "model_u=" + u.label() + "; model_v=" + v.label();
    }

    std::string echo_caps() const { return cfg_.capacities.describe(); }

    static std::string run_stem(std::size_t n, const std::string& policy, std::uint64_t seed) {
        return "n" + std::to_string(n) + "_" + sanitize(policy) + "_seed" + std::to_string(seed);
    }

    void prepare_output() const { std::filesystem::create_directories(cfg_.outputs); }

    std::string path(const std::string& file) const { return (std::filesystem::path(cfg_.outputs) / file).string(); }

    json base_summary() const {
        json s;
        s["experiment"] = cfg_.experiment;
        s["results"] = json::array();
        s["fluid_endpoints"] = json::object();
        return s;
    }

    void write_json(const std::string& file, const json& j) const {
        std::ofstream out(path(file));
        out << j.dump(2) << '\n';
    }

    // One row per (n, policy) in sorted order.
    static void append_results(json& summary, std::vector<RunRecord> records) {
        std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
            return std::tie(a.n, a.policy, a.seed) < std::tie(b.n, b.policy, b.seed);
        });
        json errors = json::array();
        std::map<std::pair<std::size_t, std::string>, std::vector<const RunRecord*>> groups;
        for (const auto& r : records) groups[{r.n, r.policy}].push_back(&r);
        for (const auto& [key, group] : groups) {
            std::vector<double> finals;
            std::optional<double> sup;
            for (const auto* r : group) {
                if (r->error) {
                    errors.push_back({{"n", r->n}, {"policy", r->policy}, {"seed", r->seed}, {"error", *r->error}});
                    continue;
                }
                finals.push_back(r->final_fraction);
                if (r->sup_dev) sup = std::max(sup.value_or(0.0), *r->sup_dev);
            }
            summary["results"].push_back(result_row(key.first, key.second, finals, sup));
        }
        if (!errors.empty()) summary["errors"] = errors;
    }

    void write_runs_csv(std::vector<RunRecord> records) const {
        std::stable_sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
            return std::tie(a.n, a.policy, a.seed) < std::tie(b.n, b.policy, b.seed);
        });
        std::ofstream out(path("runs.csv"));
        out << "n,policy,seed,final_fraction,sup_dev\n";
        for (const auto& r : records) {
            if (r.error) continue;
            out << r.n << ',' << r.policy << ',' << r.seed << ',' << fmt_real(r.final_fraction) << ','
                << (r.sup_dev ? fmt_real(*r.sup_dev) : std::string()) << '\n';
        }
    }

    ExperimentConfig cfg_;
};

// Checks a summary document against the published schema:
// { "experiment": str, "results": [ { "n": int, "policy": str, "mean": real,
//   "stddev": real, "sup_dev": real|null, "runs": int } ],
//   "fluid_endpoints": { model: real } }
inline std::vector<std::string> validate_summary(const json& s) {
    std::vector<std::string> problems;
    if (!s.is_object()) return {"summary is not an object"};
    if (!s.contains("experiment") || !s["experiment"].is_string()) problems.push_back("experiment: string required");
    if (!s.contains("results") || !s["results"].is_array()) {
        problems.push_back("results: array required");
    } else {
        for (std::size_t i = 0; i < s["results"].size(); ++i) {
            const auto& r = s["results"][i];
            const std::string at = "results[" + std::to_string(i) + "]";
            if (!r.is_object()) {
                problems.push_back(at + ": object required");
                continue;
            }
            if (!r.contains("n") || !r["n"].is_number_integer()) problems.push_back(at + ".n: integer required");
            if (!r.contains("policy") || !r["policy"].is_string()) problems.push_back(at + ".policy: string required");
            if (!r.contains("mean") || !r["mean"].is_number()) problems.push_back(at + ".mean: number required");
            if (!r.contains("stddev") || !r["stddev"].is_number()) problems.push_back(at + ".stddev: number required");
            if (!r.contains("sup_dev") || !(r["sup_dev"].is_number() || r["sup_dev"].is_null()))
                problems.push_back(at + ".sup_dev: number or null required");
            if (!r.contains("runs") || !r["runs"].is_number_integer()) problems.push_back(at + ".runs: integer required");
        }
    }
    if (!s.contains("fluid_endpoints") || !s["fluid_endpoints"].is_object()) {
        problems.push_back("fluid_endpoints: object required");
    } else {
        for (const auto& [k, v] : s["fluid_endpoints"].items())
            if (!v.is_number()) problems.push_back("fluid_endpoints." + k + ": number required");
    }
    return problems;
}

}  // namespace cmmatch::bench
