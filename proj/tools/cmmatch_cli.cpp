#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cmmatch/bench.hpp"

namespace {

using cmmatch::bench::Bench;
using cmmatch::bench::ConfigError;
using cmmatch::bench::json;

struct CommonFlags {
    std::string config_path;
    std::string preset;
    std::string out;
    std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON experiment configuration");
    cmd->add_option("--preset", flags.preset, "built-in configuration name");
    cmd->add_option("--out", flags.out, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "seed_base (overrides config)");
}

cmmatch::bench::ExperimentConfig resolve(const CommonFlags& flags) {
    std::optional<json> user;
    if (!flags.config_path.empty()) user = cmmatch::bench::read_json_file(flags.config_path);
    std::optional<std::string> preset;
    if (!flags.preset.empty()) preset = flags.preset;
    if (!user && !preset) throw ConfigError("either --config or --preset is required");
    if (flags.seed < -1) throw ConfigError("--seed: must be >= 0");
    if (flags.seed >= 0 || !flags.out.empty()) {
        if (!user) user = json::object();
        if (flags.seed >= 0) (*user)["seed_base"] = flags.seed;
        if (!flags.out.empty()) (*user)["outputs"] = flags.out;
    }
    return cmmatch::bench::load_config(user, preset);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online matching on configuration-model graphs: fluid curves and simulations"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* fluid = app.add_subcommand("fluid", "solve the fluid limit and write one CSV per model");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs with trajectory and summary output");
    auto* compare = app.add_subcommand("compare", "coupled policy comparison with paired sign test");
    auto* merge = app.add_subcommand("capacity-merge", "capacity-1 baseline against merged capacity-C vertices");
    auto* presets = app.add_subcommand("presets", "list built-in configurations");
    for (auto* cmd : {fluid, simulate, compare, merge}) add_common(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (presets->parsed()) {
        for (const auto& name : cmmatch::bench::preset_names()) std::cout << name << '\n';
        return 0;
    }

    try {
        Bench bench(resolve(flags));
        json summary;
        if (fluid->parsed()) summary = bench.run_fluid();
        else if (simulate->parsed()) summary = bench.run_simulate();
        else if (compare->parsed()) summary = bench.run_compare();
        else summary = bench.run_capacity_merge();
        if (summary.contains("warnings"))
            for (const auto& w : summary["warnings"]) std::cerr << "warning: " << w.get<std::string>() << '\n';
        std::cout << summary.dump(2) << '\n';
        return summary.contains("errors") ? 1 : 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
