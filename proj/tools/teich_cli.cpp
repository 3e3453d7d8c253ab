// Batch front-end: `teich <command> [--config path] [--out dir] [--seed n] [--strict]`.
//
// Exit status: 0 when every check passes, 1 when a check fails or a
// numerical error aborts the run, 2 for invalid configuration.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "teich/teich.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Finite-truncation experiments on the universal Teichmueller space"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool strict = false;
    app.add_option("--config", config_path, "JSON experiment configuration");
    app.add_option("--out", out_dir, "Output directory (overrides the config)");
    app.add_option("--seed", seed, "Seed for randomized checks");
    app.add_flag("--strict", strict, "Reject unknown configuration keys");
    app.fallthrough();

    const std::vector<std::pair<std::string, std::string>> commands{
        {"period-map", "Composition matrix, (g,h) blocks and period point of a map"},
        {"wp-pullback", "Pullback of the Siegel metric against h_WP for u = cos nx"},
        {"qs-estimate", "Quasisymmetry constant estimate on a (x, t) grid"},
        {"beltrami-norms", "Hyperbolic L2 norms of harmonic Beltrami differentials vs closed form"},
        {"siegel-demo", "Rank-one Siegel disc vs Poincare disc checks"},
    };
    for (const auto& [name, help] : commands)
        app.add_subcommand(name, help);

    CLI11_PARSE(app, argc, argv);
    const std::string command = app.get_subcommands().front()->get_name();

    teich::ExperimentConfig cfg;
    try {
        std::string text;
        std::filesystem::path base;
        if (!config_path.empty()) {
            text = teich::read_file(config_path);
            base = std::filesystem::path(config_path).parent_path();
        }
        cfg = teich::parse_config(text, strict, base);
        if (!out_dir.empty())
            cfg.out_dir = out_dir;
        for (const auto& key : cfg.ignored_keys)
            std::cerr << "warning: ignoring unknown config key '" << key << "'\n";
    } catch (const teich::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }

    try {
        const auto report = teich::run_command(command, cfg, seed);
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << teich::format_number(c.value)
                      << "  tol=" << teich::format_number(c.tol) << '\n';
        if (!report.passed()) {
            std::cerr << "failed checks:";
            for (const auto& c : report.checks)
                if (!c.pass)
                    std::cerr << ' ' << c.name;
            std::cerr << '\n';
            return 1;
        }
        return 0;
    } catch (const teich::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const teich::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
