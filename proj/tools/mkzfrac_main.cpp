#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "app/commands.hpp"
#include "mkzfrac/grid.hpp"
#include "mkzfrac/parallel.hpp"
#include "mkzfrac/simd/kernels.hpp"

using namespace mkzfrac;

int main(int argc, char** argv) {
    CLI::App cli{"Quantum MKZ alpha-fractal experiments"};
    cli.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    long long grid = 0;
    double tol = 0.0;
    long long seed = 0;
    unsigned threads = 0;
    std::string command;

    for (const auto& name : app::command_names()) {
        auto* sub = cli.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config (key = value)")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--grid", grid, "grid size M")->check(CLI::Range(3LL, 100000000LL));
        sub->add_option("--tol", tol, "solver tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "seed for randomized suites");
        sub->add_option("--threads", threads, "worker threads (0: hardware)");
        sub->callback([&command, name] { command = name; });
    }

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : app::kConfigError;
    }

    set_thread_count(threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads);

    app::Config cfg;
    try {
        cfg = app::Config::load(config_path);
        if (cli.get_subcommand(command)->count("--grid")) cfg.set("grid.size", std::to_string(grid));
        if (cli.get_subcommand(command)->count("--tol")) cfg.set("solver.tol", format_double(tol));
        if (cli.get_subcommand(command)->count("--seed")) cfg.set("seed", std::to_string(seed));
    } catch (const app::ConfigError& e) {
        std::cerr << "mkzfrac " << command << ": config error: " << e.what() << '\n';
        return app::kConfigError;
    }
    std::clog << "kernels: " << simd::isa_name(simd::active().isa) << '\n';
    return app::run_command(command, cfg, out_dir, std::cout, std::cerr);
}
