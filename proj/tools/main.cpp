#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "mapoi/errors.hpp"

namespace {

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> out;
    bool paper_scale = false;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "run configuration file")->required();
    cmd->add_option("--seed", f.seed, "master seed (overrides run.seed)");
    cmd->add_option("--workers", f.workers, "worker threads, 0 = all cores (overrides run.workers)");
    cmd->add_option("--out", f.out, "output directory (overrides run.output)");
    cmd->add_flag("--paper-scale", f.paper_scale, "full-size GA, family and map budgets");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mapoi: map-facilitated optimal identification of quantum Hamiltonians"};
    app.require_subcommand(1);
    Flags flags;
    CLI::App* oi = app.add_subcommand("oi", "optimize the control field, then identify the Hamiltonian family");
    CLI::App* conv = app.add_subcommand("conventional", "identify from one random field (default Q = 25)");
    CLI::App* val = app.add_subcommand("map-validate", "build one map and report its accuracy and speed");
    for (CLI::App* cmd : {oi, conv, val}) add_flags(cmd, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        mapoi::cli::Overrides o;
        o.seed = flags.seed;
        o.workers = flags.workers;
        if (flags.out) o.output = *flags.out;
        o.paper_scale = flags.paper_scale;
        const mapoi::cli::RunConfig rc = mapoi::cli::load_run_config(flags.config, o);
        if (oi->parsed()) mapoi::cli::cmd_oi(rc, std::cout);
        else if (conv->parsed()) mapoi::cli::cmd_conventional(rc, std::cout);
        else mapoi::cli::cmd_map_validate(rc, std::cout);
    } catch (const mapoi::ConfigError& e) {
        std::cerr << "mapoi: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "mapoi: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
