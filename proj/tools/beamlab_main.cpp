// beamlab: numerical laboratory for a nonlinear beam with a moving point mass.
// Subcommands: run, validate, sweep.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "beamlab/runner.hpp"

namespace {

std::vector<double> parse_epsilons(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical lab for a singular beam equation with a moving mass"};
    app.require_subcommand(1);

    std::string run_path, validate_path, sweep_path, epsilons;

    CLI::App* cmd_run = app.add_subcommand("run", "run a configuration and write reports");
    cmd_run->add_option("config", run_path, "configuration file")->required();

    CLI::App* cmd_validate = app.add_subcommand("validate", "parse and validate a configuration");
    cmd_validate->add_option("config", validate_path, "configuration file")->required();

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "run with an overridden epsilon ladder");
    cmd_sweep->add_option("config", sweep_path, "configuration file")->required();
    cmd_sweep->add_option("--epsilons", epsilons, "comma-separated decreasing ladder")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) return beamlab::run_config_file(run_path, {}, std::cout);
        if (cmd_validate->parsed()) return beamlab::validate_config_file(validate_path, std::cout);
        if (cmd_sweep->parsed()) return beamlab::run_config_file(sweep_path, parse_epsilons(epsilons), std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return beamlab::kExitConfigError;
    }
    return beamlab::kExitConfigError;
}
