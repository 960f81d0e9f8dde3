#ifndef BEAMLAB_RUNNER_HPP
#define BEAMLAB_RUNNER_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "beamlab/config.hpp"

namespace beamlab {

// exit statuses of the orchestrator
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitMemberFailure = 2;

/// Full orchestration: kernels and model, R/lambda resolution, one Picard run
/// per ladder member (worker pool), the analysis battery, and report files
/// <stem>.report.json, <stem>.energy.csv, <stem>.sweep.csv.
int run_config(const RunConfig& cfg, std::ostream& log);

/// Loads, validates and runs; ladder_override (when nonempty) replaces the
/// configured ladder (the `sweep` subcommand).
int run_config_file(const std::string& path, const std::vector<double>& ladder_override, std::ostream& log);

/// Parse + compile + static checks only.
int validate_config_file(const std::string& path, std::ostream& log);

/// Worker count: config value, else BEAMLAB_WORKERS, else hardware.
int resolve_workers(const RunConfig& cfg);

} // namespace beamlab

#endif
