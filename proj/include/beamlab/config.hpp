#ifndef BEAMLAB_CONFIG_HPP
#define BEAMLAB_CONFIG_HPP

#include <string>
#include <vector>

#include "beamlab/expression.hpp"
#include "beamlab/grid.hpp"
#include "beamlab/scenario.hpp"

namespace beamlab {

/// Parsed flat key-value configuration (dotted block prefixes, one
/// `block.key = value` per line, '#' comments).
struct RunConfig {
    // grid block
    double x_min = 0.0, x_max = 1.0;
    int nx = 0;
    // time block
    double T = 0.0;
    int nt = 0;
    // scenario block (expression sources kept for the report echo)
    std::string zeta_src = "0", P_src = "0", p_src = "0", f_src = "0", u0_src = "0", u1_src = "0";
    Expression zeta, P, p, f, u0, u1;
    double nu = 0.0;
    bool mass_term_enabled = true;
    // regularization block
    std::vector<double> ladder; // single epsilon becomes a one-rung ladder
    bool auto_R = true;
    double R = 0.0;
    double C_cap = 2.0;
    bool auto_lambda = true;
    double lambda = 0.0;
    double picard_tol = 1e-10;
    int picard_max_iter = 40;
    bool weighted_stop = true;
    // solver block (optional)
    double reassembly_dx_fraction = 0.0; // 0: reassemble every step
    double quiescence_tol = 1e-6;
    // outputs block
    std::string report_stem;
    bool checkpoint = false;
    int workers = 0; // 0: hardware default (env BEAMLAB_WORKERS overrides)
    // verification block
    bool periodic_mode = false;
    bool manufactured = false;

    Grid grid() const { return Grid(x_min, x_max, nx); }
    TimeAxis axis() const { return TimeAxis(T, nt); }
};

/// Parses configuration text; unknown keys, missing blocks, malformed
/// expressions and invalid numeric ranges are reported with diagnostics.
RunConfig parse_config(const std::string& text, const std::string& default_stem = "run");

RunConfig load_config(const std::string& path);

/// Compiles the expressions (with symbolic derivatives) into a Scenario.
Scenario build_scenario(const RunConfig& cfg);

/// The regularization parameters of one ladder member, still unresolved.
RegularizationParams regularization_of(const RunConfig& cfg, double epsilon);

} // namespace beamlab

#endif
