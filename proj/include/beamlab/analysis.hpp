#ifndef BEAMLAB_ANALYSIS_HPP
#define BEAMLAB_ANALYSIS_HPP

#include <string>
#include <vector>

#include "beamlab/fixed_point.hpp"
#include "beamlab/mollifier.hpp"
#include "beamlab/scenario.hpp"
#include "beamlab/sobolev.hpp"
#include "beamlab/state_history.hpp"
#include "beamlab/test_function.hpp"
#include "beamlab/truncation.hpp"

namespace beamlab {

enum class TraceWhich { u, ut, ux };

/// Cubic interpolation of the requested field along x = path(t), one value
/// per frame; ux differentiates the interpolant.
std::vector<double> trace(const StateHistory& h, const TimeFn& path, TraceWhich which);

/// Per-frame energy bookkeeping of the tau-multiplier estimate.
struct EnergyLedger {
    std::vector<double> kinetic;      // 1/2 ||u_t||^2
    std::vector<double> bending;      // 1/2 ||u_xx||^2
    std::vector<double> nonlinear_mu; // int mu_R(u * theta') dx
    std::vector<double> concentrated; // 1/2 int theta_eps(x - zeta) u_t^2 dx
    std::vector<double> tau_residual; // running int (PDE residual) . (u_t + zeta' u_x)
};

EnergyLedger energy_ledger(const StateHistory& h, const Mollifier& m, const Truncation& trunc, const Scenario& scn);

/// Per-run sup-in-time graph norm, the quantity the uniform estimate bounds.
double sup_graph_norm(const StateHistory& h);

/// max / median of the per-run sup graph norms across an epsilon ladder;
/// close to 1 means the bound is epsilon-uniform.
double uniform_bound_check(const std::vector<double>& sup_norms);

/// Residual of the regularized weak form at the computed trajectory, for one
/// test function. Vanishes at the discretization order.
double weak_residual_regularized(const StateHistory& h, const TestFunction& v, const Mollifier& m,
                                 const Scenario& scn);

/// Residual of the limit weak form (traces along the load path instead of
/// smeared Dirac terms). Decreases along the epsilon ladder.
double weak_residual_limit(const StateHistory& h, const TestFunction& v, const Scenario& scn);

/// |LHS - RHS| of the discrete integration-by-parts identity for the smeared
/// Dirac inertia term.
double dirac_ibp_identity(const StateHistory& h, const TestFunction& v, const Mollifier& m, const Scenario& scn);

/// Formal trace identity (smooth-data diagnostic): difference between the
/// four-trace-term form and the u_t-trace form; meaningful only at high
/// regularity, closes under refinement.
double remark44_trace_identity(const StateHistory& h, const TestFunction& v, const Scenario& scn);

/// || u(0,.) - u0 ||_L2, the initial-datum gap left by mollification.
double initial_datum_check(const StateHistory& h, const Scenario& scn);

struct SweepMember {
    double epsilon = 0.0;
    double R = 0.0;
    double lambda = 0.0;
    bool ok = false;
    std::string error;
    PicardReport picard;
    double sup_h2 = 0.0;
    double sup_l2_ut = 0.0;
    double detrunc_max_slope = 0.0;
    bool phi_inactive = false;
    std::vector<double> weak39; // per battery member
    std::vector<double> weak13;
    std::vector<double> ibp;    // dirac_ibp_identity per battery member
    double initial_datum = 0.0;
    StateHistory history;
};

struct SweepPair {
    double eps_a = 0.0;
    double eps_b = 0.0;
    double h2alpha_diff_half = 0.0; // sup-in-time H^{1.5}(K) difference (alpha = 0.5)
    double h2alpha_diff_one = 0.0;  // alpha = 1
    double linf_ux_diff = 0.0;      // L_inf([0,T] x K) of u_x difference
    double l2_conv_diff = 0.0;      // L2([0,T] x K) of u_x^{eps_a} * theta vs finest u_x
    double weak39_residual = 0.0;   // battery maximum for eps_b
    double weak13_residual = 0.0;
};

struct SweepReport {
    std::vector<double> ladder;
    std::vector<SweepMember> members;
    std::vector<SweepPair> pairs;
    double uniform_bound_ratio = 0.0; // 0 when fewer than 3 members converged
    double window_a = 0.0, window_b = 0.0, window_taper = 0.0;
    bool all_ok = false;
};

struct SweepOptions {
    SolverOptions solver;
    int workers = 1;
    double window_a = 0.0, window_b = 0.0, window_taper = 0.0; // 0: derive from the grid
};

/// Runs picard_solve per ladder member (optionally in parallel), then the
/// Cauchy-in-epsilon diagnostics, weak residuals over the default battery,
/// and the initial-datum check. Member failures are recorded, not thrown.
SweepReport epsilon_sweep(const Scenario& scn, const std::vector<double>& ladder, const Grid& grid,
                          const TimeAxis& axis, const RegularizationParams& reg, const SweepOptions& opts = {});

} // namespace beamlab

#endif
