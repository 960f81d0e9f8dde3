#ifndef BEAMLAB_LINEAR_SOLVER_HPP
#define BEAMLAB_LINEAR_SOLVER_HPP

#include <functional>

#include "beamlab/grid.hpp"
#include "beamlab/mollifier.hpp"
#include "beamlab/scenario.hpp"
#include "beamlab/state_history.hpp"

namespace beamlab {

enum class BoundaryMode { clamped, periodic };

/// Time-dependent coefficient fields of u_tt + F u_xxxx + G u_t = g.
struct LinearCoefficients {
    std::function<void(double t, std::vector<double>& F)> eval_F;
    std::function<void(double t, std::vector<double>& G)> eval_G;
    bool time_constant = false; // assemble once, reuse forever
};

/// Constant F = 1, G = 0 (verification runs, massless scenarios).
LinearCoefficients unit_coefficients(const Grid& grid);

/// F, G from the mollified moving-mass term of a scenario.
LinearCoefficients scenario_coefficients(const Scenario& scn, const Mollifier& m, const Grid& grid);

struct SolverOptions {
    BoundaryMode boundary = BoundaryMode::clamped;

    // Reassembly cadence: 0 rebuilds the step matrix every step (correctness
    // default); a positive threshold reuses it while the load has moved less
    // than that distance since assembly.
    double reassembly_threshold = 0.0;
    TimeFn zeta; // load position, used by the cadence rule when set

    // Boundary quiescence monitor (clamped mode): the outermost zone must stay
    // below tol * (interior max) or the run aborts advising a larger domain.
    bool monitor_quiescence = true;
    double quiescence_tol = 1e-6;
    int quiescence_zone = 8; // points per side
};

/// Newmark (average acceleration) time stepping of
///   u_tt + F(t,x) u_xxxx + G(t,x) u_t = g(t,x),  u(0) = u0, u_t(0) = u1,
/// second order in dx and dt. Clamped mode pins u = u_xx = 0 at both ends and
/// solves a banded system per step; periodic mode diagonalizes the constant-
/// coefficient problem with an FFT and exists for analytic verification.
StateHistory solve_linear(const Grid& grid, const TimeAxis& axis, const LinearCoefficients& coeffs,
                          const TimeSeriesField& g, const Field& u0, const Field& u1,
                          const SolverOptions& opts = {});

/// Worst-case ratio of the solution graph norm to the data norms, the
/// discrete surrogate of the a priori estimate constant. floor = 1e-14
/// keeps the quotient finite for zero data.
double estimate_ratio(const StateHistory& h, const Field& u0, const Field& u1, const TimeSeriesField& g);

/// Fourth-difference operator with the solver's clamped end closures
/// (mirror ghosts from u = u_xx = 0). Boundary entries of the result are zero.
void apply_fourth_difference(const Field& u, Field& out);

} // namespace beamlab

#endif
