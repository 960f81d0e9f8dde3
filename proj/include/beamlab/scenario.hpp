#ifndef BEAMLAB_SCENARIO_HPP
#define BEAMLAB_SCENARIO_HPP

#include <functional>
#include <utility>

#include "beamlab/grid.hpp"
#include "beamlab/mollifier.hpp"

namespace beamlab {

using TimeFn = std::function<double(double)>;
using SpaceFn = std::function<double(double)>;
using SpaceTimeFn = std::function<double(double, double)>; // (t, x)

/// Problem data: load path zeta with its analytic derivatives, point load P,
/// traction p (with analytic p_x), distributed load f, initial data u0/u1,
/// traction coupling nu, and the moving-mass switch.
struct Scenario {
    TimeFn zeta = [](double) { return 0.0; };
    TimeFn zeta_dot = [](double) { return 0.0; };
    TimeFn zeta_ddot = [](double) { return 0.0; };
    TimeFn P = [](double) { return 0.0; };
    SpaceTimeFn p = [](double, double) { return 0.0; };
    SpaceTimeFn p_x = [](double, double) { return 0.0; };
    SpaceTimeFn f = [](double, double) { return 0.0; };
    SpaceFn u0 = [](double) { return 0.0; };
    SpaceFn u1 = [](double) { return 0.0; };
    double nu = 0.0;
    bool mass_term_enabled = true;
};

/// Regularization controls; R and lambda may be deferred to auto rules.
struct RegularizationParams {
    double epsilon = 0.1;
    bool auto_R = true;
    double R = 0.0;       // explicit truncation radius when auto_R is false
    double C_cap = 2.0;   // R = C_cap / epsilon when auto_R is true
    bool auto_lambda = true;
    double lambda = 0.0;  // explicit weighted-norm rate when auto_lambda is false
    double picard_tol = 1e-10;
    int picard_max_iter = 40;
    bool weighted_stop = true; // false: plain L2 stopping metric
};

/// F(t,x) = 1/(1 + theta_eps(x - zeta(t))); equals 1 when the mass term is off.
double coefficient_F(const Mollifier& m, double zeta_t, double x);

/// G(t,x) = -zeta'(t) theta_eps'(x - zeta(t)) F(t,x); zero when the mass term is off.
double coefficient_G(const Mollifier& m, double zeta_t, double zeta_dot_t, double x);

/// h_eps(t,.) = -f(t,.) - P(t) theta_eps(. - zeta(t)) sampled on the grid.
Field forcing_h(const Scenario& scn, const Mollifier& m, const Grid& grid, double t);

/// Mollified initial data (u0 * theta_eps, u1 * theta_eps).
/// Rejects data whose support reaches within eps of the grid ends.
std::pair<Field, Field> mollify_initial_data(const Scenario& scn, const Mollifier& m, const Grid& grid);

/// Largest |u0|, |u1| or |f(t,.)| sample in the outer margin zone, with f
/// probed at the given times; exactly 0 for valid scenarios.
double support_margin_violation(const Scenario& scn, const Grid& grid, double margin,
                                const std::vector<double>& f_sample_times = {});

} // namespace beamlab

#endif
