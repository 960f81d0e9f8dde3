#include "beamlab/scenario.hpp"

#include <cmath>

#include "beamlab/convolve.hpp"
#include "beamlab/errors.hpp"

namespace beamlab {

double coefficient_F(const Mollifier& m, double zeta_t, double x) {
    return 1.0 / (1.0 + m.evaluate(0, x - zeta_t));
}

double coefficient_G(const Mollifier& m, double zeta_t, double zeta_dot_t, double x) {
    if (zeta_dot_t == 0.0) return 0.0;
    const double d = x - zeta_t;
    return -zeta_dot_t * m.evaluate(1, d) / (1.0 + m.evaluate(0, d));
}

Field forcing_h(const Scenario& scn, const Mollifier& m, const Grid& grid, double t) {
    const double zt = scn.zeta(t);
    const double Pt = scn.P(t);
    Field h(grid);
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        h[i] = -scn.f(t, x) - Pt * m.evaluate(0, x - zt);
    }
    return h;
}

std::pair<Field, Field> mollify_initial_data(const Scenario& scn, const Mollifier& m, const Grid& grid) {
    Field u0 = Field::sample(grid, scn.u0);
    Field u1 = Field::sample(grid, scn.u1);

    const double margin = m.epsilon();
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        if (x - grid.x_min < margin || grid.x_max - x < margin) {
            BEAMLAB_REQUIRE(u0[i] == 0.0 && u1[i] == 0.0,
                            "initial data reach within eps = " << margin << " of the boundary at x = " << x
                            << "; enlarge the domain or shrink the data support");
        }
    }
    return {convolve(u0, m, 0), convolve(u1, m, 0)};
}

double support_margin_violation(const Scenario& scn, const Grid& grid, double margin,
                                const std::vector<double>& f_sample_times) {
    double worst = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        const double x = grid.x(i);
        if (x - grid.x_min < margin || grid.x_max - x < margin) {
            worst = std::max(worst, std::fabs(scn.u0(x)));
            worst = std::max(worst, std::fabs(scn.u1(x)));
            for (double t : f_sample_times) worst = std::max(worst, std::fabs(scn.f(t, x)));
        }
    }
    return worst;
}

} // namespace beamlab
