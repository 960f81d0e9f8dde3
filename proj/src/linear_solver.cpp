#include "beamlab/linear_solver.hpp"

#include <cmath>
#include <complex>

#include "beamlab/banded.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/fft.hpp"
#include "beamlab/norms.hpp"

namespace beamlab {

LinearCoefficients unit_coefficients(const Grid& grid) {
    const int nx = grid.nx;
    LinearCoefficients c;
    c.eval_F = [nx](double, std::vector<double>& F) { F.assign(static_cast<size_t>(nx), 1.0); };
    c.eval_G = [nx](double, std::vector<double>& G) { G.assign(static_cast<size_t>(nx), 0.0); };
    c.time_constant = true;
    return c;
}

LinearCoefficients scenario_coefficients(const Scenario& scn, const Mollifier& m, const Grid& grid) {
    if (!scn.mass_term_enabled) return unit_coefficients(grid);
    LinearCoefficients c;
    c.eval_F = [&scn, &m, grid](double t, std::vector<double>& F) {
        F.resize(static_cast<size_t>(grid.nx));
        const double zt = scn.zeta(t);
        for (int i = 0; i < grid.nx; ++i) F[static_cast<size_t>(i)] = coefficient_F(m, zt, grid.x(i));
    };
    c.eval_G = [&scn, &m, grid](double t, std::vector<double>& G) {
        G.resize(static_cast<size_t>(grid.nx));
        const double zt = scn.zeta(t);
        const double zd = scn.zeta_dot(t);
        for (int i = 0; i < grid.nx; ++i) G[static_cast<size_t>(i)] = coefficient_G(m, zt, zd, grid.x(i));
    };
    return c;
}

void apply_fourth_difference(const Field& u, Field& out) {
    const int n = u.size();
    const double inv = 1.0 / std::pow(u.grid.dx(), 4);
    out[0] = 0.0;
    out[n - 1] = 0.0;
    // hinged ends: u = u_xx = 0 give mirror ghosts u(-1) = -u(1)
    out[1] = (5.0 * u[1] - 4.0 * u[2] + u[3]) * inv;
    for (int i = 2; i < n - 2; ++i)
        out[i] = (u[i - 2] - 4.0 * u[i - 1] + 6.0 * u[i] - 4.0 * u[i + 1] + u[i + 2]) * inv;
    out[n - 2] = (u[n - 4] - 4.0 * u[n - 3] + 5.0 * u[n - 2]) * inv;
}

namespace {

struct QuiescenceMonitor {
    double interior_max = 0.0;
    double zone_max = 0.0;
    int zone = 0;
    double tol = 1e-6;

    void observe(const std::vector<double>& u) {
        const int n = static_cast<int>(u.size());
        for (int i = 0; i < n; ++i) {
            const double a = std::fabs(u[static_cast<size_t>(i)]);
            if (i < zone || i >= n - zone)
                zone_max = std::max(zone_max, a);
            else
                interior_max = std::max(interior_max, a);
        }
    }
    bool violated() const { return zone_max > tol * interior_max; }
};

StateHistory solve_clamped(const Grid& grid, const TimeAxis& axis, const LinearCoefficients& coeffs,
                           const TimeSeriesField& g, const Field& u0, const Field& u1,
                           const SolverOptions& opts) {
    const int nx = grid.nx;
    const int ns = nx - 2; // interior unknowns
    const double dt = axis.dt();
    const double dx4 = std::pow(grid.dx(), 4);

    StateHistory hist(grid, axis);

    std::vector<double> F, G;
    Field u(grid), v(grid), a(grid), lu(grid);
    u = u0;
    v = u1;
    u[0] = u[nx - 1] = 0.0;
    v[0] = v[nx - 1] = 0.0;

    BandedMatrix M(ns, 2, 2);
    double zeta_assembled = 0.0;
    bool assembled = false;

    auto assemble = [&](double t) {
        coeffs.eval_F(t, F);
        coeffs.eval_G(t, G);
        M.clear();
        const double cF = 0.25 * dt * dt / dx4;
        for (int i = 1; i <= ns; ++i) {
            const int k = i - 1;
            const double fi = cF * F[static_cast<size_t>(i)];
            double diag = 1.0 + 0.5 * dt * G[static_cast<size_t>(i)];
            if (i == 1) {
                diag += 5.0 * fi;
                M.at(k, k + 1) = -4.0 * fi;
                M.at(k, k + 2) = fi;
            } else if (i == ns) {
                M.at(k, k - 2) = fi;
                M.at(k, k - 1) = -4.0 * fi;
                diag += 5.0 * fi;
            } else {
                if (k - 2 >= 0) M.at(k, k - 2) = fi;
                M.at(k, k - 1) = -4.0 * fi;
                diag += 6.0 * fi;
                M.at(k, k + 1) = -4.0 * fi;
                if (k + 2 < ns) M.at(k, k + 2) = fi;
            }
            M.at(k, k) = diag;
        }
        M.factorize();
        if (opts.zeta) zeta_assembled = opts.zeta(t);
        assembled = true;
    };

    auto needs_assembly = [&](double t) {
        if (!assembled) return true;
        if (coeffs.time_constant) return false;
        if (opts.reassembly_threshold > 0.0 && opts.zeta)
            return std::fabs(opts.zeta(t) - zeta_assembled) > opts.reassembly_threshold;
        return true;
    };

    QuiescenceMonitor monitor;
    monitor.zone = std::min(opts.quiescence_zone, nx / 4);
    monitor.tol = opts.quiescence_tol;

    auto record = [&](int n) {
        hist.u.set_frame(n, u);
        hist.ut.set_frame(n, v);
        BEAMLAB_REQUIRE(u.all_finite() && v.all_finite(),
                        "linear solve: non-finite value at step " << n << " (t = " << axis.t(n) << ")");
        if (opts.monitor_quiescence) {
            monitor.observe(u.values);
            BEAMLAB_REQUIRE(!monitor.violated(),
                            "linear solve: boundary quiescence violated at step " << n
                            << " (zone max " << monitor.zone_max << " vs interior max " << monitor.interior_max
                            << "); enlarge the computational domain");
        }
    };

    // initial acceleration from the equation at t = 0
    assemble(0.0);
    apply_fourth_difference(u, lu);
    for (int i = 1; i <= ns; ++i)
        a[i] = g.at(0, i) - G[static_cast<size_t>(i)] * v[i] - F[static_cast<size_t>(i)] * lu[i];
    a[0] = a[nx - 1] = 0.0;
    record(0);

    std::vector<double> rhs(static_cast<size_t>(ns));
    Field ustar(grid), vstar(grid);
    for (int n = 0; n < axis.nt; ++n) {
        const double t_next = axis.t(n + 1);
        if (needs_assembly(t_next)) assemble(t_next);

        for (int i = 0; i < nx; ++i) {
            ustar[i] = u[i] + dt * v[i] + 0.25 * dt * dt * a[i];
            vstar[i] = v[i] + 0.5 * dt * a[i];
        }
        ustar[0] = ustar[nx - 1] = 0.0;
        vstar[0] = vstar[nx - 1] = 0.0;

        apply_fourth_difference(ustar, lu);
        for (int i = 1; i <= ns; ++i)
            rhs[static_cast<size_t>(i - 1)] =
                g.at(n + 1, i) - G[static_cast<size_t>(i)] * vstar[i] - F[static_cast<size_t>(i)] * lu[i];
        M.solve(rhs);

        for (int i = 1; i <= ns; ++i) {
            const double ai = rhs[static_cast<size_t>(i - 1)];
            a[i] = ai;
            u[i] = ustar[i] + 0.25 * dt * dt * ai;
            v[i] = vstar[i] + 0.5 * dt * ai;
        }
        u[0] = u[nx - 1] = 0.0;
        v[0] = v[nx - 1] = 0.0;
        record(n + 1);
    }
    return hist;
}

StateHistory solve_periodic(const Grid& grid, const TimeAxis& axis, const LinearCoefficients& coeffs,
                            const TimeSeriesField& g, const Field& u0, const Field& u1) {
    const int nx = grid.nx;
    const int np = nx - 1; // periodic points, x_max identified with x_min
    BEAMLAB_REQUIRE(is_pow2(np), "periodic solve: nx - 1 = " << np << " must be a power of two");

    std::vector<double> F, G;
    coeffs.eval_F(0.0, F);
    coeffs.eval_G(0.0, G);
    const double F0 = F[0];
    for (int i = 0; i < nx; ++i) {
        BEAMLAB_REQUIRE(std::fabs(F[static_cast<size_t>(i)] - F0) < 1e-13 && std::fabs(G[static_cast<size_t>(i)]) < 1e-13,
                        "periodic solve: requires constant F and zero G (verification mode)");
    }

    const double dt = axis.dt();
    const double dx = grid.dx();

    // circulant symbol of the fourth-difference stencil
    std::vector<double> lam(static_cast<size_t>(np));
    for (int k = 0; k < np; ++k) {
        const double s = std::sin(M_PI * k / np);
        lam[static_cast<size_t>(k)] = 16.0 * s * s * s * s / (dx * dx * dx * dx);
    }

    using C = std::complex<double>;
    auto forward = [&](const double* vals) {
        std::vector<C> z(static_cast<size_t>(np));
        for (int i = 0; i < np; ++i) z[static_cast<size_t>(i)] = vals[i];
        fft(z, false);
        return z;
    };

    StateHistory hist(grid, axis);
    auto store = [&](TimeSeriesField& dst, int n, std::vector<C> z) {
        fft(z, true);
        double* p = dst.frame(n);
        for (int i = 0; i < np; ++i) p[i] = z[static_cast<size_t>(i)].real();
        p[np] = p[0];
    };

    std::vector<C> uh = forward(u0.values.data());
    std::vector<C> vh = forward(u1.values.data());
    std::vector<C> gh = forward(g.frame(0));
    std::vector<C> ah(static_cast<size_t>(np));
    for (int k = 0; k < np; ++k)
        ah[static_cast<size_t>(k)] = gh[static_cast<size_t>(k)] - F0 * lam[static_cast<size_t>(k)] * uh[static_cast<size_t>(k)];
    store(hist.u, 0, uh);
    store(hist.ut, 0, vh);

    for (int n = 0; n < axis.nt; ++n) {
        gh = forward(g.frame(n + 1));
        for (int k = 0; k < np; ++k) {
            const size_t j = static_cast<size_t>(k);
            const double lk = F0 * lam[j];
            const C us = uh[j] + dt * vh[j] + 0.25 * dt * dt * ah[j];
            const C vs = vh[j] + 0.5 * dt * ah[j];
            const C an = (gh[j] - lk * us) / (1.0 + 0.25 * dt * dt * lk);
            uh[j] = us + 0.25 * dt * dt * an;
            vh[j] = vs + 0.5 * dt * an;
            ah[j] = an;
        }
        store(hist.u, n + 1, uh);
        store(hist.ut, n + 1, vh);
        BEAMLAB_REQUIRE(std::isfinite(hist.u.at(n + 1, 0)), "periodic solve: non-finite value at step " << n + 1);
    }
    return hist;
}

} // namespace

StateHistory solve_linear(const Grid& grid, const TimeAxis& axis, const LinearCoefficients& coeffs,
                          const TimeSeriesField& g, const Field& u0, const Field& u1,
                          const SolverOptions& opts) {
    BEAMLAB_REQUIRE(u0.grid == grid && u1.grid == grid, "linear solve: initial data grid mismatch");
    BEAMLAB_REQUIRE(g.grid == grid && g.axis == axis, "linear solve: forcing grid/axis mismatch");
    BEAMLAB_REQUIRE(u0.all_finite() && u1.all_finite(), "linear solve: initial data not finite");

    if (opts.boundary == BoundaryMode::periodic) return solve_periodic(grid, axis, coeffs, g, u0, u1);
    return solve_clamped(grid, axis, coeffs, g, u0, u1, opts);
}

double estimate_ratio(const StateHistory& h, const Field& u0, const Field& u1, const TimeSeriesField& g) {
    const TimeAxis& axis = h.axis();
    const double dt = axis.dt();
    const double data_norm = h2_norm(u0) + l2_norm(u1);
    constexpr double kFloor = 1e-14;

    std::vector<double> g_l2(static_cast<size_t>(axis.steps()));
    for (int n = 0; n < axis.steps(); ++n) g_l2[static_cast<size_t>(n)] = l2_norm(g.field_at(n));

    double worst = 0.0;
    for (int n = 0; n < axis.steps(); ++n) {
        const double num = h2_norm(h.u.field_at(n)) + l2_norm(h.ut.field_at(n));
        const double den = data_norm + l2l2_norm(g_l2, n, dt) + kFloor;
        worst = std::max(worst, num / den);
    }
    return worst;
}

} // namespace beamlab
