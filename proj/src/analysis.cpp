#include "beamlab/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "beamlab/convolve.hpp"
#include "beamlab/errors.hpp"
#include "beamlab/norms.hpp"

namespace beamlab {

namespace {

double trapz(const std::vector<double>& a, double dx) {
    double s = 0.5 * (a.front() + a.back());
    for (size_t i = 1; i + 1 < a.size(); ++i) s += a[i];
    return s * dx;
}

/// Trapezoid-in-time accumulation of per-frame space integrals.
double time_trapz(const std::vector<double>& per_frame, double dt) {
    double s = 0.5 * (per_frame.front() + per_frame.back());
    for (size_t i = 1; i + 1 < per_frame.size(); ++i) s += per_frame[i];
    return s * dt;
}

} // namespace

std::vector<double> trace(const StateHistory& h, const TimeFn& path, TraceWhich which) {
    const Grid& grid = h.grid();
    const TimeAxis& axis = h.axis();
    const double dx = grid.dx();
    std::vector<double> out(static_cast<size_t>(axis.steps()));
    for (int n = 0; n <= axis.nt; ++n) {
        const double x = path(axis.t(n));
        BEAMLAB_REQUIRE(x >= grid.x_min + dx && x <= grid.x_max - 2.0 * dx,
                        "trace: path leaves the grid at t = " << axis.t(n) << " (x = " << x << ")");
        const Field f = (which == TraceWhich::ut) ? h.ut.field_at(n) : h.u.field_at(n);
        out[static_cast<size_t>(n)] =
            (which == TraceWhich::ux) ? interpolate_cubic_derivative(f, x) : interpolate_cubic(f, x);
    }
    return out;
}

EnergyLedger energy_ledger(const StateHistory& h, const Mollifier& m, const Truncation& trunc, const Scenario& scn) {
    const Grid& grid = h.grid();
    const TimeAxis& axis = h.axis();
    const int nx = grid.nx;
    const int nt = axis.nt;
    const double dx = grid.dx();
    const double dt = axis.dt();

    EnergyLedger ledger;
    ledger.kinetic.resize(static_cast<size_t>(nt + 1));
    ledger.bending.resize(static_cast<size_t>(nt + 1));
    ledger.nonlinear_mu.resize(static_cast<size_t>(nt + 1));
    ledger.concentrated.resize(static_cast<size_t>(nt + 1));
    ledger.tau_residual.resize(static_cast<size_t>(nt + 1));

    Field w1(grid), w2(grid), q(grid), nl(grid), lu(grid);
    std::vector<double> cell(static_cast<size_t>(nx));
    std::vector<double> s(static_cast<size_t>(nt + 1)); // per-frame residual integrand

    for (int n = 0; n <= nt; ++n) {
        const double t = axis.t(n);
        const double zt = scn.zeta(t);
        const Field u = h.u.field_at(n);
        const Field ut = h.ut.field_at(n);

        ledger.kinetic[static_cast<size_t>(n)] = 0.5 * l2_norm_sq(ut);
        ledger.bending[static_cast<size_t>(n)] = 0.5 * l2_norm_sq(second_derivative(u));

        convolve_into(u, m, 1, w1);
        for (int i = 0; i < nx; ++i) cell[static_cast<size_t>(i)] = trunc.mu(w1[i]);
        ledger.nonlinear_mu[static_cast<size_t>(n)] = trapz(cell, dx);

        if (scn.mass_term_enabled) {
            for (int i = 0; i < nx; ++i)
                cell[static_cast<size_t>(i)] = m.evaluate(0, grid.x(i) - zt) * ut[i] * ut[i];
            ledger.concentrated[static_cast<size_t>(n)] = 0.5 * trapz(cell, dx);
        } else {
            ledger.concentrated[static_cast<size_t>(n)] = 0.0;
        }

        // discrete residual of the mollified strong form, built from the
        // solver's stencils; time derivatives reconstructed from stored u_t
        convolve_into(u, m, 2, w2);
        for (int i = 0; i < nx; ++i)
            q[i] = (trunc.phi(w1[i]) - scn.nu * scn.p(t, grid.x(i))) * w2[i];
        convolve_into(q, m, 0, nl);
        apply_fourth_difference(u, lu);
        const Field hfield = forcing_h(scn, m, grid, t);
        const Field ux = derivative(u);
        const double zdot = scn.zeta_dot(t);

        // at the ends: one-sided second-order stencils; interior: centered
        const double c_prev = (n == 0) ? -3.0 : (n == nt ? 1.0 : -1.0);
        const double c_mid = (n == 0) ? 4.0 : (n == nt ? -4.0 : 0.0);
        const double c_next = (n == 0) ? -1.0 : (n == nt ? 3.0 : 1.0);
        const int ia = (n == 0) ? 0 : (n == nt ? nt - 2 : n - 1);
        const int ib = (n == 0) ? 1 : (n == nt ? nt - 1 : n);
        const int ic = (n == 0) ? 2 : (n == nt ? nt : n + 1);

        for (int i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            const double utt = (c_prev * h.ut.at(ia, i) + c_mid * h.ut.at(ib, i) + c_next * h.ut.at(ic, i)) / (2.0 * dt);
            double dsing = 0.0;
            if (scn.mass_term_enabled) {
                const double Xa = m.evaluate(0, x - scn.zeta(axis.t(ia))) * h.ut.at(ia, i);
                const double Xb = m.evaluate(0, x - scn.zeta(axis.t(ib))) * h.ut.at(ib, i);
                const double Xc = m.evaluate(0, x - scn.zeta(axis.t(ic))) * h.ut.at(ic, i);
                dsing = (c_prev * Xa + c_mid * Xb + c_next * Xc) / (2.0 * dt);
            }
            const double r = utt + dsing + lu[i] - nl[i] - hfield[i];
            const double u_tau = ut[i] + zdot * ux[i];
            cell[static_cast<size_t>(i)] = r * u_tau;
        }
        s[static_cast<size_t>(n)] = trapz(cell, dx);
    }

    ledger.tau_residual[0] = 0.0;
    for (int n = 1; n <= nt; ++n)
        ledger.tau_residual[static_cast<size_t>(n)] =
            ledger.tau_residual[static_cast<size_t>(n - 1)] +
            0.5 * dt * (s[static_cast<size_t>(n - 1)] + s[static_cast<size_t>(n)]);
    return ledger;
}

double sup_graph_norm(const StateHistory& h) {
    double sup = 0.0;
    for (int n = 0; n <= h.axis().nt; ++n)
        sup = std::max(sup, h2_norm(h.u.field_at(n)) + l2_norm(h.ut.field_at(n)));
    return sup;
}

double uniform_bound_check(const std::vector<double>& sup_norms) {
    BEAMLAB_REQUIRE(sup_norms.size() >= 3, "uniform bound check: needs at least 3 ladder points, got "
                                               << sup_norms.size());
    std::vector<double> sorted = sup_norms;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    const double median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    BEAMLAB_REQUIRE(median > 0.0, "uniform bound check: degenerate (zero) norms");
    return sorted.back() / median;
}

double weak_residual_regularized(const StateHistory& h, const TestFunction& v, const Mollifier& m,
                                 const Scenario& scn) {
    const Grid& grid = h.grid();
    const TimeAxis& axis = h.axis();
    v.validate(grid);

    const int nx = grid.nx;
    const double dx = grid.dx();
    const double dt = axis.dt();

    // separable test function: spatial convolutions hoisted out of the loop
    const Field wv = v.sample_w(grid);
    const Field wv_d1 = v.sample_w_d1(grid);
    const Field wv_conv = convolve(wv, m, 0);
    const Field wv_d1_conv = convolve(wv_d1, m, 0);

    Field w1(grid);
    std::vector<double> cell(static_cast<size_t>(nx));
    std::vector<double> per_frame(static_cast<size_t>(axis.steps()));

    for (int n = 0; n <= axis.nt; ++n) {
        const double t = axis.t(n);
        const double zt = scn.zeta(t);
        const double chi = v.chi(t);
        const double chid = v.chi_d1(t);
        const double Pt = scn.P(t);
        const Field u = h.u.field_at(n);
        const Field ut = h.ut.field_at(n);
        const Field uxx = second_derivative(u);
        convolve_into(u, m, 1, w1);

        for (int i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            const double theta = scn.mass_term_enabled ? m.evaluate(0, x - zt) : 0.0;
            const double vx_conv = chi * wv_d1_conv[i];
            const double v_conv = chi * wv_conv[i];
            const double vt = chid * wv[i];
            const double vv = chi * wv[i];
            const double nup = scn.nu * scn.p(t, x);
            const double nupx = scn.nu * scn.p_x(t, x);

            double val = ut[i] * vt;                          // u_t v_t
            val += theta * ut[i] * vt;                        // theta u_t v_t
            val -= uxx[i] * (chi * v.w_d2(x));                // -u_xx v_xx
            val -= (1.0 / 3.0) * w1[i] * w1[i] * w1[i] * vx_conv; // -(1/3)(u*theta')^3 (v_x*theta)
            val += nup * w1[i] * vx_conv;                     // nu p (u*theta')(v_x*theta)
            val += nupx * w1[i] * v_conv;                     // (nu p)_x (u*theta')(v*theta)
            val -= scn.f(t, x) * vv;                          // -f v
            val -= theta * Pt * vv;                           // -theta P v
            cell[static_cast<size_t>(i)] = val;
        }
        per_frame[static_cast<size_t>(n)] = trapz(cell, dx);
    }
    double total = time_trapz(per_frame, dt);

    // initial-data terms
    const Field ut0 = h.ut.field_at(0);
    const double z0 = scn.zeta(0.0);
    for (int i = 0; i < nx; ++i) {
        const double x = grid.x(i);
        const double theta0 = scn.mass_term_enabled ? m.evaluate(0, x - z0) : 0.0;
        cell[static_cast<size_t>(i)] = (1.0 + theta0) * ut0[i] * v.v(0.0, x);
    }
    total += trapz(cell, dx);

    return std::fabs(total);
}

double weak_residual_limit(const StateHistory& h, const TestFunction& v, const Scenario& scn) {
    const Grid& grid = h.grid();
    const TimeAxis& axis = h.axis();
    v.validate(grid);

    const int nx = grid.nx;
    const double dx = grid.dx();
    const double dt = axis.dt();

    std::vector<double> cell(static_cast<size_t>(nx));
    std::vector<double> per_frame(static_cast<size_t>(axis.steps()));

    for (int n = 0; n <= axis.nt; ++n) {
        const double t = axis.t(n);
        const double chi = v.chi(t);
        const double chid = v.chi_d1(t);
        const Field u = h.u.field_at(n);
        const Field ut = h.ut.field_at(n);
        const Field ux = derivative(u);
        const Field uxx = second_derivative(u);

        for (int i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            double val = ut[i] * (chid * v.w(x));                        // u_t v_t
            val -= uxx[i] * (chi * v.w_d2(x));                           // -u_xx v_xx
            val -= (1.0 / 3.0) * ux[i] * ux[i] * ux[i] * (chi * v.w_d1(x)); // -(1/3) u_x^3 v_x
            val -= scn.nu * scn.p(t, x) * uxx[i] * (chi * v.w(x));       // -nu p u_xx v
            val -= scn.f(t, x) * (chi * v.w(x));                         // -f v
            cell[static_cast<size_t>(i)] = val;
        }
        per_frame[static_cast<size_t>(n)] = trapz(cell, dx);
    }
    double total = time_trapz(per_frame, dt);

    // point-load trace term
    for (int n = 0; n <= axis.nt; ++n)
        per_frame[static_cast<size_t>(n)] = scn.P(axis.t(n)) * v.v(axis.t(n), scn.zeta(axis.t(n)));
    total -= time_trapz(per_frame, dt);

    // initial-data terms with the raw (unmollified) scenario data
    for (int i = 0; i < nx; ++i) cell[static_cast<size_t>(i)] = scn.u1(grid.x(i)) * v.v(0.0, grid.x(i));
    total += trapz(cell, dx);

    if (scn.mass_term_enabled) {
        const double z0 = scn.zeta(0.0);
        total += scn.u1(z0) * v.v(0.0, z0);
        total -= scn.u0(z0) * v.v_t(0.0, z0);

        const auto tr_u = trace(h, scn.zeta, TraceWhich::u);
        const auto tr_ux = trace(h, scn.zeta, TraceWhich::ux);
        for (int n = 0; n <= axis.nt; ++n) {
            const double t = axis.t(n);
            const double z = scn.zeta(t);
            const double zd = scn.zeta_dot(t);
            per_frame[static_cast<size_t>(n)] = tr_u[static_cast<size_t>(n)] * v.v_tt(t, z) +
                                                zd * tr_ux[static_cast<size_t>(n)] * v.v_t(t, z) +
                                                zd * tr_u[static_cast<size_t>(n)] * v.v_xt(t, z);
        }
        total -= time_trapz(per_frame, dt);
    }
    return std::fabs(total);
}

double dirac_ibp_identity(const StateHistory& h, const TestFunction& v, const Mollifier& m, const Scenario& scn) {
    const Grid& grid = h.grid();
    const TimeAxis& axis = h.axis();
    v.validate(grid);

    const int nx = grid.nx;
    const double dx = grid.dx();
    const double dt = axis.dt();

    std::vector<double> cell(static_cast<size_t>(nx));
    std::vector<double> lhs_frames(static_cast<size_t>(axis.steps()));
    std::vector<double> rhs_frames(static_cast<size_t>(axis.steps()));

    for (int n = 0; n <= axis.nt; ++n) {
        const double t = axis.t(n);
        const double zt = scn.zeta(t);
        const double zd = scn.zeta_dot(t);
        const Field u = h.u.field_at(n);
        const Field ut = h.ut.field_at(n);
        const Field ux = derivative(u);

        for (int i = 0; i < nx; ++i)
            cell[static_cast<size_t>(i)] = m.evaluate(0, grid.x(i) - zt) * ut[i] * v.v_t(t, grid.x(i));
        lhs_frames[static_cast<size_t>(n)] = trapz(cell, dx);

        for (int i = 0; i < nx; ++i) {
            const double x = grid.x(i);
            const double theta = m.evaluate(0, x - zt);
            cell[static_cast<size_t>(i)] = theta * (u[i] * v.v_tt(t, x) + zd * ux[i] * v.v_t(t, x) +
                                                    zd * u[i] * v.v_xt(t, x));
        }
        rhs_frames[static_cast<size_t>(n)] = trapz(cell, dx);
    }

    const double lhs = time_trapz(lhs_frames, dt);

    const double z0 = scn.zeta(0.0);
    const Field u0 = h.u.field_at(0);
    for (int i = 0; i < nx; ++i)
        cell[static_cast<size_t>(i)] = m.evaluate(0, grid.x(i) - z0) * u0[i] * v.v_t(0.0, grid.x(i));
    const double rhs = -trapz(cell, dx) - time_trapz(rhs_frames, dt);

    return std::fabs(lhs - rhs);
}

double remark44_trace_identity(const StateHistory& h, const TestFunction& v, const Scenario& scn) {
    const TimeAxis& axis = h.axis();
    const double dt = axis.dt();

    const auto tr_u = trace(h, scn.zeta, TraceWhich::u);
    const auto tr_ut = trace(h, scn.zeta, TraceWhich::ut);
    const auto tr_ux = trace(h, scn.zeta, TraceWhich::ux);

    std::vector<double> four_terms(static_cast<size_t>(axis.steps()));
    std::vector<double> ut_term(static_cast<size_t>(axis.steps()));
    for (int n = 0; n <= axis.nt; ++n) {
        const double t = axis.t(n);
        const double z = scn.zeta(t);
        const double zd = scn.zeta_dot(t);
        four_terms[static_cast<size_t>(n)] = tr_u[static_cast<size_t>(n)] * v.v_tt(t, z) +
                                             zd * tr_ux[static_cast<size_t>(n)] * v.v_t(t, z) +
                                             zd * tr_u[static_cast<size_t>(n)] * v.v_xt(t, z);
        ut_term[static_cast<size_t>(n)] = tr_ut[static_cast<size_t>(n)] * v.v_t(t, z);
    }
    const double rhs = -tr_u[0] * v.v_t(0.0, scn.zeta(0.0)) - time_trapz(four_terms, dt);
    return std::fabs(rhs - time_trapz(ut_term, dt));
}

double initial_datum_check(const StateHistory& h, const Scenario& scn) {
    const Grid& grid = h.grid();
    Field diff(grid);
    const Field u0 = h.u.field_at(0);
    for (int i = 0; i < grid.nx; ++i) diff[i] = u0[i] - scn.u0(grid.x(i));
    return l2_norm(diff);
}

namespace {

void run_indexed(int count, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min(workers, count);
    pool.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace

SweepReport epsilon_sweep(const Scenario& scn, const std::vector<double>& ladder, const Grid& grid,
                          const TimeAxis& axis, const RegularizationParams& reg, const SweepOptions& opts) {
    BEAMLAB_REQUIRE(!ladder.empty(), "sweep: empty epsilon ladder");
    for (size_t k = 0; k + 1 < ladder.size(); ++k)
        BEAMLAB_REQUIRE(ladder[k] > ladder[k + 1], "sweep: ladder must be strictly decreasing");
    for (double eps : ladder)
        BEAMLAB_REQUIRE(eps >= 4.0 * grid.dx(),
                        "sweep: epsilon = " << eps << " under-resolved by dx = " << grid.dx());

    SweepReport report;
    report.ladder = ladder;
    report.members.resize(ladder.size());

    const double span = grid.x_max - grid.x_min;
    report.window_a = opts.window_a != 0.0 || opts.window_b != 0.0 ? opts.window_a : grid.x_min + 0.25 * span;
    report.window_b = opts.window_a != 0.0 || opts.window_b != 0.0 ? opts.window_b : grid.x_max - 0.25 * span;
    report.window_taper = opts.window_taper > 0.0 ? opts.window_taper : 0.08 * span;

    const auto battery = default_test_battery(scn, grid, axis);

    run_indexed(static_cast<int>(ladder.size()), opts.workers, [&](int k) {
        SweepMember& mem = report.members[static_cast<size_t>(k)];
        mem.epsilon = ladder[static_cast<size_t>(k)];
        try {
            RegularizationParams local = reg;
            local.epsilon = mem.epsilon;
            local.R = resolve_R(local, local.epsilon, local.C_cap);
            mem.R = local.R;

            const Mollifier m(local.epsilon, grid.dx());
            const Truncation trunc(local.R);
            if (local.auto_lambda) local.lambda = lambda_auto(scn, m, trunc, grid, axis, opts.solver);
            mem.lambda = local.lambda;

            auto [history, picard] = picard_solve(scn, local, grid, axis, opts.solver);
            mem.picard = picard;

            mem.sup_h2 = 0.0;
            mem.sup_l2_ut = 0.0;
            for (int n = 0; n <= axis.nt; ++n) {
                mem.sup_h2 = std::max(mem.sup_h2, h2_norm(history.u.field_at(n)));
                mem.sup_l2_ut = std::max(mem.sup_l2_ut, l2_norm(history.ut.field_at(n)));
            }
            mem.detrunc_max_slope = max_convolved_slope(history, m);
            mem.phi_inactive = mem.detrunc_max_slope <= mem.R;

            mem.weak39.reserve(battery.size());
            mem.weak13.reserve(battery.size());
            mem.ibp.reserve(battery.size());
            for (const TestFunction& tf : battery) {
                mem.weak39.push_back(weak_residual_regularized(history, tf, m, scn));
                mem.weak13.push_back(weak_residual_limit(history, tf, scn));
                mem.ibp.push_back(dirac_ibp_identity(history, tf, m, scn));
            }
            mem.initial_datum = initial_datum_check(history, scn);
            mem.history = std::move(history);
            mem.ok = true;
        } catch (const std::exception& e) {
            mem.ok = false;
            mem.error = e.what();
        }
    });

    // Cauchy diagnostics between adjacent converged members, finest run as
    // the stand-in for the limit
    const SweepMember* finest = nullptr;
    for (auto it = report.members.rbegin(); it != report.members.rend(); ++it)
        if (it->ok) {
            finest = &*it;
            break;
        }

    for (size_t k = 0; k + 1 < report.members.size(); ++k) {
        const SweepMember& a = report.members[k];
        const SweepMember& b = report.members[k + 1];
        if (!a.ok || !b.ok || finest == nullptr) continue;

        SweepPair pair;
        pair.eps_a = a.epsilon;
        pair.eps_b = b.epsilon;

        SobolevNormSpec half{1.5, report.window_a, report.window_b, report.window_taper};
        SobolevNormSpec one{1.0, report.window_a, report.window_b, report.window_taper};

        const Mollifier m_a(a.epsilon, grid.dx());
        const int ia = static_cast<int>(std::ceil((report.window_a - grid.x_min) / grid.dx()));
        const int ib = static_cast<int>(std::floor((report.window_b - grid.x_min) / grid.dx()));

        Field diff(grid), w1a(grid);
        std::vector<double> l2conv_frames(static_cast<size_t>(axis.steps()));
        std::vector<double> win_cell(static_cast<size_t>(ib - ia + 1));
        for (int n = 0; n <= axis.nt; ++n) {
            const Field ua = a.history.u.field_at(n);
            const Field ub = b.history.u.field_at(n);
            for (int i = 0; i < grid.nx; ++i) diff[i] = ua[i] - ub[i];
            pair.h2alpha_diff_half = std::max(pair.h2alpha_diff_half, sobolev_norm(diff, half));
            pair.h2alpha_diff_one = std::max(pair.h2alpha_diff_one, sobolev_norm(diff, one));

            const Field uxa = derivative(ua);
            const Field uxb = derivative(ub);
            for (int i = ia; i <= ib; ++i)
                pair.linf_ux_diff = std::max(pair.linf_ux_diff, std::fabs(uxa[i] - uxb[i]));

            convolve_into(ua, m_a, 1, w1a);
            const Field uxf = derivative(finest->history.u.field_at(n));
            for (int i = ia; i <= ib; ++i) {
                const double d = w1a[i] - uxf[i];
                win_cell[static_cast<size_t>(i - ia)] = d * d;
            }
            l2conv_frames[static_cast<size_t>(n)] = trapz(win_cell, grid.dx());
        }
        pair.l2_conv_diff = std::sqrt(time_trapz(l2conv_frames, axis.dt()));

        pair.weak39_residual = *std::max_element(b.weak39.begin(), b.weak39.end());
        pair.weak13_residual = *std::max_element(b.weak13.begin(), b.weak13.end());
        report.pairs.push_back(pair);
    }

    std::vector<double> sups;
    for (const SweepMember& mem : report.members)
        if (mem.ok) sups.push_back(sup_graph_norm(mem.history));
    if (sups.size() >= 3) report.uniform_bound_ratio = uniform_bound_check(sups);

    report.all_ok = true;
    for (const SweepMember& mem : report.members) report.all_ok = report.all_ok && mem.ok;
    return report;
}

} // namespace beamlab
