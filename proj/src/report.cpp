#include "beamlab/report.hpp"

#include <charconv>
#include <fstream>

#include "beamlab/errors.hpp"

namespace beamlab {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary); // fixed newlines on every platform
    BEAMLAB_REQUIRE(os.good(), "report: cannot open '" << path << "' for writing");
    os << content;
    BEAMLAB_REQUIRE(os.good(), "report: write to '" << path << "' failed");
}

void write_energy_csv(const std::string& path, const EnergyLedger& ledger, const TimeAxis& axis) {
    std::string out = "step,time,kinetic,bending,nonlinear_mu,concentrated,tau_residual\n";
    for (int n = 0; n <= axis.nt; ++n) {
        const size_t k = static_cast<size_t>(n);
        out += std::to_string(n);
        out += ',';
        out += format_double(axis.t(n));
        out += ',';
        out += format_double(ledger.kinetic[k]);
        out += ',';
        out += format_double(ledger.bending[k]);
        out += ',';
        out += format_double(ledger.nonlinear_mu[k]);
        out += ',';
        out += format_double(ledger.concentrated[k]);
        out += ',';
        out += format_double(ledger.tau_residual[k]);
        out += '\n';
    }
    write_text_file(path, out);
}

void write_sweep_csv(const std::string& path, const SweepReport& report) {
    // h2alpha_diff is the alpha = 1/2 (H^1.5) Cauchy difference; the alpha = 1
    // variant is in the JSON report
    std::string out = "eps_a,eps_b,h2alpha_diff,linf_ux_diff,l2_conv_diff,weak39_residual,weak13_residual\n";
    for (const SweepPair& p : report.pairs) {
        out += format_double(p.eps_a);
        out += ',';
        out += format_double(p.eps_b);
        out += ',';
        out += format_double(p.h2alpha_diff_half);
        out += ',';
        out += format_double(p.linf_ux_diff);
        out += ',';
        out += format_double(p.l2_conv_diff);
        out += ',';
        out += format_double(p.weak39_residual);
        out += ',';
        out += format_double(p.weak13_residual);
        out += '\n';
    }
    write_text_file(path, out);
}

nlohmann::ordered_json sweep_report_json(const RunConfig& cfg, const SweepReport& report) {
    using json = nlohmann::ordered_json;

    json cfg_echo = {
        {"grid", {{"x_min", cfg.x_min}, {"x_max", cfg.x_max}, {"nx", cfg.nx}}},
        {"time", {{"T", cfg.T}, {"nt", cfg.nt}}},
        {"scenario",
         {{"zeta", cfg.zeta_src},
          {"P", cfg.P_src},
          {"p", cfg.p_src},
          {"f", cfg.f_src},
          {"u0", cfg.u0_src},
          {"u1", cfg.u1_src},
          {"nu", cfg.nu},
          {"mass_term_enabled", cfg.mass_term_enabled}}},
        {"regularization",
         {{"ladder", cfg.ladder},
          {"R_mode", cfg.auto_R ? "auto" : "explicit"},
          {"C_cap", cfg.C_cap},
          {"lambda_mode", cfg.auto_lambda ? "auto" : "explicit"},
          {"picard_tol", cfg.picard_tol},
          {"picard_max_iter", cfg.picard_max_iter}}},
    };

    json members = json::array();
    for (const SweepMember& m : report.members) {
        json jm = {
            {"epsilon", m.epsilon},
            {"R", m.R},
            {"lambda", m.lambda},
            {"status", m.ok ? "ok" : "failed"},
        };
        if (!m.ok) {
            jm["error"] = m.error;
        } else {
            jm["picard"] = {
                {"iterates_used", m.picard.iterates_used},
                {"diffs", m.picard.diffs},
                {"ratios", m.picard.ratios},
                {"lambda", m.picard.lambda_used},
                {"ball_radius", m.picard.ball_radius_2MR},
                {"inside_ball", m.picard.inside_ball},
                {"max_weighted_norm", m.picard.max_weighted_norm},
                {"contraction_max", m.picard.contraction_max},
                {"half_factor_observed", m.picard.half_factor_observed},
                {"fixed_point_residual", m.picard.fixed_point_residual},
            };
            jm["norms"] = {{"sup_h2", m.sup_h2}, {"sup_l2_ut", m.sup_l2_ut}};
            jm["detruncation"] = {{"max_slope", m.detrunc_max_slope}, {"phi_inactive", m.phi_inactive}};
            jm["weak39"] = m.weak39;
            jm["weak13"] = m.weak13;
            jm["ibp_identity"] = m.ibp;
            jm["initial_datum"] = m.initial_datum;
        }
        members.push_back(std::move(jm));
    }

    json pairs = json::array();
    for (const SweepPair& p : report.pairs) {
        pairs.push_back({
            {"eps_a", p.eps_a},
            {"eps_b", p.eps_b},
            {"h2alpha_diff_half", p.h2alpha_diff_half},
            {"h2alpha_diff_one", p.h2alpha_diff_one},
            {"linf_ux_diff", p.linf_ux_diff},
            {"l2_conv_diff", p.l2_conv_diff},
        });
    }

    return json{
        {"tool", "beamlab"},
        {"status", report.all_ok ? "ok" : "partial"},
        {"config", std::move(cfg_echo)},
        {"window", {{"a", report.window_a}, {"b", report.window_b}, {"taper", report.window_taper}}},
        {"members", std::move(members)},
        {"pairs", std::move(pairs)},
        {"uniform_bound_ratio", report.uniform_bound_ratio},
    };
}

} // namespace beamlab
