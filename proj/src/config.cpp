#include "beamlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "beamlab/errors.hpp"

namespace beamlab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& key, const std::string& v) {
    double out = 0.0;
    const char* b = v.data();
    const auto res = std::from_chars(b, b + v.size(), out);
    BEAMLAB_REQUIRE(res.ec == std::errc() && res.ptr == b + v.size(),
                    "config: value of '" << key << "' is not a number: '" << v << "'");
    return out;
}

int parse_int(const std::string& key, const std::string& v) {
    int out = 0;
    const char* b = v.data();
    const auto res = std::from_chars(b, b + v.size(), out);
    BEAMLAB_REQUIRE(res.ec == std::errc() && res.ptr == b + v.size(),
                    "config: value of '" << key << "' is not an integer: '" << v << "'");
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "on" || v == "1") return true;
    if (v == "false" || v == "off" || v == "0") return false;
    BEAMLAB_REQUIRE(false, "config: value of '" << key << "' is not a boolean: '" << v << "'");
    return false;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        BEAMLAB_REQUIRE(!item.empty(), "config: empty entry in list '" << key << "'");
        out.push_back(parse_number(key, item));
    }
    BEAMLAB_REQUIRE(!out.empty(), "config: empty list for '" << key << "'");
    return out;
}

Expression parse_expr(const std::string& key, const std::string& src) {
    try {
        return Expression::parse(src);
    } catch (const ParseError& e) {
        throw Error("config: expression '" + key + "' = \"" + src + "\": " + e.what());
    }
}

} // namespace

RunConfig parse_config(const std::string& text, const std::string& default_stem) {
    std::map<std::string, std::string> kv;
    std::set<std::string> blocks;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        BEAMLAB_REQUIRE(eq != std::string::npos, "config line " << lineno << ": expected 'key = value', got '" << line << "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        BEAMLAB_REQUIRE(!key.empty() && !value.empty(), "config line " << lineno << ": empty key or value");
        BEAMLAB_REQUIRE(!kv.count(key), "config line " << lineno << ": duplicate key '" << key << "'");
        kv[key] = value;
        const auto dot = key.find('.');
        if (dot != std::string::npos) blocks.insert(key.substr(0, dot));
    }

    static const std::set<std::string> known = {
        "grid.x_min", "grid.x_max", "grid.nx",
        "time.T", "time.nt",
        "scenario.zeta", "scenario.P", "scenario.p", "scenario.f", "scenario.u0", "scenario.u1",
        "scenario.nu", "scenario.mass_term_enabled",
        "regularization.epsilon", "regularization.ladder", "regularization.R_mode", "regularization.R",
        "regularization.C_cap", "regularization.lambda_mode", "regularization.lambda",
        "regularization.picard_tol", "regularization.picard_max_iter", "regularization.stop_metric",
        "solver.reassembly_dx_fraction", "solver.quiescence_tol",
        "outputs.report_stem", "outputs.checkpoint", "outputs.workers",
        "verification.periodic_mode", "verification.manufactured",
    };
    for (const auto& [key, value] : kv)
        BEAMLAB_REQUIRE(known.count(key), "config: unknown key '" << key << "'");

    for (const char* block : {"grid", "time", "scenario", "regularization"})
        BEAMLAB_REQUIRE(blocks.count(block), "config: required block '" << block << "' is missing");

    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto require = [&](const std::string& key) -> const std::string& {
        const auto* v = get(key);
        BEAMLAB_REQUIRE(v, "config: required key '" << key << "' is missing");
        return *v;
    };

    RunConfig cfg;
    cfg.x_min = parse_number("grid.x_min", require("grid.x_min"));
    cfg.x_max = parse_number("grid.x_max", require("grid.x_max"));
    cfg.nx = parse_int("grid.nx", require("grid.nx"));
    cfg.T = parse_number("time.T", require("time.T"));
    cfg.nt = parse_int("time.nt", require("time.nt"));

    if (const auto* v = get("scenario.zeta")) cfg.zeta_src = *v;
    if (const auto* v = get("scenario.P")) cfg.P_src = *v;
    if (const auto* v = get("scenario.p")) cfg.p_src = *v;
    if (const auto* v = get("scenario.f")) cfg.f_src = *v;
    if (const auto* v = get("scenario.u0")) cfg.u0_src = *v;
    if (const auto* v = get("scenario.u1")) cfg.u1_src = *v;
    cfg.zeta = parse_expr("scenario.zeta", cfg.zeta_src);
    cfg.P = parse_expr("scenario.P", cfg.P_src);
    cfg.p = parse_expr("scenario.p", cfg.p_src);
    cfg.f = parse_expr("scenario.f", cfg.f_src);
    cfg.u0 = parse_expr("scenario.u0", cfg.u0_src);
    cfg.u1 = parse_expr("scenario.u1", cfg.u1_src);
    BEAMLAB_REQUIRE(!cfg.zeta.depends_on('x'), "config: scenario.zeta must depend on t only");
    BEAMLAB_REQUIRE(!cfg.P.depends_on('x'), "config: scenario.P must depend on t only");
    BEAMLAB_REQUIRE(!cfg.u0.depends_on('t'), "config: scenario.u0 must depend on x only");
    BEAMLAB_REQUIRE(!cfg.u1.depends_on('t'), "config: scenario.u1 must depend on x only");
    if (const auto* v = get("scenario.nu")) cfg.nu = parse_number("scenario.nu", *v);
    if (const auto* v = get("scenario.mass_term_enabled")) cfg.mass_term_enabled = parse_bool("scenario.mass_term_enabled", *v);

    const auto* eps = get("regularization.epsilon");
    const auto* ladder = get("regularization.ladder");
    BEAMLAB_REQUIRE(eps || ladder, "config: need regularization.epsilon or regularization.ladder");
    BEAMLAB_REQUIRE(!(eps && ladder), "config: give either regularization.epsilon or .ladder, not both");
    cfg.ladder = eps ? std::vector<double>{parse_number("regularization.epsilon", *eps)}
                     : parse_list("regularization.ladder", *ladder);
    for (double e : cfg.ladder) BEAMLAB_REQUIRE(e > 0.0, "config: epsilon must be positive, got " << e);
    for (size_t i = 0; i + 1 < cfg.ladder.size(); ++i)
        BEAMLAB_REQUIRE(cfg.ladder[i] > cfg.ladder[i + 1], "config: ladder must be strictly decreasing");

    if (const auto* v = get("regularization.R_mode")) {
        BEAMLAB_REQUIRE(*v == "auto" || *v == "explicit", "config: R_mode must be auto or explicit, got '" << *v << "'");
        cfg.auto_R = *v == "auto";
    }
    if (const auto* v = get("regularization.R")) cfg.R = parse_number("regularization.R", *v);
    if (const auto* v = get("regularization.C_cap")) cfg.C_cap = parse_number("regularization.C_cap", *v);
    BEAMLAB_REQUIRE(cfg.auto_R ? cfg.C_cap > 0.0 : cfg.R > 0.0,
                    "config: " << (cfg.auto_R ? "C_cap" : "R") << " must be positive");
    if (const auto* v = get("regularization.lambda_mode")) {
        BEAMLAB_REQUIRE(*v == "auto" || *v == "explicit", "config: lambda_mode must be auto or explicit");
        cfg.auto_lambda = *v == "auto";
    }
    if (const auto* v = get("regularization.lambda")) cfg.lambda = parse_number("regularization.lambda", *v);
    BEAMLAB_REQUIRE(cfg.auto_lambda || cfg.lambda >= 0.0, "config: explicit lambda must be nonnegative");
    if (const auto* v = get("regularization.picard_tol")) cfg.picard_tol = parse_number("regularization.picard_tol", *v);
    BEAMLAB_REQUIRE(cfg.picard_tol > 0.0, "config: picard_tol must be positive");
    if (const auto* v = get("regularization.picard_max_iter"))
        cfg.picard_max_iter = parse_int("regularization.picard_max_iter", *v);
    BEAMLAB_REQUIRE(cfg.picard_max_iter >= 1, "config: picard_max_iter must be at least 1");
    if (const auto* v = get("regularization.stop_metric")) {
        BEAMLAB_REQUIRE(*v == "weighted_graph" || *v == "l2", "config: stop_metric must be weighted_graph or l2");
        cfg.weighted_stop = *v == "weighted_graph";
    }

    if (const auto* v = get("solver.reassembly_dx_fraction"))
        cfg.reassembly_dx_fraction = parse_number("solver.reassembly_dx_fraction", *v);
    BEAMLAB_REQUIRE(cfg.reassembly_dx_fraction >= 0.0, "config: reassembly_dx_fraction must be >= 0");
    if (const auto* v = get("solver.quiescence_tol")) cfg.quiescence_tol = parse_number("solver.quiescence_tol", *v);
    BEAMLAB_REQUIRE(cfg.quiescence_tol > 0.0, "config: quiescence_tol must be positive");

    cfg.report_stem = default_stem;
    if (const auto* v = get("outputs.report_stem")) cfg.report_stem = *v;
    if (const auto* v = get("outputs.checkpoint")) cfg.checkpoint = parse_bool("outputs.checkpoint", *v);
    if (const auto* v = get("outputs.workers")) cfg.workers = parse_int("outputs.workers", *v);
    if (const auto* v = get("verification.periodic_mode")) cfg.periodic_mode = parse_bool("verification.periodic_mode", *v);
    if (const auto* v = get("verification.manufactured")) cfg.manufactured = parse_bool("verification.manufactured", *v);

    // range checks that the domain types repeat at construction
    const Grid grid = cfg.grid();
    const TimeAxis axis = cfg.axis();
    (void)axis;
    for (double e : cfg.ladder)
        BEAMLAB_REQUIRE(e >= 4.0 * grid.dx(),
                        "config: epsilon = " << e << " under-resolved; needs nx >= "
                        << static_cast<int>((cfg.x_max - cfg.x_min) * 4.0 / e) + 1);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    BEAMLAB_REQUIRE(in.good(), "config: cannot open '" << path << "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string stem = path;
    const auto slash = stem.find_last_of('/');
    if (slash != std::string::npos) stem.erase(0, slash + 1);
    const auto dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem.erase(dot);
    return parse_config(ss.str(), stem);
}

Scenario build_scenario(const RunConfig& cfg) {
    Scenario scn;
    const Expression zeta = cfg.zeta;
    const Expression zeta_d = cfg.zeta.differentiate('t', 1);
    const Expression zeta_dd = cfg.zeta.differentiate('t', 2);
    const Expression P = cfg.P;
    const Expression p = cfg.p;
    const Expression p_x = cfg.p.differentiate('x', 1);
    const Expression f = cfg.f;
    const Expression u0 = cfg.u0;
    const Expression u1 = cfg.u1;

    scn.zeta = [zeta](double t) { return zeta.eval(t, 0.0); };
    scn.zeta_dot = [zeta_d](double t) { return zeta_d.eval(t, 0.0); };
    scn.zeta_ddot = [zeta_dd](double t) { return zeta_dd.eval(t, 0.0); };
    scn.P = [P](double t) { return P.eval(t, 0.0); };
    scn.p = [p](double t, double x) { return p.eval(t, x); };
    scn.p_x = [p_x](double t, double x) { return p_x.eval(t, x); };
    scn.f = [f](double t, double x) { return f.eval(t, x); };
    scn.u0 = [u0](double x) { return u0.eval(0.0, x); };
    scn.u1 = [u1](double x) { return u1.eval(0.0, x); };
    scn.nu = cfg.nu;
    scn.mass_term_enabled = cfg.mass_term_enabled;
    return scn;
}

RegularizationParams regularization_of(const RunConfig& cfg, double epsilon) {
    RegularizationParams reg;
    reg.epsilon = epsilon;
    reg.auto_R = cfg.auto_R;
    reg.R = cfg.R;
    reg.C_cap = cfg.C_cap;
    reg.auto_lambda = cfg.auto_lambda;
    reg.lambda = cfg.lambda;
    reg.picard_tol = cfg.picard_tol;
    reg.picard_max_iter = cfg.picard_max_iter;
    reg.weighted_stop = cfg.weighted_stop;
    return reg;
}

} // namespace beamlab
