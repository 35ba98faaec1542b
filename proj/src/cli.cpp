#include "statdisc/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "statdisc/indices.hpp"

namespace statdisc {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::Validation, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) bad(where + "." + key, "missing");
    return *it;
}

const json* optional(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) bad(where, "expected an object");
    auto it = obj.find(key);
    return it == obj.end() || it->is_null() ? nullptr : &*it;
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) bad(where, "expected an integer");
    return v.get<int>();
}

double as_double(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where, "expected a number");
    return v.get<double>();
}

mpq_class as_rational(const json& v, const std::string& where) {
    try {
        if (v.is_number_integer()) return mpq_class(v.get<long>());
        if (v.is_number()) return mpq_class(v.get<double>());
        if (v.is_string()) return GaussRational::parse_real(v.get<std::string>()).re();
    } catch (const std::invalid_argument&) {
        bad(where, "malformed number");
    }
    bad(where, "expected a number or a \"p/q\" string");
}

GaussRational as_complex(const json& v, const std::string& where) {
    if (v.is_array()) {
        if (v.size() != 2) bad(where, "expected [re, im]");
        return GaussRational(as_rational(v[0], where + "[0]"), as_rational(v[1], where + "[1]"));
    }
    return GaussRational(as_rational(v, where));
}

std::array<int, 2> as_pair(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2) bad(where, "expected [a, b]");
    return {as_int(v[0], where + "[0]"), as_int(v[1], where + "[1]")};
}

HomogPoly parse_poly(const json& j, const std::string& where) {
    const int degree = as_int(require(j, "degree", where), where + ".degree");
    const int k = as_int(require(j, "k", where), where + ".k");
    const json& list = require(j, "coefficients", where);
    if (!list.is_array()) bad(where + ".coefficients", "expected a list of [j, re, im]");
    std::map<int, GaussRational> alpha;
    for (size_t t = 0; t < list.size(); ++t) {
        const std::string at = where + ".coefficients[" + std::to_string(t) + "]";
        const json& e = list[t];
        if (!e.is_array() || e.size() != 3) bad(at, "expected [j, re, im]");
        const int idx = as_int(e[0], at + "[0]");
        if (alpha.count(idx)) bad(at, "index " + std::to_string(idx) + " given twice");
        alpha[idx] = GaussRational(as_rational(e[1], at + "[1]"), as_rational(e[2], at + "[2]"));
    }
    return HomogPoly(degree, k, std::move(alpha), where);
}

Perturbation parse_perturbation(const json* j) {
    Perturbation p;
    if (!j) return p;
    const std::string where = "perturbation";
    if (const json* e = optional(*j, "epsilon", where)) p.amplitude = GaussRational(as_rational(*e, where + ".epsilon"));
    if (const json* terms = optional(*j, "terms", where)) {
        if (!terms->is_array()) bad(where + ".terms", "expected a list");
        for (size_t t = 0; t < terms->size(); ++t) {
            const std::string at = where + ".terms[" + std::to_string(t) + "]";
            const json& e = (*terms)[t];
            PerturbationTerm term;
            term.ell = as_int(require(e, "ell", at), at + ".ell");
            if (const json* v = optional(e, "z", at)) term.I = as_pair(*v, at + ".z");
            if (const json* v = optional(e, "zbar", at)) term.J = as_pair(*v, at + ".zbar");
            if (const json* v = optional(e, "imw", at)) term.l = as_pair(*v, at + ".imw");
            if (const json* v = optional(e, "coeff", at)) term.coeff = as_complex(*v, at + ".coeff");
            p.terms.push_back(term);
        }
    }
    return p;
}

json rational_json(const mpq_class& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return q.get_str();
}

json complex_json(const GaussRational& q) {
    if (q.is_real()) return rational_json(q.re());
    return json::array({rational_json(q.re()), rational_json(q.im())});
}

json certificate_json(const StationarityCertificate& cert, const Model& m) {
    json out;
    out["status"] = cert.valid() ? "PASS" : "FAIL";
    out["residuals"] = cert.residuals;
    out["max_residual"] = cert.max_residual();
    out["exact_checked"] = cert.exact_checked;
    if (cert.exact_checked) out["exact_zero"] = cert.exact_zero;
    json cs = json::array();
    for (int l = 0; l < 2; ++l) {
        json c;
        c["min"] = cert.multiplier_min[static_cast<size_t>(l)];
        c["max"] = cert.multiplier_max[static_cast<size_t>(l)];
        if (cert.multipliers_exact && (*cert.multipliers_exact)[static_cast<size_t>(l)].is_monomial() &&
            (*cert.multipliers_exact)[static_cast<size_t>(l)].min_exp() == 0)
            c["exact"] = complex_json((*cert.multipliers_exact)[static_cast<size_t>(l)].coeff(0));
        cs.push_back(c);
    }
    out["c"] = cs;
    out["multiplier_imag"] = cert.multiplier_imag;
    out["nondegeneracy_margin"] = cert.margin;
    out["vanishing_orders"] = cert.orders;
    out["required_orders"] = required_orders(m);
    out["grid"] = cert.grid;
    if (cert.failure) out["failure"] = {{"kind", to_string(*cert.failure)}, {"message", cert.message}};
    return out;
}

json model_json(const RunConfig& cfg) {
    const Model& m = cfg.model;
    return {{"degrees", {m.d(1), m.d(2)}},
            {"k", {m.k(1), m.k(2)}},
            {"k0", m.k0()},
            {"epsilon", rational_json(m.perturbation().amplitude.re())},
            {"perturbation_terms", m.perturbation().terms.size()},
            {"c", {complex_json(cfg.c1), complex_json(cfg.c2)}}};
}

// Files written from floating-point discs carry non-integral JSON numbers.
bool has_float_coefficients(const json& disc_file) {
    const auto it = disc_file.find("components");
    if (it == disc_file.end()) return false;
    for (const auto& comp : *it)
        for (const auto& term : comp)
            for (const auto& v : term)
                if (v.is_number_float() && v.get<double>() != std::floor(v.get<double>())) return true;
    return false;
}

json header(const std::string& command) {
    return {{"schema_version", kReportSchemaVersion}, {"command", command}};
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) bad("config", "expected an object");
    const json& model = require(j, "model", "config");
    HomogPoly p1 = parse_poly(require(model, "P1", "model"), "model.P1");
    HomogPoly p2 = parse_poly(require(model, "P2", "model"), "model.P2");
    const json& lift = require(j, "lift", "config");
    const GaussRational c1(as_rational(require(lift, "c1", "lift"), "lift.c1"));
    const GaussRational c2(as_rational(require(lift, "c2", "lift"), "lift.c2"));
    if (c1.is_zero() && c2.is_zero()) throw Error(ErrorKind::DegenerateLift, "lift.c1, lift.c2: both multipliers vanish");

    RunConfig cfg{Model(std::move(p1), std::move(p2), parse_perturbation(optional(j, "perturbation", "config"))), c1, c2,
                  {}, 1e-9, true, {}};

    if (const json* s = optional(j, "solver", "config")) {
        const std::string w = "solver";
        if (const json* v = optional(*s, "n_modes", w)) cfg.solver.n_modes = as_int(*v, w + ".n_modes");
        if (const json* v = optional(*s, "tol", w)) cfg.solver.tol = as_double(*v, w + ".tol");
        if (const json* v = optional(*s, "max_iter", w)) cfg.solver.max_iter = as_int(*v, w + ".max_iter");
        if (const json* v = optional(*s, "min_step", w)) cfg.solver.min_step = as_double(*v, w + ".min_step");
        if (const json* v = optional(*s, "verify_tol", w)) cfg.verify_tol = as_double(*v, w + ".verify_tol");
        if (const json* v = optional(*s, "full_indices", w)) {
            if (!v->is_boolean()) bad(w + ".full_indices", "expected true or false");
            cfg.full_indices = v->get<bool>();
        }
        if (cfg.solver.n_modes < 0) bad(w + ".n_modes", "must be >= 0 (0 picks the default)");
        if (cfg.solver.tol <= 0) bad(w + ".tol", "must be positive");
        if (cfg.solver.max_iter <= 0) bad(w + ".max_iter", "must be positive");
        if (cfg.solver.min_step <= 0) bad(w + ".min_step", "must be positive");
        if (cfg.verify_tol <= 0) bad(w + ".verify_tol", "must be positive");
    }
    if (const json* o = optional(j, "output", "config")) {
        const std::string w = "output";
        auto text = [&](const char* key) -> std::optional<std::string> {
            const json* v = optional(*o, key, w);
            if (!v) return std::nullopt;
            if (!v->is_string()) bad(w + "." + key, "expected a path");
            return v->get<std::string>();
        };
        cfg.output.report = text("report");
        cfg.output.disc = text("disc");
        cfg.output.trace_csv = text("trace_csv");
        if (const json* v = optional(*o, "verbosity", w)) cfg.output.verbosity = as_int(*v, w + ".verbosity");
    }
    return cfg;
}

json load_json(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Validation, what + ": cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Validation, what + ": " + e.what());
    }
}

RunConfig load_config(const std::string& path) { return parse_config(load_json(path, "config")); }

json cmd_analyze(const RunConfig& cfg) {
    const Model base = cfg.model.pure();
    const ExactDisc f0 = cfg.initial();
    json out = header("analyze");
    out["model"] = model_json(cfg);

    const auto cert = certify(base, f0, cfg.verify_tol);
    out["conormal"] = {{"k0", base.k0()},
                       {"equations", 8},
                       {"initial_lift_exact_zero", cert.exact_checked && cert.exact_zero},
                       {"initial_lift_orders", cert.orders},
                       {"required_orders", required_orders(base)}};

    const IndexReport rep = analyze_indices(base, f0, cfg.full_indices);
    json qs = json::array();
    for (int l = 0; l < 2; ++l) {
        const auto& b = rep.qs.blocks[static_cast<size_t>(l)];
        qs.push_back({{"Q", b.Q.str()},
                      {"S", b.S.str()},
                      {"Q_certificate", {{"degree_bound", b.q_degree_bound}, {"divisor_power", b.q_divisor_power}}},
                      {"S_certificate", {{"degree_bound", b.s_degree_bound}, {"divisor_power", b.s_divisor_power}}},
                      {"index", rep.q_indices[static_cast<size_t>(l)]}});
    }
    out["qs"] = qs;
    json idx;
    idx["g2_blocks"] = rep.block_indices;
    idx["g2"] = rep.partial_indices;
    if (cfg.full_indices) idx["full"] = rep.full_indices;
    idx["method"] = to_string(rep.method);
    out["partial_indices"] = idx;
    out["maslov"] = rep.maslov;
    out["g2_det_winding"] = rep.g2_det_winding;
    out["index_formula"] = {{"q_indices", rep.q_indices}, {"value", rep.formula_maslov}, {"holds", rep.formula_maslov == rep.maslov}};
    out["theta_bounds"] = {{"bounds", rep.theta_bounds}, {"hold", rep.theta_bounds_hold}};
    out["surjectivity"] = {{"surjective", rep.surjectivity.surjective}, {"thresholds", rep.surjectivity.thresholds}};
    out["kernel_dim"] = rep.kernel_dim;
    out["formula_kernel_dim"] = rep.formula_kernel_dim;
    out["status"] = "ok";
    return out;
}

json cmd_verify(const RunConfig& cfg, const json& disc_file) {
    const ExactDisc disc = disc_from_json(disc_file);
    json out = header("verify");
    out["model"] = model_json(cfg);
    // Exact first; a disc computed in floating point only has to hold to tolerance.
    auto cert = certify(cfg.model, disc, cfg.verify_tol);
    bool exact = true;
    if (!cert.valid() && has_float_coefficients(disc_file)) {
        cert = certify(cfg.model, disc.to_float(), cfg.verify_tol);
        exact = false;
    }
    out["arithmetic"] = exact ? "exact" : "float";
    out["certificate"] = certificate_json(cert, cfg.model);
    out["status"] = cert.valid() ? "PASS" : "FAIL";
    if (cert.failure) out["error"] = {{"kind", to_string(*cert.failure)}, {"message", cert.message}};
    return out;
}

json cmd_solve(const RunConfig& cfg, unsigned long seed, SolveResult* result) {
    json out = header("solve");
    out["model"] = model_json(cfg);
    out["seed"] = seed;
    out["options"] = {{"n_modes", cfg.solver.n_modes},
                      {"tol", cfg.solver.tol},
                      {"max_iter", cfg.solver.max_iter},
                      {"min_step", cfg.solver.min_step}};
    const ExactDisc f0 = cfg.initial();
    SolveResult r = solve(cfg.model, f0, cfg.solver);
    out["identity_continuation"] = r.trace.empty();
    out["epsilon"] = r.epsilon;
    out["n_modes"] = r.n_modes;
    out["residual"] = r.residual;
    out["refined_residual"] = r.refined_residual;
    out["distance"] = r.distance;
    out["kernel_dim"] = r.kernel_dim;
    out["newton_steps"] = r.newton_steps;
    json trace = json::array();
    for (const auto& s : r.trace)
        trace.push_back({{"epsilon", s.epsilon}, {"iterations", s.iterations}, {"residual", s.residual}, {"accepted", s.accepted}});
    out["trace"] = trace;
    const auto cert = certify(cfg.model, r.disc, cfg.verify_tol);
    out["certificate"] = certificate_json(cert, cfg.model);
    out["status"] = cert.valid() ? "ok" : "FAIL";
    if (cert.failure) out["error"] = {{"kind", to_string(*cert.failure)}, {"message", cert.message}};
    if (result) *result = std::move(r);
    return out;
}

json cmd_export_initial(const RunConfig& cfg) { return disc_to_json(cfg.initial()); }

json error_report(const std::string& command, ErrorKind kind, const std::string& message) {
    json out = header(command);
    out["status"] = "error";
    out["error"] = {{"kind", to_string(kind)}, {"message", message}, {"exit_code", exit_code(kind)}};
    return out;
}

int report_exit_code(const json& report) {
    auto it = report.find("error");
    if (it == report.end()) return 0;
    const std::string kind = it->value("kind", "");
    for (int k = 0; k <= static_cast<int>(ErrorKind::Internal); ++k)
        if (kind == to_string(static_cast<ErrorKind>(k))) return exit_code(static_cast<ErrorKind>(k));
    return exit_code(ErrorKind::Internal);
}

}  // namespace statdisc
