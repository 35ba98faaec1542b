#pragma once

// Run configuration and the report-producing commands behind the statdisc tool.

#include <optional>
#include <string>

#include <json.hpp>

#include "statdisc/errors.hpp"
#include "statdisc/lift.hpp"
#include "statdisc/rh_solver.hpp"

namespace statdisc {

inline constexpr int kReportSchemaVersion = 1;

struct OutputOptions {
    std::optional<std::string> report;     // defaults to stdout
    std::optional<std::string> disc;       // solution disc written by solve
    std::optional<std::string> trace_csv;  // continuation trace written by solve
    int verbosity = 0;
};

/// Config file layout (JSON):
///   model:        {P1: {degree, k, coefficients: [[j, re, im], ...]}, P2: {...}}
///   lift:         {c1, c2}
///   perturbation: {epsilon, terms: [{ell, z: [a, b], zbar: [a, b], imw: [a, b], coeff: [re, im]}]}
///   solver:       {n_modes, tol, max_iter, min_step, verify_tol, full_indices}
///   output:       {report, disc, trace_csv, verbosity}
/// Numbers may be JSON numbers, decimal strings or "p/q" strings; the latter
/// two are read exactly.
struct RunConfig {
    Model model;
    GaussRational c1, c2;
    SolveOptions solver;
    double verify_tol = 1e-9;
    bool full_indices = true;
    OutputOptions output;

    /// The lift of the unperturbed model.
    ExactDisc initial() const { return initial_lift(model.pure(), c1, c2); }
};

/// Throws Validation with the offending field path.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

nlohmann::json load_json(const std::string& path, const std::string& what);

nlohmann::json cmd_analyze(const RunConfig& cfg);
/// Never throws for certificate failures; they are reported with status FAIL.
/// Checked exactly first; files holding floating-point coefficients fall back
/// to a tolerance check when the exact one fails.
nlohmann::json cmd_verify(const RunConfig& cfg, const nlohmann::json& disc_file);
/// `result` receives the solver output when given.
nlohmann::json cmd_solve(const RunConfig& cfg, unsigned long seed, SolveResult* result = nullptr);
nlohmann::json cmd_export_initial(const RunConfig& cfg);

nlohmann::json error_report(const std::string& command, ErrorKind kind, const std::string& message);

/// Exit status for a finished report: 0 unless it carries an error or a failed certificate.
int report_exit_code(const nlohmann::json& report);

}  // namespace statdisc
