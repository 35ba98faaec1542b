// statdisc: analyze, verify, solve and export stationary lifts from a JSON config.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "statdisc/cli.hpp"

using namespace statdisc;

namespace {

void emit(const nlohmann::json& report, const std::string& out) {
    if (out.empty()) {
        std::cout << report.dump(2) << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw Error(ErrorKind::Validation, "--out: cannot write " + out);
    f << report.dump(2) << '\n';
}

void write_disc(const FloatDisc& disc, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::Validation, "output.disc: cannot write " + path);
    f << disc_to_json(disc).dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stationary lifts of quadric-type model hypersurfaces in C^4"};
    app.require_subcommand(1);

    std::string config, out, disc_path, trace_path;
    unsigned long seed = 0;

    auto* analyze = app.add_subcommand("analyze", "Partial indices, Maslov index and kernel dimension at the initial lift");
    auto* verify = app.add_subcommand("verify", "Check a disc file against the conormal equations");
    auto* solve_cmd = app.add_subcommand("solve", "Continue the initial lift to the perturbed model");
    auto* export_cmd = app.add_subcommand("export-initial", "Write the initial lift as a disc file");
    for (auto* sub : {analyze, verify, solve_cmd, export_cmd}) {
        sub->add_option("--config", config, "JSON run configuration")->required();
        sub->add_option("--out", out, "Report path (default: stdout)");
    }
    verify->add_option("--disc", disc_path, "Disc file to check")->required();
    solve_cmd->add_option("--seed", seed, "Recorded in the report; the solver itself is deterministic");
    solve_cmd->add_option("--disc-out", disc_path, "Where to write the solution disc (overrides output.disc)");
    solve_cmd->add_option("--trace", trace_path, "Continuation trace CSV (overrides output.trace_csv)");

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const RunConfig cfg = load_config(config);
        if (out.empty() && cfg.output.report) out = *cfg.output.report;
        nlohmann::json report;
        if (command == "analyze") {
            report = cmd_analyze(cfg);
        } else if (command == "verify") {
            report = cmd_verify(cfg, load_json(disc_path, "disc"));
        } else if (command == "solve") {
            SolveResult result;
            report = cmd_solve(cfg, seed, &result);
            if (disc_path.empty() && cfg.output.disc) disc_path = *cfg.output.disc;
            if (trace_path.empty() && cfg.output.trace_csv) trace_path = *cfg.output.trace_csv;
            if (!disc_path.empty()) {
                write_disc(result.disc, disc_path);
                report["disc_file"] = disc_path;
            }
            if (!trace_path.empty()) {
                std::ofstream csv(trace_path);
                if (!csv) throw Error(ErrorKind::Validation, "output.trace_csv: cannot write " + trace_path);
                write_trace_csv(csv, result);
            }
        } else {
            report = cmd_export_initial(cfg);
        }
        emit(report, out);
        if (cfg.output.verbosity > 0 && !out.empty()) std::cerr << command << ": " << report.value("status", "ok") << '\n';
        return report_exit_code(report);
    } catch (const Error& e) {
        const auto report = error_report(command, e.kind(), e.what());
        try {
            emit(report, out);
        } catch (const Error&) {
            std::cout << report.dump(2) << '\n';
        }
        std::cerr << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return exit_code(ErrorKind::Internal);
    }
}
