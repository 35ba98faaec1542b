#include <doctest.h>

#include "statdisc/cli.hpp"

using namespace statdisc;
using nlohmann::json;

namespace {

json toy_config() {
    return json::parse(R"({
      "model": {"P1": {"degree": 4, "k": 2, "coefficients": [[2, 1, 0]]},
                "P2": {"degree": 6, "k": 3, "coefficients": [[3, 1, 0]]}},
      "lift": {"c1": "1/2", "c2": "1/3"}
    })");
}

std::string validation_message(const json& cfg) {
    try {
        (void)parse_config(cfg);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config errors name the field") {
    json c = toy_config();
    c["model"]["P1"]["k"] = 1;
    CHECK(validation_message(c).find("model.P1.k") != std::string::npos);

    c = toy_config();
    c["model"]["P2"]["coefficients"][0][1] = "one";
    CHECK(validation_message(c).find("model.P2.coefficients[0][1]") != std::string::npos);

    c = toy_config();
    c["lift"].erase("c2");
    CHECK(validation_message(c).find("lift.c2: missing") != std::string::npos);

    c = toy_config();
    c["solver"] = {{"tol", -1.0}};
    CHECK(validation_message(c).find("solver.tol") != std::string::npos);

    c = toy_config();
    c["perturbation"] = json::parse(R"({"epsilon": "1/100", "terms": [{"ell": 1, "z": [1, 0]}]})");
    CHECK(validation_message(c).find("perturbation.terms[0]") != std::string::npos);

    c = toy_config();
    c["model"]["P1"] = json::parse(R"({"degree": 2, "k": 1, "coefficients": [[2, 1, 0], [0, 1, 0]]})");
    try {
        (void)parse_config(c);
        FAIL("harmonic P accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularSymbol);
        CHECK(std::string(e.what()).find("Laplacian hypothesis violated") != std::string::npos);
        CHECK(exit_code(e.kind()) == 3);
    }
}

TEST_CASE("analyze reports the toy integers in one run") {
    const json r = cmd_analyze(parse_config(toy_config()));
    CHECK(r["schema_version"] == kReportSchemaVersion);
    CHECK(r["partial_indices"]["g2"] == json({4, 4, 5, 5}));
    CHECK(r["maslov"] == 30);
    CHECK(r["kernel_dim"] == 20);
    CHECK(r["g2_det_winding"] == 18);
    CHECK(r["index_formula"]["value"] == 30);
    CHECK(r["surjectivity"]["surjective"] == true);
    CHECK(r["conormal"]["initial_lift_exact_zero"] == true);
    CHECK(report_exit_code(r) == 0);
}

TEST_CASE("verify round-trips the exported lift and names failures") {
    const RunConfig cfg = parse_config(toy_config());
    const json disc = json::parse(cmd_export_initial(cfg).dump());
    const json ok = cmd_verify(cfg, disc);
    CHECK(ok["status"] == "PASS");
    CHECK(ok["arithmetic"] == "exact");
    CHECK(ok["certificate"]["c"][0]["exact"] == "1/2");
    CHECK(ok["certificate"]["c"][1]["exact"] == "1/3");
    CHECK(report_exit_code(ok) == 0);

    json scaled = disc;
    for (auto& term : scaled["components"][0]) term[1] = 1.25 * term[1].get<double>();
    const json bad = cmd_verify(cfg, scaled);
    CHECK(bad["status"] == "FAIL");
    CHECK(bad["error"]["kind"] == "NotAttached");
    CHECK(bad["error"]["message"].get<std::string>().find("equation 1") != std::string::npos);
    CHECK(report_exit_code(bad) == 1);

    json unordered = disc;
    unordered["components"][4].push_back({1, 1, 0});
    const json y = cmd_verify(cfg, unordered);
    CHECK(y["error"]["kind"] == "YStructure");
    CHECK(y["error"]["message"].get<std::string>().find("order d1-1") != std::string::npos);
}

TEST_CASE("solve at zero amplitude is the identity continuation") {
    json c = toy_config();
    c["perturbation"] = json::parse(R"({"epsilon": 0, "terms": [{"ell": 1, "z": [5, 0]}]})");
    c["solver"] = {{"n_modes", 16}};
    const RunConfig cfg = parse_config(c);
    SolveResult r;
    const json rep = cmd_solve(cfg, 9, &r);
    CHECK(rep["identity_continuation"] == true);
    CHECK(rep["newton_steps"] == 0);
    CHECK(rep["seed"] == 9);
    CHECK(r.disc == cfg.initial().to_float());
    CHECK(report_exit_code(rep) == 0);
}

TEST_CASE("solve report is reproducible") {
    json c = toy_config();
    c["perturbation"] = json::parse(R"({"epsilon": "0.001", "terms": [{"ell": 1, "z": [5, 0]}]})");
    c["solver"] = {{"n_modes", 16}};
    const RunConfig cfg = parse_config(c);
    const json a = cmd_solve(cfg, 1), b = cmd_solve(cfg, 1);
    CHECK(a == b);
    CHECK(a["status"] == "ok");
    CHECK(a["epsilon"] == 0.001);
    CHECK(a["refined_residual"].get<double>() < 1e-10);
}

TEST_CASE("error reports carry the exit code") {
    const json r = error_report("solve", ErrorKind::StepCollapse, "stalled");
    CHECK(r["status"] == "error");
    CHECK(r["error"]["exit_code"] == 4);
    CHECK(report_exit_code(r) == 4);
    CHECK(report_exit_code(error_report("analyze", ErrorKind::Internal, "x")) == 5);
}
