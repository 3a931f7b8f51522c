#include "swreg/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "swreg/acceptance.hpp"
#include "swreg/lmi.hpp"
#include "swreg/regulator.hpp"
#include "swreg/report.hpp"
#include "swreg/simulation.hpp"
#include "swreg/system_model.hpp"

namespace swreg {

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitMathFailure = 1;
constexpr int kExitInputError = 2;

double default_residual_tol() {
    if (const char* env = std::getenv("SWREG_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0.0)
            return v;
        throw InputError("SWREG_TOL must be a positive number");
    }
    return 1e-8;
}

Mat load_q_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open Q file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw InputError(std::string("Q file: parse error: ") + e.what());
    }
    if (!j.contains("Q") || !j["Q"].is_array())
        throw InputError("Q file: expected object with matrix field 'Q'");
    const auto& jm = j["Q"];
    if (jm.empty() || !jm[0].is_array())
        throw InputError("Q file: 'Q' must be a matrix");
    Mat Q(jm.size(), jm[0].size());
    for (std::size_t r = 0; r < jm.size(); ++r) {
        if (jm[r].size() != jm[0].size())
            throw InputError("Q file: ragged rows");
        for (std::size_t c = 0; c < jm[r].size(); ++c)
            Q(r, c) = jm[r][c].get<double>();
    }
    return Q;
}

int cmd_check_stability(const std::string& problem_path, const std::string& q_path,
                        double epsilon) {
    auto [plant, exo] = load_problem(problem_path);
    std::vector<Mat> A_list;
    for (const auto& md : plant.modes)
        A_list.push_back(md.A);

    if (!q_path.empty()) {
        auto v = verify_common_lyapunov(load_q_file(q_path), A_list);
        std::cout << "common Lyapunov verification: "
                  << (v.accepted ? "accepted" : "rejected") << "\n";
        std::cout << "  lambda_min(Q) = " << fmt5(v.certificate.lambda_min_Q) << "\n";
        for (std::size_t i = 0; i < v.certificate.margins.size(); ++i)
            std::cout << "  mode " << (i + 1) << ": lambda_max(A'QA - Q) = "
                      << fmt5(v.certificate.margins[i]) << "\n";
        if (!v.accepted)
            std::cout << "  reason: " << v.reason << "\n";
        return v.accepted ? kExitOk : kExitMathFailure;
    }

    SolveOptions opts;
    opts.epsilon = epsilon;
    auto res = solve_common_lyapunov(A_list, opts);
    if (!res.feasible) {
        std::cout << "analysis LMI infeasible (best violation "
                  << fmt5(res.best_violation) << " after " << res.iterations
                  << " iterations)\n";
        return kExitMathFailure;
    }
    std::cout << "analysis LMI feasible after " << res.iterations << " iterations\n";
    std::cout << "  lambda_min(Q) = " << fmt5(res.certificate.lambda_min_Q) << "\n";
    for (std::size_t i = 0; i < res.certificate.margins.size(); ++i)
        std::cout << "  mode " << (i + 1) << ": lambda_max(A'QA - Q) = "
                  << fmt5(res.certificate.margins[i]) << "\n";
    return kExitOk;
}

json report_to_json(const SynthesisReport& report, const CertificationReport* cert) {
    json j;
    j["stages"] = json::array();
    for (const auto& s : report.stages)
        j["stages"].push_back({{"name", s.name}, {"passed", s.passed},
                               {"detail", s.detail}});
    j["vstar_dim"] = report.vstar_dim;
    j["condition_i"] = report.condition_i;
    j["francis_residual"] = report.francis_residual;
    if (cert) {
        j["certification"] = json::array();
        for (const auto& c : cert->checks)
            j["certification"].push_back({{"name", c.name}, {"passed", c.passed},
                                          {"worst", c.worst}, {"detail", c.detail}});
    }
    return j;
}

int cmd_synthesize(const std::string& problem_path, const std::string& out_path,
                   double epsilon, double residual_tol, bool force_feedback) {
    auto [plant, exo] = load_problem(problem_path);
    SynthesisOptions opts;
    opts.epsilon = epsilon;
    opts.residual_tol = residual_tol;
    opts.force_feedback_synthesis = force_feedback;

    auto outcome = synthesize(plant, exo, opts);
    for (const auto& s : outcome.report.stages)
        std::cout << (s.passed ? "  ok   " : "  FAIL ") << s.name << ": " << s.detail
                  << "\n";
    std::cout << "dim V*_R = " << outcome.report.vstar_dim << ", condition (i) "
              << (outcome.report.condition_i ? "satisfied" : "violated")
              << ", Francis residual " << fmt5(outcome.report.francis_residual) << "\n";
    if (!outcome.ok()) {
        std::cout << "synthesis failed at stage: " << outcome.failed_stage << "\n";
        return kExitMathFailure;
    }

    const auto& reg = *outcome.regulator;
    auto cert = certify(reg, plant, exo);
    for (const auto& c : cert.checks)
        std::cout << (c.passed ? "  ok   " : "  FAIL ") << "certify/" << c.name << ": "
                  << c.detail << " = " << fmt5(c.worst) << "\n";
    if (!cert.accepted) {
        std::cout << "certification rejected\n";
        return kExitMathFailure;
    }
    std::cout << "innovation margins:";
    for (double m : reg.innovation_certificate.margins)
        std::cout << " " << fmt5(m);
    std::cout << "\nplant-loop margins:";
    for (double m : reg.plant_loop_certificate.margins)
        std::cout << " " << fmt5(m);
    std::cout << "\n";

    if (!out_path.empty()) {
        json j = json::parse(serialize_regulator(reg));
        j["report"] = report_to_json(outcome.report, &cert);
        std::ofstream out(out_path);
        if (!out)
            throw InputError("cannot write regulator file: " + out_path);
        out << j.dump(2) << "\n";
        std::cout << "regulator written to " << out_path << "\n";
    }
    return kExitOk;
}

int cmd_simulate(const std::string& problem_path, const std::string& regulator_path,
                 const std::string& signal_text, int horizon, std::uint64_t seed,
                 const std::string& csv_path, const std::string& svg_path) {
    auto [plant, exo] = load_problem(problem_path);
    auto reg = load_regulator(regulator_path);

    SimulationConfig cfg;
    cfg.horizon = horizon;
    cfg.signal = signal_text.empty() ? SwitchingSignal::constant(1, horizon)
                                     : SwitchingSignal::parse(signal_text);
    cfg.seed = seed;
    cfg.sampling_time = plant.sampling_time;

    auto trace = simulate(plant, exo, reg.modes, cfg);
    auto metrics = error_metrics(trace);
    std::cout << "simulated " << trace.horizon() << " steps (" <<
        fmt5(trace.horizon() * plant.sampling_time) << " s), seed " << seed << "\n";
    std::cout << format_error_metrics(metrics, plant.sampling_time);

    if (!csv_path.empty()) {
        write_trace_csv(trace, csv_path);
        std::cout << "trace written to " << csv_path << "\n";
    }
    if (!svg_path.empty()) {
        write_error_chart_svg(trace, svg_path);
        std::cout << "chart written to " << svg_path << "\n";
    }
    return kExitOk;
}

int cmd_reproduce_paper() {
    auto results = run_acceptance();
    std::cout << format_acceptance_table(results);
    for (const auto& r : results)
        if (!r.passed)
            return kExitMathFailure;
    return kExitOk;
}

}  // namespace

namespace {

int run_cli_inner(const std::vector<std::string>& args) {
    CLI::App app{"Output regulator synthesis for discrete-time linear switching "
                 "systems: subspace algorithms, LMI certificates, Francis "
                 "equations, observer-based regulators, closed-loop simulation."};
    app.require_subcommand(1);

    std::string problem_path, q_path, out_path, regulator_path;
    std::string signal_text, csv_path, svg_path;
    double epsilon = 1e-6;
    double residual_tol = default_residual_tol();
    bool force_feedback = false;
    int horizon = 100;
    std::uint64_t seed = 1;

    auto* check = app.add_subcommand(
        "check-stability", "Verify or synthesize a common Lyapunov certificate");
    check->add_option("problem", problem_path, "problem file (JSON)")->required();
    check->add_option("--q-file", q_path, "verify this Q instead of solving the LMI");
    check->add_option("--epsilon", epsilon, "LMI strictness margin");

    auto* synth = app.add_subcommand("synthesize", "Run the full regulator pipeline");
    synth->add_option("problem", problem_path, "problem file (JSON)")->required();
    synth->add_option("-o,--output", out_path, "regulator output file");
    synth->add_option("--epsilon", epsilon, "LMI strictness margin");
    synth->add_option("--tol", residual_tol,
                      "geometric residual tolerance (env SWREG_TOL overrides the default)");
    synth->add_flag("--force-feedback-synthesis", force_feedback,
                    "synthesize state feedbacks even when the open-loop plant verifies");

    auto* sim = app.add_subcommand("simulate", "Simulate the closed loop");
    sim->add_option("problem", problem_path, "problem file (JSON)")->required();
    sim->add_option("regulator", regulator_path, "regulator file (JSON)")->required();
    sim->add_option("--signal", signal_text, "switching signal, e.g. 1:0-29,2:30-69,1:70-99");
    sim->add_option("--horizon", horizon, "number of steps");
    sim->add_option("--seed", seed, "seed for the default random w0");
    sim->add_option("--csv", csv_path, "write the trace CSV here");
    sim->add_option("--svg", svg_path, "write the error chart here");

    auto* repro = app.add_subcommand(
        "reproduce-paper", "Run the bundled-example verification suite");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    if (check->parsed())
        return cmd_check_stability(problem_path, q_path, epsilon);
    if (synth->parsed())
        return cmd_synthesize(problem_path, out_path, epsilon, residual_tol,
                              force_feedback);
    if (sim->parsed())
        return cmd_simulate(problem_path, regulator_path, signal_text, horizon,
                            seed, csv_path, svg_path);
    if (repro->parsed())
        return cmd_reproduce_paper();
    return kExitInputError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        return run_cli_inner(args);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace swreg
