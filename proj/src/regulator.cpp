#include "swreg/regulator.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace swreg {

namespace {

using nlohmann::json;

json matrix_to_json(const Mat& M) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < M.cols(); ++c)
            row.push_back(M(r, c));
        rows.push_back(row);
    }
    return rows;
}

Mat matrix_from_json(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw InputError(where + ": expected a matrix");
    Mat M(j.size(), j[0].size());
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != j[0].size())
            throw InputError(where + ": ragged rows");
        for (std::size_t c = 0; c < j[r].size(); ++c)
            M(r, c) = j[r][c].get<double>();
    }
    return M;
}

}  // namespace

const StageResult* SynthesisReport::find(const std::string& name) const {
    for (const auto& s : stages)
        if (s.name == name)
            return &s;
    return nullptr;
}

SynthesisOutcome synthesize(const SwitchingPlant& plant, const Exosystem& exo,
                            const SynthesisOptions& options) {
    SynthesisOutcome out;
    auto fail = [&](const std::string& stage, const std::string& detail) {
        out.report.stages.push_back({stage, false, detail});
        out.failed_stage = stage;
        return out;
    };
    auto pass = [&](const std::string& stage, const std::string& detail) {
        out.report.stages.push_back({stage, true, detail});
    };

    SolveOptions lmi_opts = options.lmi;
    lmi_opts.epsilon = options.epsilon;

    // Malformed problems throw InputError out of here; synthesis failures
    // below are reported as staged results instead.
    ExtendedSystem sys = build_extended(plant, exo);
    pass("extended-system", "n+q = " + std::to_string(sys.state_dim()));

    const int N = plant.num_modes();
    const int n = plant.state_dim();
    const int m = plant.input_dim();

    // Stage: plant quadratic stability / stabilization.
    std::vector<Mat> F1(N, Mat::Zero(m, n));
    LyapunovCertificate plant_cert;
    {
        std::vector<Mat> A_list;
        for (const auto& md : plant.modes)
            A_list.push_back(md.A);
        bool settled = false;
        if (!options.force_feedback_synthesis) {
            auto analysis = solve_common_lyapunov(A_list, lmi_opts);
            if (analysis.feasible) {
                plant_cert = std::move(analysis.certificate);
                pass("plant-stability",
                     "open-loop common Lyapunov function found, F1 = 0");
                settled = true;
            }
        }
        if (!settled) {
            std::vector<std::pair<Mat, Mat>> ab;
            for (const auto& md : plant.modes)
                ab.emplace_back(md.A, md.B);
            auto fb = synth_state_feedback(ab, lmi_opts);
            if (!fb.feasible)
                return fail("plant-stability",
                            "state-feedback LMI infeasible (best violation " +
                                std::to_string(fb.best_violation) + ")");
            F1 = std::move(fb.F);
            plant_cert = std::move(fb.certificate);
            pass("plant-stability", "stabilizing state feedbacks synthesized");
        }
    }

    // Stage: output-injection synthesis on the extended system.
    OutputInjectionResult inj;
    {
        std::vector<std::pair<Mat, Mat>> ac;
        for (const auto& md : sys.modes)
            ac.emplace_back(md.Ae, md.Ce);
        inj = synth_output_injection(ac, lmi_opts);
        if (!inj.feasible)
            return fail("output-injection",
                        "output-injection LMI infeasible (best violation " +
                            std::to_string(inj.best_violation) + ")");
        pass("output-injection", "common Lyapunov P with per-mode injections found");
    }

    // Stage: maximal robust controlled invariant subspace.
    VstarOptions vopts;
    vopts.rank_policy = options.rank_policy;
    VstarResult vstar = max_robust_controlled_invariant(sys, vopts);
    out.report.vstar_dim = vstar.subspace.dim();
    pass("vstar", "dim V* = " + std::to_string(vstar.subspace.dim()));

    // Stage: condition (i).
    out.report.condition_i = check_condition_i(vstar.subspace, n, options.rank_policy);
    if (!out.report.condition_i)
        return fail("condition-i",
                    "V* + plant axes spans only " +
                        std::to_string(sum(vstar.subspace,
                                           image(Mat::Identity(sys.state_dim(), n)
                                                     .eval(),
                                                 options.rank_policy),
                                           options.rank_policy)
                                           .dim()) +
                        " of " + std::to_string(sys.state_dim()) + " dimensions");
    pass("condition-i", "V* + P covers the extended space");

    // Stage: Francis equations.
    FrancisSolution francis = solve_francis(plant, exo, options.residual_tol);
    out.report.francis_residual = francis.residual;
    if (!francis.solvable)
        return fail("francis", "residual " + std::to_string(francis.residual) +
                                   " exceeds " + std::to_string(options.residual_tol));
    pass("francis", "residual " + std::to_string(francis.residual));

    // Stage: friend assembly (identity construction; residual is a sanity check).
    FriendSet friends = assemble_friend_feedback(sys, francis, F1);
    for (double r : friends.residuals)
        if (r > options.residual_tol)
            return fail("friend-assembly",
                        "invariance residual " + std::to_string(r));
    pass("friend-assembly", "friendship residuals within tolerance");

    RegulatorRealization reg;
    reg.plant_dim = n;
    reg.exo_dim = sys.exo_dim;
    reg.friends = std::move(friends);
    reg.francis = std::move(francis);
    reg.F1 = std::move(F1);
    reg.P_innovation = inj.P;
    reg.G = inj.G;
    reg.innovation_certificate = std::move(inj.certificate);
    reg.plant_loop_certificate = std::move(plant_cert);
    for (int i = 0; i < N; ++i) {
        RegulatorMode md;
        md.Fr = reg.friends.F[i];
        md.Ar = sys.modes[i].Ae + sys.modes[i].Be * md.Fr + reg.G[i] * sys.modes[i].Ce;
        md.Br = -reg.G[i];
        reg.modes.push_back(std::move(md));
    }
    pass("assembly", "regulator realized");
    out.regulator = std::move(reg);
    return out;
}

CertificationReport certify(const RegulatorRealization& reg,
                            const SwitchingPlant& plant, const Exosystem& exo) {
    CertificationReport rep;
    ExtendedSystem sys = build_extended(plant, exo);
    require(sys.state_dim() == reg.state_dim(), "certify: dimension mismatch");
    const Mat& Vb = reg.friends.V.basis();

    // (a) friendship: (Ae + Be F) V stays within V.
    {
        CertificationCheck c{"friendship", true, 0.0, ""};
        for (std::size_t i = 0; i < sys.modes.size(); ++i) {
            Mat closed = (sys.modes[i].Ae + sys.modes[i].Be * reg.modes[i].Fr) * Vb;
            double r = (closed - Vb * (Vb.transpose() * closed)).norm();
            c.worst = std::max(c.worst, r);
        }
        c.passed = c.worst <= 1e-8;
        c.detail = "max invariance residual";
        rep.checks.push_back(std::move(c));
    }

    // (b) output nulling: Ce annihilates V.
    {
        CertificationCheck c{"output-nulling", true, 0.0, "max |Ce V|"};
        for (const auto& md : sys.modes)
            c.worst = std::max(c.worst, (md.Ce * Vb).cwiseAbs().maxCoeff());
        c.passed = c.worst <= 1e-6;
        rep.checks.push_back(std::move(c));
    }

    // (c) innovation loops share the stored Lyapunov matrix.
    {
        CertificationCheck c{"innovation-stability", false, 0.0,
                             "worst lambda_max(A'PA - P)"};
        std::vector<Mat> loops;
        for (std::size_t i = 0; i < sys.modes.size(); ++i)
            loops.push_back(sys.modes[i].Ae + reg.G[i] * sys.modes[i].Ce);
        auto v = verify_common_lyapunov(reg.P_innovation, loops, 0.0);
        c.passed = v.accepted;
        c.worst = v.certificate.margins.empty()
                      ? 0.0
                      : *std::max_element(v.certificate.margins.begin(),
                                          v.certificate.margins.end());
        rep.checks.push_back(std::move(c));
    }

    // (d) plant loops share the stored Lyapunov matrix.
    {
        CertificationCheck c{"plant-loop-stability", false, 0.0,
                             "worst lambda_max(A'QA - Q)"};
        std::vector<Mat> loops;
        for (int i = 0; i < plant.num_modes(); ++i)
            loops.push_back(plant.modes[i].A + plant.modes[i].B * reg.F1[i]);
        auto v = verify_common_lyapunov(reg.plant_loop_certificate.Q, loops, 0.0);
        c.passed = v.accepted;
        c.worst = v.certificate.margins.empty()
                      ? 0.0
                      : *std::max_element(v.certificate.margins.begin(),
                                          v.certificate.margins.end());
        rep.checks.push_back(std::move(c));
    }

    rep.accepted = true;
    for (const auto& c : rep.checks)
        rep.accepted = rep.accepted && c.passed;
    return rep;
}

std::string serialize_regulator(const RegulatorRealization& reg) {
    json j;
    j["plant_dim"] = reg.plant_dim;
    j["exo_dim"] = reg.exo_dim;
    j["modes"] = json::array();
    for (const auto& md : reg.modes)
        j["modes"].push_back({{"Ar", matrix_to_json(md.Ar)},
                              {"Br", matrix_to_json(md.Br)},
                              {"Fr", matrix_to_json(md.Fr)}});
    j["certificates"] = {
        {"innovation",
         {{"P", matrix_to_json(reg.P_innovation)},
          {"lambda_min", reg.innovation_certificate.lambda_min_Q},
          {"margins", reg.innovation_certificate.margins}}},
        {"plant_loop",
         {{"Q", matrix_to_json(reg.plant_loop_certificate.Q)},
          {"lambda_min", reg.plant_loop_certificate.lambda_min_Q},
          {"margins", reg.plant_loop_certificate.margins}}}};
    return j.dump(2) + "\n";
}

void save_regulator(const RegulatorRealization& reg, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write regulator file: " + path);
    out << serialize_regulator(reg);
}

LoadedRegulator load_regulator(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open regulator file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw InputError(std::string("regulator file: parse error: ") + e.what());
    }
    if (!j.contains("modes") || !j["modes"].is_array() || j["modes"].empty())
        throw InputError("regulator file: missing modes");
    LoadedRegulator reg;
    reg.plant_dim = j.value("plant_dim", 0);
    reg.exo_dim = j.value("exo_dim", 0);
    int idx = 1;
    for (const auto& jm : j["modes"]) {
        const std::string at = "regulator mode " + std::to_string(idx++);
        RegulatorMode md{matrix_from_json(jm.at("Ar"), at + ": Ar"),
                         matrix_from_json(jm.at("Br"), at + ": Br"),
                         matrix_from_json(jm.at("Fr"), at + ": Fr")};
        const auto dim = md.Ar.rows();
        require(md.Ar.cols() == dim && md.Br.rows() == dim && md.Fr.cols() == dim,
                at + ": inconsistent matrix sizes");
        reg.modes.push_back(std::move(md));
    }
    if (j.contains("certificates") && j["certificates"].contains("innovation"))
        reg.P_innovation =
            matrix_from_json(j["certificates"]["innovation"]["P"], "innovation P");
    return reg;
}

}  // namespace swreg
