#pragma once

#include <optional>
#include <string>
#include <vector>

#include "swreg/geometric.hpp"
#include "swreg/lmi.hpp"
#include "swreg/system_model.hpp"
#include "swreg/types.hpp"

namespace swreg {

struct RegulatorMode {
    Mat Ar;  // (n+q) x (n+q)
    Mat Br;  // (n+q) x p
    Mat Fr;  // m x (n+q)
};

// Observer-based switching regulator
//   xi(t+1) = (Ae + Be F + G Ce) xi(t) - G e(t),   u(t) = F xi(t),
// i.e. Ar = Ae + Be F + G Ce, Br = -G, Fr = F per mode, with full synthesis
// provenance attached.
struct RegulatorRealization {
    std::vector<RegulatorMode> modes;

    int plant_dim = 0;
    int exo_dim = 0;

    FriendSet friends;
    FrancisSolution francis;
    std::vector<Mat> F1;  // plant-block feedbacks behind the friend assembly

    Mat P_innovation;        // common Lyapunov matrix for {Ae_i + G_i Ce_i}
    std::vector<Mat> G;      // output injections
    LyapunovCertificate innovation_certificate;
    LyapunovCertificate plant_loop_certificate;  // for {A_i + B_i F1_i}

    int state_dim() const { return plant_dim + exo_dim; }
};

struct SynthesisOptions {
    double epsilon = 1e-6;        // LMI strictness margin
    double residual_tol = 1e-8;   // geometric residual acceptance
    bool force_feedback_synthesis = false;  // run the state-feedback LMI even
                                            // when the open-loop plant verifies
    RankPolicy rank_policy;
    SolveOptions lmi;  // epsilon is overwritten from the field above
};

struct StageResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct SynthesisReport {
    std::vector<StageResult> stages;
    int vstar_dim = -1;
    bool condition_i = false;
    double francis_residual = -1.0;

    const StageResult* find(const std::string& name) const;
};

struct SynthesisOutcome {
    std::optional<RegulatorRealization> regulator;
    SynthesisReport report;
    std::string failed_stage;  // empty on success

    bool ok() const { return regulator.has_value(); }
};

// Full pipeline: extended system -> plant quadratic stability (state-feedback
// LMI as fallback) -> output-injection synthesis -> V* -> condition (i) ->
// Francis -> friend assembly -> realization. Fails fast at the first
// unsatisfied condition, naming the stage.
SynthesisOutcome synthesize(const SwitchingPlant& plant, const Exosystem& exo,
                            const SynthesisOptions& options = {});

struct CertificationCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;  // residual or margin, see detail
    std::string detail;
};

struct CertificationReport {
    bool accepted = false;
    std::vector<CertificationCheck> checks;
};

// Independent re-verification of an assembled regulator against its problem
// data: (a) friendship residuals, (b) Ce annihilates V, (c) common Lyapunov
// for the innovation loops {Ae_i + G_i Ce_i}, (d) common Lyapunov for the
// plant loops {A_i + B_i F1_i}.
CertificationReport certify(const RegulatorRealization& reg,
                            const SwitchingPlant& plant, const Exosystem& exo);

// Regulator files: JSON with per-mode Ar, Br, Fr plus certificate matrices
// and margins.
std::string serialize_regulator(const RegulatorRealization& reg);
void save_regulator(const RegulatorRealization& reg, const std::string& path);

// Loads the simulation-facing part of a regulator file (realization matrices
// and the innovation certificate).
struct LoadedRegulator {
    std::vector<RegulatorMode> modes;
    Mat P_innovation;
    int plant_dim = 0;
    int exo_dim = 0;
};
LoadedRegulator load_regulator(const std::string& path);

}  // namespace swreg
