#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "swreg/regulator.hpp"
#include "swreg/system_model.hpp"
#include "swreg/types.hpp"

namespace swreg {

// Initial states default to x0 = 0, xi0 = 0 and w0 drawn once from a seeded
// uniform [-1, 1]^q (the exosystem carries the reference, so a nonzero w0
// exercises tracking). Leave a vector empty (size 0) to use its default.
struct SimulationConfig {
    int horizon = 100;
    SwitchingSignal signal = SwitchingSignal::constant(1, 100);
    Vec x0, w0, xi0;
    std::uint64_t seed = 1;
    bool randomize_all = false;  // draw x0 and xi0 from the seed as well
    double sampling_time = 0.1;
};

struct TraceStep {
    int t;
    int mode_label;  // 1-based
    Vec x, w, xi, u, e;
    double eta_norm;  // ||xi - (x, w)||
};

struct SimulationTrace {
    std::vector<TraceStep> steps;
    std::uint64_t seed = 0;
    double sampling_time = 0.1;

    int horizon() const { return static_cast<int>(steps.size()); }
};

// Iterates x+ = A x + B u, w+ = Ag w, xi+ = Ar xi + Br e with u = Fr xi and
// e = C x - Eg w, recording every step. Deterministic given the config.
SimulationTrace simulate(const SwitchingPlant& plant, const Exosystem& exo,
                         const std::vector<RegulatorMode>& reg,
                         const SimulationConfig& cfg);

struct OutputMetrics {
    double peak = 0.0;                // max |e_j| over the trace
    double tail_max = 0.0;            // max |e_j| over the last 10% of steps
    int last_step_above_1pct = -1;    // last t with |e_j| > 0.01 * peak
};

struct SwitchTransient {
    int step;          // first step of a new segment
    double peak_after; // max ||e||_inf within the following 10 steps
};

struct ErrorMetrics {
    std::vector<OutputMetrics> outputs;
    std::vector<SwitchTransient> switch_transients;
};

ErrorMetrics error_metrics(const SimulationTrace& trace);

// CSV schema: t,seconds,mode,e1..ep,u1..um,eta_norm with 17 significant
// digits so values round-trip exactly.
std::string trace_to_csv(const SimulationTrace& trace);
void write_trace_csv(const SimulationTrace& trace, const std::string& path);

// Runs one simulation per config. The parallel variant distributes runs over
// OpenMP threads; traces are independent, so results are identical to the
// serial reference.
std::vector<SimulationTrace> simulate_batch_serial(const SwitchingPlant& plant,
                                                   const Exosystem& exo,
                                                   const std::vector<RegulatorMode>& reg,
                                                   const std::vector<SimulationConfig>& cfgs);
std::vector<SimulationTrace> simulate_batch(const SwitchingPlant& plant,
                                            const Exosystem& exo,
                                            const std::vector<RegulatorMode>& reg,
                                            const std::vector<SimulationConfig>& cfgs);

}  // namespace swreg
