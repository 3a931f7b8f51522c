// Benchmark comparing the serial reference paths against their OpenMP
// variants: batch closed-loop simulation and multi-restart LMI solving.
// On a single hardware thread the two columns should match.

#include <chrono>
#include <cstdio>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "swreg/lmi.hpp"
#include "swreg/paper_example.hpp"
#include "swreg/regulator.hpp"
#include "swreg/simulation.hpp"

using namespace swreg;

namespace {

double seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<SimulationConfig> batch_configs(int count, int horizon) {
    std::vector<SimulationConfig> cfgs;
    for (int k = 0; k < count; ++k) {
        std::mt19937_64 rng(500 + static_cast<std::uint64_t>(k));
        std::uniform_int_distribution<int> seg_len(1, 20);
        std::uniform_int_distribution<int> mode(1, 2);
        std::vector<SwitchingSignal::Segment> segs;
        int t = 0;
        while (t < horizon) {
            const int len = seg_len(rng);
            segs.push_back({mode(rng), t, std::min(t + len, horizon) - 1});
            t += len;
        }
        SimulationConfig cfg;
        cfg.horizon = horizon;
        cfg.signal = SwitchingSignal(segs);
        cfg.seed = 100 + static_cast<std::uint64_t>(k);
        cfg.randomize_all = true;
        cfgs.push_back(std::move(cfg));
    }
    return cfgs;
}

}  // namespace

int main() {
    auto plant = paper::plant();
    auto exo = paper::exosystem();

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; both columns run serially\n");
#endif

    auto synthesis = synthesize(plant, exo);
    if (!synthesis.ok()) {
        std::printf("synthesis failed at %s; cannot benchmark\n",
                    synthesis.failed_stage.c_str());
        return 1;
    }
    const auto& reg = synthesis.regulator->modes;

    {
        const auto cfgs = batch_configs(2000, 300);
        auto t0 = std::chrono::steady_clock::now();
        auto serial = simulate_batch_serial(plant, exo, reg, cfgs);
        const double ts = seconds(t0);
        t0 = std::chrono::steady_clock::now();
        auto parallel = simulate_batch(plant, exo, reg, cfgs);
        const double tp = seconds(t0);
        bool identical = serial.size() == parallel.size();
        for (std::size_t i = 0; identical && i < serial.size(); ++i)
            for (int t = 0; t < serial[i].horizon() && identical; ++t)
                identical = serial[i].steps[t].e == parallel[i].steps[t].e &&
                            serial[i].steps[t].xi == parallel[i].steps[t].xi;
        std::printf("batch simulation (2000 runs x 300 steps): serial %.3fs, "
                    "parallel %.3fs, speedup %.2fx, results %s\n",
                    ts, tp, ts / tp, identical ? "identical" : "DIFFER");
    }

    {
        auto sys = build_extended(plant, exo);
        std::vector<std::pair<Mat, Mat>> modes;
        for (const auto& md : sys.modes)
            modes.emplace_back(md.Ae, md.Ce);

        SolveOptions serial_opts;
        serial_opts.restart_chunk = 1;
        auto t0 = std::chrono::steady_clock::now();
        auto rs = synth_output_injection(modes, serial_opts);
        const double ts = seconds(t0);

        SolveOptions par_opts;
        par_opts.restart_chunk = 0;  // one chunk per hardware thread
        t0 = std::chrono::steady_clock::now();
        auto rp = synth_output_injection(modes, par_opts);
        const double tp = seconds(t0);

        const bool identical = rs.feasible == rp.feasible && rs.P == rp.P;
        std::printf("output-injection LMI: serial %.3fs, chunked %.3fs, "
                    "speedup %.2fx, certificates %s\n",
                    ts, tp, ts / tp, identical ? "identical" : "DIFFER");
    }
    return 0;
}
