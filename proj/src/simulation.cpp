#include "swreg/simulation.hpp"

#include <cstdio>
#include <fstream>
#include <random>

namespace swreg {

SimulationTrace simulate(const SwitchingPlant& plant, const Exosystem& exo,
                         const std::vector<RegulatorMode>& reg,
                         const SimulationConfig& cfg) {
    plant.validate();
    exo.validate();
    require(cfg.horizon >= 1, "simulate: horizon must be positive");
    require(reg.size() == plant.modes.size(), "simulate: one regulator mode per plant mode");
    cfg.signal.validate(plant.num_modes(), cfg.horizon);

    const int n = plant.state_dim();
    const int q = exo.state_dim();
    const int m = plant.input_dim();
    for (const auto& md : reg)
        require(md.Ar.rows() == n + q && md.Br.cols() == plant.output_dim() &&
                    md.Fr.rows() == m && md.Fr.cols() == n + q,
                "simulate: regulator dimensions do not match the problem");

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    auto draw = [&](int size) {
        Vec v(size);
        for (int i = 0; i < size; ++i)
            v(i) = uni(rng);
        return v;
    };

    Vec x = cfg.x0, w = cfg.w0, xi = cfg.xi0;
    if (w.size() == 0)
        w = draw(q);
    require(w.size() == q, "simulate: w0 has wrong size");
    if (x.size() == 0)
        x = cfg.randomize_all ? draw(n) : Vec(Vec::Zero(n));
    require(x.size() == n, "simulate: x0 has wrong size");
    if (xi.size() == 0)
        xi = cfg.randomize_all ? draw(n + q) : Vec(Vec::Zero(n + q));
    require(xi.size() == n + q, "simulate: xi0 has wrong size");

    SimulationTrace trace;
    trace.seed = cfg.seed;
    trace.sampling_time = cfg.sampling_time;
    trace.steps.reserve(cfg.horizon);

    for (int t = 0; t < cfg.horizon; ++t) {
        const int label = cfg.signal.mode_at(t);
        const int i = label - 1;
        const auto& pm = plant.modes[i];
        const auto& em = exo.modes[i];
        const auto& rm = reg[i];

        TraceStep step;
        step.t = t;
        step.mode_label = label;
        step.e = pm.C * x - em.Eg * w;
        step.u = rm.Fr * xi;
        Vec eta = xi;
        eta.head(n) -= x;
        eta.tail(q) -= w;
        step.eta_norm = eta.norm();
        step.x = x;
        step.w = w;
        step.xi = xi;

        Vec xn = pm.A * x + pm.B * step.u;
        Vec wn = em.Ag * w;
        Vec xin = rm.Ar * xi + rm.Br * step.e;
        x = std::move(xn);
        w = std::move(wn);
        xi = std::move(xin);
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

ErrorMetrics error_metrics(const SimulationTrace& trace) {
    require(!trace.steps.empty(), "error_metrics: empty trace");
    const int horizon = trace.horizon();
    const int p = static_cast<int>(trace.steps[0].e.size());
    const int tail_start = horizon - std::max(1, horizon / 10);

    ErrorMetrics m;
    m.outputs.resize(p);
    for (int j = 0; j < p; ++j) {
        OutputMetrics& om = m.outputs[j];
        for (const auto& s : trace.steps)
            om.peak = std::max(om.peak, std::abs(s.e(j)));
        for (int t = tail_start; t < horizon; ++t)
            om.tail_max = std::max(om.tail_max, std::abs(trace.steps[t].e(j)));
        for (int t = 0; t < horizon; ++t)
            if (std::abs(trace.steps[t].e(j)) > 0.01 * om.peak)
                om.last_step_above_1pct = t;
    }
    for (int t = 1; t < horizon; ++t) {
        if (trace.steps[t].mode_label == trace.steps[t - 1].mode_label)
            continue;
        SwitchTransient tr{t, 0.0};
        for (int k = t; k < std::min(horizon, t + 10); ++k)
            tr.peak_after =
                std::max(tr.peak_after, trace.steps[k].e.cwiseAbs().maxCoeff());
        m.switch_transients.push_back(tr);
    }
    return m;
}

std::string trace_to_csv(const SimulationTrace& trace) {
    require(!trace.steps.empty(), "trace_to_csv: empty trace");
    const int p = static_cast<int>(trace.steps[0].e.size());
    const int m = static_cast<int>(trace.steps[0].u.size());

    std::string out = "t,seconds,mode";
    for (int j = 1; j <= p; ++j)
        out += ",e" + std::to_string(j);
    for (int j = 1; j <= m; ++j)
        out += ",u" + std::to_string(j);
    out += ",eta_norm\n";

    char buf[64];
    for (const auto& s : trace.steps) {
        out += std::to_string(s.t);
        std::snprintf(buf, sizeof(buf), ",%.17g", s.t * trace.sampling_time);
        out += buf;
        out += "," + std::to_string(s.mode_label);
        for (int j = 0; j < p; ++j) {
            std::snprintf(buf, sizeof(buf), ",%.17g", s.e(j));
            out += buf;
        }
        for (int j = 0; j < m; ++j) {
            std::snprintf(buf, sizeof(buf), ",%.17g", s.u(j));
            out += buf;
        }
        std::snprintf(buf, sizeof(buf), ",%.17g\n", s.eta_norm);
        out += buf;
    }
    return out;
}

void write_trace_csv(const SimulationTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write trace file: " + path);
    out << trace_to_csv(trace);
}

std::vector<SimulationTrace> simulate_batch_serial(const SwitchingPlant& plant,
                                                   const Exosystem& exo,
                                                   const std::vector<RegulatorMode>& reg,
                                                   const std::vector<SimulationConfig>& cfgs) {
    std::vector<SimulationTrace> traces(cfgs.size());
    for (std::size_t i = 0; i < cfgs.size(); ++i)
        traces[i] = simulate(plant, exo, reg, cfgs[i]);
    return traces;
}

std::vector<SimulationTrace> simulate_batch(const SwitchingPlant& plant,
                                            const Exosystem& exo,
                                            const std::vector<RegulatorMode>& reg,
                                            const std::vector<SimulationConfig>& cfgs) {
    std::vector<SimulationTrace> traces(cfgs.size());
    const auto count = static_cast<std::ptrdiff_t>(cfgs.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::ptrdiff_t i = 0; i < count; ++i)
        traces[i] = simulate(plant, exo, reg, cfgs[i]);
    return traces;
}

}  // namespace swreg
