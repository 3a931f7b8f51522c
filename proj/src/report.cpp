#include "swreg/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace swreg {

std::string fmt5(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.5g", x);
    return buf;
}

std::string format_error_metrics(const ErrorMetrics& metrics, double sampling_time) {
    std::ostringstream os;
    for (std::size_t j = 0; j < metrics.outputs.size(); ++j) {
        const auto& om = metrics.outputs[j];
        os << "e" << (j + 1) << ": peak " << fmt5(om.peak) << ", tail max "
           << fmt5(om.tail_max) << " (ratio "
           << fmt5(om.peak > 0 ? om.tail_max / om.peak : 0.0)
           << "), last above 1% of peak at t=" << om.last_step_above_1pct << " ("
           << fmt5(om.last_step_above_1pct * sampling_time) << " s)\n";
    }
    for (const auto& tr : metrics.switch_transients)
        os << "switch at t=" << tr.step << " (" << fmt5(tr.step * sampling_time)
           << " s): transient peak " << fmt5(tr.peak_after) << "\n";
    return os.str();
}

namespace {

struct Extent {
    double lo, hi;
};

Extent nice_extent(double lo, double hi) {
    if (lo > hi)
        std::swap(lo, hi);
    const double span = hi - lo;
    if (span <= 0.0)
        return {lo - 1.0, hi + 1.0};
    return {lo - 0.05 * span, hi + 0.05 * span};
}

void append(std::string& svg, const char* fmt, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), fmt, args...);
    svg += buf;
}

}  // namespace

std::string error_chart_svg(const SimulationTrace& trace) {
    require(!trace.steps.empty(), "error_chart_svg: empty trace");
    const int p = static_cast<int>(trace.steps[0].e.size());
    const int horizon = trace.horizon();
    const double Ts = trace.sampling_time;
    const double t_max = (horizon - 1) * Ts;

    const double width = 800.0, height = 500.0;
    const double left = 62.0, right = 16.0, top = 26.0, bottom = 40.0;
    const double panel_gap = 26.0;
    const double panel_h = (height - top - bottom - panel_gap * (p - 1)) / p;
    const double plot_w = width - left - right;

    std::string svg;
    append(svg,
           "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
           "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"12\">\n",
           width, height, width, height);
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (int j = 0; j < p; ++j) {
        const double y0 = top + j * (panel_h + panel_gap);

        double lo = 0.0, hi = 0.0;
        for (const auto& s : trace.steps) {
            lo = std::min(lo, s.e(j));
            hi = std::max(hi, s.e(j));
        }
        const Extent ex = nice_extent(lo, hi);
        auto ypix = [&](double v) {
            return y0 + panel_h * (ex.hi - v) / (ex.hi - ex.lo);
        };
        auto xpix = [&](double sec) {
            return left + (t_max > 0 ? plot_w * sec / t_max : 0.0);
        };

        append(svg,
               "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" "
               "fill=\"none\" stroke=\"#555\"/>\n",
               left, y0, plot_w, panel_h);
        append(svg, "<text x=\"%.1f\" y=\"%.1f\" fill=\"#000\">e%d</text>\n", left + 6.0,
               y0 + 14.0, j + 1);

        // x ticks every second
        for (int s = 0; s <= static_cast<int>(std::floor(t_max + 1e-9)); ++s) {
            const double xp = xpix(s);
            append(svg,
                   "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                   "stroke=\"#ccc\"/>\n",
                   xp, y0, xp, y0 + panel_h);
            if (j == p - 1)
                append(svg,
                       "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" "
                       "fill=\"#000\">%d</text>\n",
                       xp, y0 + panel_h + 16.0, s);
        }
        // y ticks: zero line plus extremes
        for (double v : {ex.lo, 0.0, ex.hi}) {
            if (v < ex.lo || v > ex.hi)
                continue;
            const double yp = ypix(v);
            append(svg,
                   "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                   "stroke=\"#ddd\"/>\n",
                   left, yp, left + plot_w, yp);
            append(svg,
                   "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\" "
                   "fill=\"#000\">%s</text>\n",
                   left - 4.0, yp + 4.0, fmt5(v).c_str());
        }

        svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
        for (const auto& s : trace.steps)
            append(svg, "%.2f,%.2f ", xpix(s.t * Ts), ypix(s.e(j)));
        svg += "\"/>\n";
    }
    append(svg,
           "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" fill=\"#000\">"
           "time (s)</text>\n",
           left + plot_w / 2.0, height - 8.0);
    svg += "</svg>\n";
    return svg;
}

void write_error_chart_svg(const SimulationTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw InputError("cannot write chart file: " + path);
    out << error_chart_svg(trace);
}

}  // namespace swreg
