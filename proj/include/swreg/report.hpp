#pragma once

#include <string>

#include "swreg/simulation.hpp"
#include "swreg/types.hpp"

namespace swreg {

// Numbers in reports are rendered with 5 significant digits; stored and
// exported values keep full precision.
std::string fmt5(double x);

std::string format_error_metrics(const ErrorMetrics& metrics, double sampling_time);

// Static line chart of the error outputs against time in seconds, one panel
// per output, fixed 800x500 viewport, x ticks every second. No plotting
// dependency; the CSV remains the canonical data artifact.
std::string error_chart_svg(const SimulationTrace& trace);
void write_error_chart_svg(const SimulationTrace& trace, const std::string& path);

}  // namespace swreg
