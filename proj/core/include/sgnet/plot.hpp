#pragma once

// Static SVG convergence plots from results.csv rows.

#include <string>
#include <string_view>
#include <vector>

#include "sgnet/experiment.hpp"

namespace sgnet {

enum class PlotKind { ErrorVsDim, TimeVsDim };

std::string_view to_string(PlotKind kind);
PlotKind parse_plot_kind(std::string_view name);

/// One polyline per (experiment, method), x = M+1. Error plots use a log
/// axis and drop non-positive values. Throws InvalidArgument when there is
/// nothing to draw.
std::string render_svg(const std::vector<ResultsRow>& rows, PlotKind kind);

/// Reads the CSV and writes the SVG; nothing is written on failure.
void plot_results(const std::string& csv_path, PlotKind kind, const std::string& svg_path);

}  // namespace sgnet
