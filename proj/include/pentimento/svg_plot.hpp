#pragma once

#include "pentimento/series_io.hpp"

#include <string>

namespace pentimento {

struct PlotOptions {
    int width = 900;
    int height = 500;
    std::string title = "Delta ps vs. hour";
};

/// Static SVG line chart, one polyline per route. Routes are cyan when the
/// burn bit is 0, magenta when it is 1 and grey when the CSV has no truth.
/// Throws DataError when there is nothing to plot.
std::string render_svg(const ExperimentData& data, const PlotOptions& options = {});

} // namespace pentimento
