#pragma once

// Polyline SVG charts. Every chart is written together with `<stem>.plot.csv`
// holding exactly the plotted points in long form (series,x,y).

#include <filesystem>
#include <string>
#include <vector>

namespace mkzfrac::app {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotOptions {
    std::string title;
    std::string x_label = "x";
    std::string y_label = "y";
    bool log_y = false;
    /// Series longer than this are thinned by a fixed stride before plotting.
    std::size_t max_points = 20000;
};

/// Writes `<stem>.svg` and `<stem>.plot.csv`.
void write_plot(const std::filesystem::path& stem, const std::vector<Series>& series, const PlotOptions& opts);

/// Thinned copy of a series; the last point is always kept.
Series thin(const Series& s, std::size_t max_points);

}  // namespace mkzfrac::app
