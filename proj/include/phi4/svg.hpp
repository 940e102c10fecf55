#pragma once

// Minimal deterministic SVG 1.1 line-chart writer for the figure outputs.
// No external dependencies; floating-point coordinates are formatted with a
// fixed precision so identical inputs produce byte-identical files.

#include <string>
#include <vector>

namespace phi4::svg {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct LineSeries {
    std::string label;     ///< legend text; empty entries are skipped
    std::string color;     ///< CSS color, e.g. "#1f77b4"
    bool dashed = false;
    std::vector<Point> points;  ///< non-finite points break the polyline
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 840;
    int height = 560;
};

/// Renders the series into an SVG document string.  Axis ranges are fitted
/// to the finite data (with padding); ticks are chosen on a decimal grid.
std::string render_chart(const ChartSpec& spec,
                         const std::vector<LineSeries>& series);

/// Renders and writes to a file; throws std::runtime_error on I/O failure.
void write_chart(const ChartSpec& spec, const std::vector<LineSeries>& series,
                 const std::string& path);

/// A categorical ten-color palette (stable ordering).
const std::vector<std::string>& palette10();

}  // namespace phi4::svg
