#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmon/linalg.hpp"

namespace qmon::cli {

struct Rgb {
    std::uint8_t r, g, b;
    friend bool operator==(const Rgb &, const Rgb &) = default;
};

/// Eight viridis stops at t = 0, 1/7, ..., 1, linearly interpolated in sRGB.
/// t is clamped to [0, 1].
Rgb viridis(double t);
std::string to_hex(Rgb c);

/// Values over a regular (x, y) grid; `values[iy][ix]`.
struct HeatmapPanel {
    std::string title;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::vector<double>> values;
};

struct LineSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct LinePanel {
    std::string title;
    std::vector<LineSeries> series;
};

struct MatrixPanel {
    std::string title;
    RealMatrix values;
    std::vector<std::string> labels;
};

struct AxisLabels {
    std::string x;
    std::string y;
};

/// Each panel gets its own color scale spanning its min..max. A panel whose
/// values are all equal is drawn in the middle color of the ramp.
std::string render_heatmaps(const std::vector<HeatmapPanel> &panels, const AxisLabels &axes, const std::string &version);
std::string render_lines(const std::vector<LinePanel> &panels, const AxisLabels &axes, const std::string &version);
/// Color scale fixed to [0, max entry]; empty-variation grids use the middle color.
std::string render_matrices(const std::vector<MatrixPanel> &panels, const std::string &version);

} // namespace qmon::cli
