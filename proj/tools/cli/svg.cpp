#include "cli/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qmon::cli {

namespace {

constexpr std::array<Rgb, 8> kViridis{{{0x44, 0x01, 0x54},
                                       {0x46, 0x32, 0x7e},
                                       {0x36, 0x5c, 0x8d},
                                       {0x27, 0x7f, 0x8e},
                                       {0x1f, 0xa1, 0x87},
                                       {0x4a, 0xc1, 0x6d},
                                       {0xa0, 0xda, 0x39},
                                       {0xfd, 0xe7, 0x25}}};

constexpr std::array<const char *, 6> kLineColors{"#440154", "#277f8e", "#4ac16d", "#e07b00", "#c8102e", "#5a5a5a"};

constexpr double kPanelW = 360.0;
constexpr double kPanelH = 280.0;
constexpr double kMarginL = 60.0;
constexpr double kMarginT = 40.0;
constexpr double kPlotW = 240.0;
constexpr double kPlotH = 190.0;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string escape(const std::string &s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

class Svg {
  public:
    Svg(double width, double height, const std::string &version) {
        s_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
           << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\" font-family=\"sans-serif\">\n";
        s_ << "<!-- qmon " << escape(version) << " -->\n";
        s_ << "<rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height) << "\" fill=\"#ffffff\"/>\n";
    }
    void rect(double x, double y, double w, double h, const std::string &fill, const std::string &title = {}) {
        s_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
           << "\" fill=\"" << fill << '"';
        if (title.empty()) {
            s_ << "/>\n";
        } else {
            s_ << "><title>" << escape(title) << "</title></rect>\n";
        }
    }
    void frame(double x, double y, double w, double h) {
        s_ << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(w) << "\" height=\"" << num(h)
           << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    }
    void text(double x, double y, const std::string &t, double size = 11, const char *anchor = "middle",
              double rotate = 0.0) {
        s_ << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << num(size) << "\" text-anchor=\""
           << anchor << '"';
        if (rotate != 0.0) s_ << " transform=\"rotate(" << num(rotate) << ' ' << num(x) << ' ' << num(y) << ")\"";
        s_ << '>' << escape(t) << "</text>\n";
    }
    void polyline(const std::vector<std::pair<double, double>> &pts, const char *stroke, const std::string &title) {
        s_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) s_ << (i ? " " : "") << num(pts[i].first) << ',' << num(pts[i].second);
        s_ << "\"><title>" << escape(title) << "</title></polyline>\n";
    }
    std::string finish() {
        s_ << "</svg>\n";
        return s_.str();
    }

  private:
    std::ostringstream s_;
};

struct Range {
    double lo;
    double hi;
    bool flat() const { return !(hi > lo); }
    double unit(double v) const { return flat() ? 0.5 : (v - lo) / (hi - lo); }
};

Range range_of(const std::vector<double> &values) {
    if (values.empty()) return {0.0, 0.0};
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

void colorbar(Svg &svg, double x, double y, double h, Range r) {
    constexpr int steps = 32;
    for (int i = 0; i < steps; ++i) {
        const double t = r.flat() ? 0.5 : (i + 0.5) / steps;
        svg.rect(x, y + h - (i + 1) * h / steps, 12, h / steps + 0.3, to_hex(viridis(t)));
    }
    svg.frame(x, y, 12, h);
    svg.text(x + 16, y + 8, num(r.hi), 10, "start");
    svg.text(x + 16, y + h, num(r.lo), 10, "start");
}

void axis_ticks(Svg &svg, double x0, double y0, const std::vector<double> &xs, const std::vector<double> &ys,
                const AxisLabels &axes) {
    if (!xs.empty()) {
        svg.text(x0, y0 + kPlotH + 14, num(xs.front()), 10);
        svg.text(x0 + kPlotW, y0 + kPlotH + 14, num(xs.back()), 10);
    }
    if (!ys.empty()) {
        svg.text(x0 - 4, y0 + kPlotH, num(ys.front()), 10, "end");
        svg.text(x0 - 4, y0 + 8, num(ys.back()), 10, "end");
    }
    svg.text(x0 + kPlotW / 2, y0 + kPlotH + 30, axes.x, 11);
    svg.text(x0 - 40, y0 + kPlotH / 2, axes.y, 11, "middle", -90);
}

} // namespace

Rgb viridis(double t) {
    if (!(t > 0.0)) return kViridis.front();
    if (t >= 1.0) return kViridis.back();
    const double s = t * (kViridis.size() - 1);
    const auto i = static_cast<std::size_t>(s);
    const double f = s - static_cast<double>(i);
    auto mix = [f](std::uint8_t a, std::uint8_t b) {
        return static_cast<std::uint8_t>(std::lround(a + f * (static_cast<double>(b) - a)));
    };
    const Rgb &a = kViridis[i];
    const Rgb &b = kViridis[i + 1];
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::string render_heatmaps(const std::vector<HeatmapPanel> &panels, const AxisLabels &axes,
                            const std::string &version) {
    Svg svg(kPanelW * static_cast<double>(std::max<std::size_t>(panels.size(), 1)), kPanelH, version);
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto &panel = panels[p];
        const double x0 = kPanelW * static_cast<double>(p) + kMarginL;
        const double y0 = kMarginT;
        std::vector<double> all;
        for (const auto &row : panel.values) all.insert(all.end(), row.begin(), row.end());
        const Range r = range_of(all);
        const std::size_t nx = panel.x.size();
        const std::size_t ny = panel.y.size();
        svg.text(x0 + kPlotW / 2, y0 - 12, panel.title, 12);
        if (nx && ny) {
            const double cw = kPlotW / static_cast<double>(nx);
            const double ch = kPlotH / static_cast<double>(ny);
            for (std::size_t iy = 0; iy < ny; ++iy)
                for (std::size_t ix = 0; ix < nx; ++ix) {
                    const double v = panel.values[iy][ix];
                    // y grows upward: first y value at the bottom
                    const double y = y0 + kPlotH - static_cast<double>(iy + 1) * ch;
                    svg.rect(x0 + static_cast<double>(ix) * cw, y, cw + 0.05, ch + 0.05, to_hex(viridis(r.unit(v))),
                             axes.y + "=" + num(panel.y[iy]) + ", " + axes.x + "=" + num(panel.x[ix]) +
                                 ", value=" + num(v));
                }
        }
        svg.frame(x0, y0, kPlotW, kPlotH);
        axis_ticks(svg, x0, y0, panel.x, panel.y, axes);
        colorbar(svg, x0 + kPlotW + 10, y0, kPlotH, r);
    }
    return svg.finish();
}

std::string render_lines(const std::vector<LinePanel> &panels, const AxisLabels &axes, const std::string &version) {
    Svg svg(kPanelW * static_cast<double>(std::max<std::size_t>(panels.size(), 1)), kPanelH, version);
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto &panel = panels[p];
        const double x0 = kPanelW * static_cast<double>(p) + kMarginL;
        const double y0 = kMarginT;
        std::vector<double> xs;
        std::vector<double> ys;
        for (const auto &s : panel.series)
            for (const auto &[x, y] : s.points) {
                xs.push_back(x);
                ys.push_back(y);
            }
        Range rx = range_of(xs);
        Range ry = range_of(ys);
        if (ry.flat()) ry = {ry.lo - 0.5, ry.hi + 0.5};
        if (rx.flat()) rx = {rx.lo - 0.5, rx.hi + 0.5};
        svg.text(x0 + kPlotW / 2, y0 - 12, panel.title, 12);
        for (std::size_t i = 0; i < panel.series.size(); ++i) {
            const auto &s = panel.series[i];
            std::vector<std::pair<double, double>> pts;
            for (const auto &[x, y] : s.points) pts.emplace_back(x0 + rx.unit(x) * kPlotW, y0 + kPlotH - ry.unit(y) * kPlotH);
            const char *color = kLineColors[i % kLineColors.size()];
            svg.polyline(pts, color, s.label);
            svg.rect(x0 + kPlotW + 10, y0 + 14.0 * static_cast<double>(i), 10, 10, color);
            svg.text(x0 + kPlotW + 24, y0 + 9 + 14.0 * static_cast<double>(i), s.label, 10, "start");
        }
        svg.frame(x0, y0, kPlotW, kPlotH);
        axis_ticks(svg, x0, y0, {rx.lo, rx.hi}, {ry.lo, ry.hi}, axes);
    }
    return svg.finish();
}

std::string render_matrices(const std::vector<MatrixPanel> &panels, const std::string &version) {
    Svg svg(kPanelW * static_cast<double>(std::max<std::size_t>(panels.size(), 1)), kPanelH + 20, version);
    for (std::size_t p = 0; p < panels.size(); ++p) {
        const auto &panel = panels[p];
        const std::size_t n = panel.values.dim();
        const double x0 = kPanelW * static_cast<double>(p) + kMarginL;
        const double y0 = kMarginT + 20;
        const double side = std::min(kPlotW, kPlotH);
        const double cell = side / static_cast<double>(n);
        double hi = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) hi = std::max(hi, panel.values(i, j));
        const Range r{0.0, hi};
        svg.text(x0 + side / 2, y0 - 30, panel.title, 12);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string &li = i < panel.labels.size() ? panel.labels[i] : std::to_string(i);
            svg.text(x0 - 4, y0 + (static_cast<double>(i) + 0.5) * cell + 4, li, 10, "end");
            svg.text(x0 + (static_cast<double>(i) + 0.5) * cell, y0 - 4, li, 10);
            for (std::size_t j = 0; j < n; ++j) {
                const double v = panel.values(i, j);
                const std::string &lj = j < panel.labels.size() ? panel.labels[j] : std::to_string(j);
                svg.rect(x0 + static_cast<double>(j) * cell, y0 + static_cast<double>(i) * cell, cell, cell,
                         to_hex(viridis(r.unit(v))), "|rho(" + li + "," + lj + ")|=" + num(v));
            }
        }
        svg.frame(x0, y0, side, side);
        colorbar(svg, x0 + side + 10, y0, side, r);
    }
    return svg.finish();
}

} // namespace qmon::cli
