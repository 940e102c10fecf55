#include "phi4/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace phi4::svg {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape_text(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

/// Decimal-friendly tick step covering the span with 4..8 ticks.
double tick_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    double step;
    if (norm < 1.5) step = 1.0;
    else if (norm < 3.5) step = 2.0;
    else if (norm < 7.5) step = 5.0;
    else step = 10.0;
    return step * mag;
}

}  // namespace

const std::vector<std::string>& palette10() {
    static const std::vector<std::string> p = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return p;
}

std::string render_chart(const ChartSpec& spec,
                         const std::vector<LineSeries>& series) {
    const double ml = 70.0, mr = 160.0, mt = 48.0, mb = 56.0;
    const double pw = spec.width - ml - mr;   // plot width
    const double ph = spec.height - mt - mb;  // plot height

    // Fit ranges to the finite data.
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (const auto& pt : s.points) {
            if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) continue;
            xmin = std::min(xmin, pt.x);
            xmax = std::max(xmax, pt.x);
            ymin = std::min(ymin, pt.y);
            ymax = std::max(ymax, pt.y);
        }
    }
    if (!(xmin <= xmax)) { xmin = 0.0; xmax = 1.0; }
    if (!(ymin <= ymax)) { ymin = 0.0; ymax = 1.0; }
    if (xmax == xmin) { xmax += 1.0; xmin -= 1.0; }
    if (ymax == ymin) { ymax += 1.0; ymin -= 1.0; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
        << "width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n"
        << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
        << "\" fill=\"white\"/>\n";

    out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"26\" "
        << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\""
        << ">" << escape_text(spec.title) << "</text>\n";

    // Grid + ticks.
    const double xstep = tick_step(xmax - xmin);
    const double ystep = tick_step(ymax - ymin);
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep;
         x += xstep) {
        const double px = sx(x);
        out << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(mt) << "\" x2=\""
            << fmt(px) << "\" y2=\"" << fmt(mt + ph)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(px) << "\" y=\"" << fmt(mt + ph + 18)
            << "\" text-anchor=\"middle\">" << fmt_tick(x) << "</text>\n";
    }
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9 * ystep;
         y += ystep) {
        const double py = sy(y);
        out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(py) << "\" x2=\""
            << fmt(ml + pw) << "\" y2=\"" << fmt(py)
            << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(py + 4)
            << "\" text-anchor=\"end\">" << fmt_tick(y) << "</text>\n";
    }
    out << "</g>\n";

    // Axes.
    out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
        << fmt(pw) << "\" height=\"" << fmt(ph)
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\""
        << fmt(spec.height - 12.0)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\">" << escape_text(spec.x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt(mt + ph / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 18 " << fmt(mt + ph / 2)
        << ")\">" << escape_text(spec.y_label) << "</text>\n";

    // Series.
    for (const auto& s : series) {
        std::ostringstream d;
        bool open = false;
        out << "<g stroke=\"" << s.color << "\" fill=\"none\" "
            << "stroke-width=\"1.6\"";
        if (s.dashed) out << " stroke-dasharray=\"6,4\"";
        out << ">\n";
        auto flush = [&]() {
            if (open) {
                out << "<polyline points=\"" << d.str() << "\"/>\n";
                d.str("");
                open = false;
            }
        };
        for (const auto& pt : s.points) {
            if (!std::isfinite(pt.x) || !std::isfinite(pt.y)) {
                flush();
                continue;
            }
            if (open) d << " ";
            d << fmt(sx(pt.x)) << "," << fmt(sy(pt.y));
            open = true;
        }
        flush();
        out << "</g>\n";
    }

    // Legend (unique labels, order of first appearance).
    double ly = mt + 6.0;
    std::vector<std::string> seen;
    out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (const auto& s : series) {
        if (s.label.empty()) continue;
        if (std::find(seen.begin(), seen.end(), s.label) != seen.end())
            continue;
        seen.push_back(s.label);
        const double lx = ml + pw + 14.0;
        out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly + 4)
            << "\" x2=\"" << fmt(lx + 22) << "\" y2=\"" << fmt(ly + 4)
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (s.dashed) out << " stroke-dasharray=\"6,4\"";
        out << "/>\n";
        out << "<text x=\"" << fmt(lx + 28) << "\" y=\"" << fmt(ly + 8)
            << "\">" << escape_text(s.label) << "</text>\n";
        ly += 16.0;
        if (ly > mt + ph - 10.0) break;  // legend overflow guard
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

void write_chart(const ChartSpec& spec, const std::vector<LineSeries>& series,
                 const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("svg: cannot open " + path);
    f << render_chart(spec, series);
    if (!f) throw std::runtime_error("svg: write failed for " + path);
}

}  // namespace phi4::svg
