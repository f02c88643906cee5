// svg.hpp — Minimal line plots: axes, ticks, polylines and a legend

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "qbath/io/csv.hpp"

namespace qbath::io {

struct Series {
    std::string label;
    std::vector<double> x, y;
    bool dashed{false};
    int color{0};  // palette index
};

struct Plot {
    std::string title, xlabel, ylabel;
    std::vector<Series> series;
    int width{800}, height{500};
};

namespace detail {

inline const char* palette(int i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    return colors[static_cast<std::size_t>(i) % 7];
}

// 1, 2 or 5 times a power of ten, giving about `target` intervals.
inline double nice_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target, mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    return (f < 1.5 ? 1.0 : f < 3.5 ? 2.0 : f < 7.5 ? 5.0 : 10.0) * mag;
}

inline std::string escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '<') r += "&lt;";
        else if (c == '>') r += "&gt;";
        else if (c == '&') r += "&amp;";
        else r += c;
    }
    return r;
}

} // namespace detail

inline void write_svg(std::ostream& os, const Plot& plot) {
    const double ml = 70, mr = 160, mt = 40, mb = 55;
    const double pw = plot.width - ml - mr, ph = plot.height - mt - mb;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!(x1 > x0)) { x0 -= 1; x1 += 1; }
    if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
    y0 = std::min(y0, 0.0);
    const auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    const auto Y = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << detail::escape(plot.title) << "</text>\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double sx = detail::nice_step(x1 - x0, 8), sy = detail::nice_step(y1 - y0, 6);
    for (double v = std::ceil(x0 / sx) * sx; v <= x1 + 1e-9 * sx; v += sx) {
        os << "<line x1=\"" << X(v) << "\" y1=\"" << mt + ph << "\" x2=\"" << X(v) << "\" y2=\"" << mt + ph + 5
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << X(v) << "\" y=\"" << mt + ph + 18 << "\" text-anchor=\"middle\">"
           << format_number(std::abs(v) < 1e-12 * sx ? 0.0 : v) << "</text>\n";
    }
    for (double v = std::ceil(y0 / sy) * sy; v <= y1 + 1e-9 * sy; v += sy) {
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << Y(v) << "\" x2=\"" << ml << "\" y2=\"" << Y(v)
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << Y(v) + 4 << "\" text-anchor=\"end\">"
           << format_number(std::abs(v) < 1e-12 * sy ? 0.0 : v) << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << plot.height - 12 << "\" text-anchor=\"middle\">"
       << detail::escape(plot.xlabel) << "</text>\n";
    os << "<text transform=\"translate(18," << mt + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << detail::escape(plot.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        os << "<polyline fill=\"none\" stroke=\"" << detail::palette(s.color) << "\" stroke-width=\"1.5\""
           << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << (i ? " " : "") << format_number(X(s.x[i])) << ',' << format_number(Y(s.y[i]));
        os << "\"/>\n";
        const double ly = mt + 12 + 18.0 * static_cast<double>(k), lx = ml + pw + 12;
        os << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly << "\" stroke=\""
           << detail::palette(s.color) << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
           << "/>\n";
        os << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">" << detail::escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace qbath::io
