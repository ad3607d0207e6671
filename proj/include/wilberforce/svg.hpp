#pragma once

// Dependency-free SVG scatter / polyline plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "io.hpp"

namespace wilberforce::svg {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool polyline = false;
    double radius = 0.8;
};

struct Marker {
    double x = 0.0;
    double y = 0.0;
    std::string color = "#d62728";
    std::string label;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<Marker> markers;
    int width = 640;
    int height = 640;
};

namespace detail {

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

// Short fixed-precision labels for tick text.
inline std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

} // namespace detail

inline void write(std::ostream& os, const Plot& plot) {
    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    auto extend = [&](double x, double y) {
        if (!std::isfinite(x) || !std::isfinite(y))
            return;
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (const auto& s : plot.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            extend(s.x[i], s.y[i]);
    for (const auto& m : plot.markers)
        extend(m.x, m.y);
    if (!std::isfinite(xmin)) {
        xmin = ymin = -1.0;
        xmax = ymax = 1.0;
    }
    if (xmax - xmin < 1e-12) { xmin -= 1.0; xmax += 1.0; }
    if (ymax - ymin < 1e-12) { ymin -= 1.0; ymax += 1.0; }
    const double padx = 0.05 * (xmax - xmin);
    const double pady = 0.05 * (ymax - ymin);
    xmin -= padx; xmax += padx; ymin -= pady; ymax += pady;

    const double left = 70, right = 20, top = 40, bottom = 55;
    const double pw = plot.width - left - right;
    const double ph = plot.height - top - bottom;
    auto sx = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return top + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << plot.width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << detail::escape(plot.title) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 4.0;
        const double yv = ymin + (ymax - ymin) * i / 4.0;
        os << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
           << detail::tick(xv) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << detail::tick(yv)
           << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << plot.height - 12 << "\" text-anchor=\"middle\">"
       << detail::escape(plot.x_label) << "</text>\n";
    os << "<text x=\"16\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << top + ph / 2 << ")\">" << detail::escape(plot.y_label) << "</text>\n";

    for (const auto& s : plot.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.polyline) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"0.6\" points=\"";
            for (std::size_t i = 0; i < n; ++i)
                os << detail::tick(sx(s.x[i])) << ',' << detail::tick(sy(s.y[i])) << ' ';
            os << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < n; ++i)
                os << "<circle cx=\"" << detail::tick(sx(s.x[i])) << "\" cy=\"" << detail::tick(sy(s.y[i]))
                   << "\" r=\"" << s.radius << "\" fill=\"" << s.color << "\"/>\n";
        }
    }
    for (const auto& m : plot.markers) {
        os << "<circle cx=\"" << sx(m.x) << "\" cy=\"" << sy(m.y) << "\" r=\"4\" fill=\"" << m.color << "\"/>\n";
        if (!m.label.empty())
            os << "<text x=\"" << sx(m.x) + 6 << "\" y=\"" << sy(m.y) - 6 << "\">" << detail::escape(m.label)
               << "</text>\n";
    }
    os << "</svg>\n";
}

} // namespace wilberforce::svg
