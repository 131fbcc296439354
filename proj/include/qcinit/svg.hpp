// Copyright 2026 The qcinit Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace qcinit::svg {

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (x, y), drawn in order
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

inline constexpr std::array<const char*, 8> palette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                       "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace detail

/**
 * Line chart with one polyline and legend entry per series. Each data point
 * is a circle carrying data-series, data-n and data-value attributes with
 * the exact plotted values.
 */
inline std::string line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Series>& series) {
    constexpr double width = 640, height = 420;
    constexpr double left = 80, right = 150, top = 40, bottom = 60;
    const double plot_w = width - left - right, plot_h = height - top - bottom;

    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
    if (x_hi == x_lo) x_lo -= 1, x_hi += 1;
    if (y_hi == y_lo) y_lo -= 1, y_hi += 1;
    const double pad = 0.05 * (y_hi - y_lo);
    y_lo -= pad;
    y_hi += pad;

    auto px = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return top + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << detail::escape(title) << "</text>\n"
        << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w << "\" y2=\""
        << top + plot_h << "\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
        << "\"/>\n</g>\n";

    std::vector<double> xs;
    for (const auto& s : series)
        for (const auto& p : s.points) xs.push_back(p.first);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    out << "<g class=\"x-ticks\" text-anchor=\"middle\">\n";
    for (double x : xs)
        out << "<text x=\"" << detail::fmt("%.2f", px(x)) << "\" y=\"" << top + plot_h + 18 << "\">"
            << detail::fmt("%g", x) << "</text>\n";
    out << "</g>\n<g class=\"y-ticks\" text-anchor=\"end\">\n";
    for (int t = 0; t <= 4; ++t) {
        const double y = y_lo + (y_hi - y_lo) * t / 4.0;
        out << "<text x=\"" << left - 6 << "\" y=\"" << detail::fmt("%.2f", py(y) + 4) << "\">"
            << detail::fmt("%.4g", y) << "</text>\n";
    }
    out << "</g>\n"
        << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">"
        << detail::escape(x_label) << "</text>\n"
        << "<text x=\"18\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">" << detail::escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = detail::palette[i % detail::palette.size()];
        out << "<g class=\"series\" data-series=\"" << detail::escape(s.name) << "\">\n<polyline fill=\"none\" stroke=\""
            << color << "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(y)) continue;
            out << (first ? "" : " ") << detail::fmt("%.2f", px(x)) << "," << detail::fmt("%.2f", py(y));
            first = false;
        }
        out << "\"/>\n";
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(y)) continue;
            out << "<circle cx=\"" << detail::fmt("%.2f", px(x)) << "\" cy=\"" << detail::fmt("%.2f", py(y))
                << "\" r=\"3\" fill=\"" << color << "\" data-series=\"" << detail::escape(s.name) << "\" data-n=\""
                << detail::fmt("%.17g", x) << "\" data-value=\"" << detail::fmt("%.17g", y) << "\"/>\n";
        }
        const double ly = top + 10 + 20.0 * static_cast<double>(i);
        out << "</g>\n<g class=\"legend-entry\">\n<line x1=\"" << left + plot_w + 15 << "\" y1=\"" << ly << "\" x2=\""
            << left + plot_w + 40 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << left + plot_w + 46 << "\" y=\"" << ly + 4 << "\">" << detail::escape(s.name)
            << "</text>\n</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace qcinit::svg
