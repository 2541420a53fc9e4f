// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The mimo-precoding Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMO_PLOT_HPP
#define MIMO_PLOT_HPP

// Minimal SVG line chart: linear x axis, log10 y axis, one polyline per scheme.

#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimo::harness {

namespace detail {

inline std::string fmt_num(double x, const char *spec = "%.2f")
{
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

inline const char *series_color(Scheme s)
{
    switch (s) {
    case Scheme::ZF: return "#1f77b4";
    case Scheme::RZF: return "#ff7f0e";
    case Scheme::PARZF: return "#2ca02c";
    case Scheme::AOLP: return "#d62728";
    case Scheme::OLP: return "#9467bd";
    }
    return "#000000";
}

} // namespace detail

inline void emit_plot(const ResultsTable &table, std::ostream &os)
{
    if (table.rows.empty())
        throw std::invalid_argument("emit_plot: empty table");

    constexpr double width = 640, height = 420;
    constexpr double left = 80, right = 150, top = 30, bottom = 60;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto &r : table.rows) {
        xmin = std::min(xmin, r.value);
        xmax = std::max(xmax, r.value);
        if (std::isfinite(r.avg_power) && r.avg_power > 0.0) {
            ymin = std::min(ymin, r.avg_power);
            ymax = std::max(ymax, r.avg_power);
        }
    }
    if (!(xmax > xmin)) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    double lo = std::isfinite(ymin) ? std::floor(std::log10(ymin)) : -1.0;
    double hi = std::isfinite(ymax) ? std::ceil(std::log10(ymax)) : 0.0;
    if (!(hi > lo))
        hi = lo + 1.0;

    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (hi - std::log10(y)) / (hi - lo) * ph; };

    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
       << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
       << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph << "\"/>\n"
       << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int e = static_cast<int>(lo); e <= static_cast<int>(hi); ++e) {
        const double y = top + (hi - e) / (hi - lo) * ph;
        os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\"/>\n"
           << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        os << "<text x=\"" << px(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
           << detail::fmt_num(x, table.sweep == SweepVariable::Antennas ? "%.0f" : "%.2f") << "</text>\n";
    }
    os << "</g>\n"
       << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << (table.sweep == SweepVariable::Rate ? "Rate per user r [bit/s/Hz]" : "Number of BS antennas N")
       << "</text>\n"
       << "<text x=\"18\" y=\"" << top + ph / 2 << "\" transform=\"rotate(-90 18 " << top + ph / 2
       << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">Average transmit power [W]</text>\n";

    int legend = 0;
    for (Scheme s : kAllSchemes) {
        std::vector<const ResultsRow *> pts;
        for (const auto &r : table.rows)
            if (r.scheme == s)
                pts.push_back(&r);
        if (pts.empty())
            continue;
        std::sort(pts.begin(), pts.end(), [](auto *a, auto *b) { return a->value < b->value; });
        os << "<polyline class=\"series\" data-scheme=\"" << scheme_name(s) << "\" fill=\"none\" stroke=\""
           << detail::series_color(s) << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (auto *r : pts) {
            if (!(std::isfinite(r->avg_power) && r->avg_power > 0.0))
                continue;
            os << (first ? "" : " ") << detail::fmt_num(px(r->value), "%.3f") << ','
               << detail::fmt_num(py(r->avg_power), "%.3f");
            first = false;
        }
        os << "\"/>\n";
        const double ly = top + 16 + 18 * legend++;
        const double lx = left + pw + 12;
        os << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly - 4
           << "\" stroke=\"" << detail::series_color(s) << "\" stroke-width=\"1.5\"/>\n"
           << "<text class=\"legend\" x=\"" << lx + 30 << "\" y=\"" << ly
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << scheme_name(s) << "</text>\n";
    }
    os << "</svg>\n";
}

inline void emit_plot(const ResultsTable &table, const std::string &path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("emit_plot: cannot open '" + path + "' for writing");
    emit_plot(table, os);
    os.flush();
    if (!os)
        throw std::runtime_error("emit_plot: write to '" + path + "' failed");
}

} // namespace mimo::harness

#endif
