#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "teich/io.hpp"

namespace teich {

struct SvgSeries {
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained line-and-marker plot with min/max axis labels.
inline std::string svg_line_plot(const SvgSeries& s, const std::string& title, const std::string& x_label,
                                 const std::string& y_label)
{
    constexpr double W = 480, H = 320, L = 70, R = 20, T = 40, B = 50;
    double x0 = *std::min_element(s.x.begin(), s.x.end());
    double x1 = *std::max_element(s.x.begin(), s.x.end());
    double y0 = *std::min_element(s.y.begin(), s.y.end());
    double y1 = *std::max_element(s.y.begin(), s.y.end());
    if (x1 == x0)
        x1 = x0 + 1;
    const double pad = std::max(0.05 * (y1 - y0), 1e-3 * std::max(std::abs(y0), std::abs(y1)));
    y0 -= pad;
    y1 += pad;
    if (y1 == y0)
        y1 = y0 + 1;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"320\" viewBox=\"0 0 480 320\">\n";
    out += "<rect width=\"480\" height=\"320\" fill=\"white\"/>\n";
    out += "<text x=\"240\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";
    out += "<line x1=\"70\" y1=\"270\" x2=\"460\" y2=\"270\" stroke=\"black\"/>\n";
    out += "<line x1=\"70\" y1=\"40\" x2=\"70\" y2=\"270\" stroke=\"black\"/>\n";
    out += "<text x=\"265\" y=\"305\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + x_label + "</text>\n";
    out += "<text x=\"14\" y=\"155\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 155)\">" + y_label + "</text>\n";
    for (double y : {y0, y1})
        out += "<text x=\"66\" y=\"" + format_number(py(y) + 4) + "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"9\">" +
               format_number(y) + "</text>\n";
    for (double x : s.x)
        out += "<text x=\"" + format_number(px(x)) + "\" y=\"285\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
               format_number(x) + "</text>\n";
    std::string path;
    for (std::size_t i = 0; i < s.x.size(); ++i)
        path += (i ? " L " : "M ") + format_number(px(s.x[i])) + " " + format_number(py(s.y[i]));
    out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
        out += "<circle cx=\"" + format_number(px(s.x[i])) + "\" cy=\"" + format_number(py(s.y[i])) + "\" r=\"4\" fill=\"steelblue\"/>\n";
    out += "</svg>\n";
    return out;
}

} // namespace teich
