#include "pentimento/svg_plot.hpp"

#include "pentimento/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace pentimento {

namespace {

// Roughly five "nice" tick values covering [lo, hi].
std::vector<double> ticks(double lo, double hi) {
    const double span = hi - lo;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw)
            break;
    }
    std::vector<double> out;
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step)
        out.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    return out;
}

std::string escape(const std::string& s) {
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

} // namespace

std::string render_svg(const ExperimentData& data, const PlotOptions& options) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    std::size_t points = 0;
    for (const auto& r : data.routes) {
        for (std::size_t i = 0; i < r.hours.size(); ++i) {
            x0 = std::min(x0, r.hours[i]);
            x1 = std::max(x1, r.hours[i]);
            y0 = std::min(y0, r.delta_ps[i]);
            y1 = std::max(y1, r.delta_ps[i]);
            ++points;
        }
    }
    if (points == 0)
        throw DataError("nothing to plot: the series is empty");
    if (x1 == x0) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 == y0) {
        y0 -= 1.0;
        y1 += 1.0;
    } else {
        const double pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }

    const double left = 70, right = 20, top = 40, bottom = 50;
    const double pw = options.width - left - right;
    const double ph = options.height - top - bottom;
    auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
        "viewBox=\"0 0 {} {}\">\n",
        options.width, options.height, options.width, options.height);
    svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", options.width,
                       options.height);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
        "text-anchor=\"middle\">{}</text>\n",
        options.width / 2.0, escape(options.title));

    svg += "<g stroke=\"#dddddd\" stroke-width=\"1\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (double t : ticks(x0, x1)) {
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\"/>\n",
                           sx(t), top, top + ph);
        svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\" fill=\"black\" "
            "text-anchor=\"middle\">{}</text>\n",
            sx(t), top + ph + 16, fmt::format("{:g}", t));
    }
    for (double t : ticks(y0, y1)) {
        svg += fmt::format("<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>\n",
                           left, sy(t), left + pw);
        svg += fmt::format(
            "<text x=\"{:.2f}\" y=\"{:.2f}\" stroke=\"none\" fill=\"black\" "
            "text-anchor=\"end\">{}</text>\n",
            left - 6, sy(t) + 4, fmt::format("{:g}", t));
    }
    svg += "</g>\n";
    svg += fmt::format(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
        left, top, pw, ph);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{:.1f}\" font-family=\"sans-serif\" font-size=\"13\" "
        "text-anchor=\"middle\">hour</text>\n",
        left + pw / 2, static_cast<double>(options.height) - 12);
    svg += fmt::format(
        "<text x=\"16\" y=\"{0:.1f}\" font-family=\"sans-serif\" font-size=\"13\" "
        "text-anchor=\"middle\" transform=\"rotate(-90 16 {0:.1f})\">delta ps</text>\n",
        top + ph / 2);

    for (std::size_t k = 0; k < data.routes.size(); ++k) {
        const auto& r = data.routes[k];
        if (r.hours.empty())
            continue;
        const char* colour = "#888888";
        if (data.truth)
            colour = data.truth->bits[k] ? "#ff00ff" : "#00bcd4";
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" "
                           "stroke-opacity=\"0.7\" data-route=\"{}\" points=\"",
                           colour, escape(r.route_id));
        for (std::size_t i = 0; i < r.hours.size(); ++i)
            svg += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", sx(r.hours[i]), sy(r.delta_ps[i]));
        svg += "\"/>\n";
    }

    if (data.truth) {
        svg += fmt::format(
            "<g font-family=\"sans-serif\" font-size=\"12\">"
            "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#00bcd4\" "
            "stroke-width=\"3\"/><text x=\"{3:.1f}\" y=\"{4:.1f}\">Burn 0</text>"
            "<line x1=\"{0:.1f}\" y1=\"{5:.1f}\" x2=\"{2:.1f}\" y2=\"{5:.1f}\" stroke=\"#ff00ff\" "
            "stroke-width=\"3\"/><text x=\"{3:.1f}\" y=\"{6:.1f}\">Burn 1</text></g>\n",
            left + 10, top + 14, left + 30, left + 36, top + 18, top + 32, top + 36);
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace pentimento
