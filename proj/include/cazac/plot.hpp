// Minimal standalone SVG line plots. Presentation only: every check reads the CSV tables.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cazac::plot {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Style {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 480;
};

namespace detail {
inline std::string num(double v)
{
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.2f", v);
    return buf.data();
}

inline std::string tick_label(double v)
{
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.4g", v);
    return buf.data();
}

inline std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text) {
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

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    [[nodiscard]] double map(double v) const { return log ? std::log10(v) : v; }
    [[nodiscard]] double unit(double v) const { return (map(v) - lo) / (hi - lo); }

    [[nodiscard]] std::vector<double> ticks() const
    {
        std::vector<double> out;
        if (log) {
            for (double e = std::ceil(lo); e <= hi + 1e-9; e += 1.0) out.push_back(std::pow(10.0, e));
            return out;
        }
        const double raw = (hi - lo) / 6.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double f : {1.0, 2.0, 5.0, 10.0}) {
            if (f * mag >= raw) {
                step = f * mag;
                break;
            }
        }
        for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) out.push_back(t);
        return out;
    }
};

inline bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

inline Axis make_axis(const std::vector<double>& values, bool log)
{
    Axis axis{log, std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double v : values) {
        axis.lo = std::min(axis.lo, axis.map(v));
        axis.hi = std::max(axis.hi, axis.map(v));
    }
    if (axis.hi - axis.lo < 1e-12) {
        axis.lo -= 0.5;
        axis.hi += 0.5;
    }
    if (log) {
        axis.lo = std::floor(axis.lo);
        axis.hi = std::ceil(axis.hi);
    }
    return axis;
}
} // namespace detail

/// Renders the series to an SVG document. Points that are non-finite, or non-positive on
/// a log axis, are skipped. Throws if nothing is left to draw.
inline std::string render_svg(const std::vector<Series>& series, const Style& style)
{
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("plot: series '" + s.label + "' x/y size mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (detail::usable(s.x[i], style.log_x) && detail::usable(s.y[i], style.log_y)) {
                xs.push_back(s.x[i]);
                ys.push_back(s.y[i]);
            }
        }
    }
    if (xs.empty()) throw std::invalid_argument("plot: no data to draw");

    const auto ax = detail::make_axis(xs, style.log_x);
    const auto ay = detail::make_axis(ys, style.log_y);
    const double left = 80, right = 170, top = 40, bottom = 60;
    const double pw = style.width - left - right;
    const double ph = style.height - top - bottom;
    auto px = [&](double v) { return left + ax.unit(v) * pw; };
    auto py = [&](double v) { return top + (1.0 - ay.unit(v)) * ph; };

    static constexpr std::array<const char*, 6> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};
    using detail::num;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\"" << style.height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
        << detail::escape(style.title) << "</text>\n";
    svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ax.ticks()) {
        const double x = left + (ax.map(t) - ax.lo) / (ax.hi - ax.lo) * pw;
        svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\"" << num(top + ph)
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << num(x) << "\" y=\"" << num(top + ph + 16) << "\" text-anchor=\"middle\">"
            << detail::tick_label(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = top + (1.0 - (ay.map(t) - ay.lo) / (ay.hi - ay.lo)) * ph;
        svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(y)
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << num(left - 6) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
            << detail::tick_label(t) << "</text>\n";
    }
    svg << "<text x=\"" << num(left + pw / 2) << "\" y=\"" << num(style.height - 16.0)
        << "\" text-anchor=\"middle\">" << detail::escape(style.x_label) << "</text>\n";
    svg << "<text transform=\"translate(20," << num(top + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << detail::escape(style.y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = palette[k % palette.size()];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!detail::usable(s.x[i], style.log_x) || !detail::usable(s.y[i], style.log_y)) continue;
            svg << (first ? "" : " ") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
            first = false;
        }
        svg << "\"/>\n";
        const double ly = top + 16.0 + 18.0 * static_cast<double>(k);
        svg << "<line x1=\"" << num(left + pw + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + pw + 30)
            << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << num(left + pw + 36) << "\" y=\"" << num(ly + 4) << "\">" << detail::escape(s.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace cazac::plot
