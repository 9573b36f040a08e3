#include "llmcost/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace llmcost {

namespace {

constexpr double kWidth = 720, kHeight = 480, kLeft = 90, kRight = 160, kTop = 40, kBottom = 60;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string line_chart(const std::vector<Series>& series, const ChartOptions& o) {
    auto tx = [&](double x) { return o.log_x ? std::log10(x) : x; };
    auto ty = [&](double y) { return o.log_y ? std::log10(y) : y; };
    auto usable = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!o.log_x || x > 0) && (!o.log_y || y > 0);
    };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            if (!usable(x, y)) continue;
            x0 = std::min(x0, tx(x));
            x1 = std::max(x1, tx(x));
            y0 = std::min(y0, ty(y));
            y1 = std::max(y1, ty(y));
        }
    }
    if (!(x0 <= x1)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x0 == x1) x1 = x0 + 1;
    if (y0 == y1) y1 = y0 + 1;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - x0) / (x1 - x0) * pw; };
    auto py = [&](double y) { return kTop + ph - (ty(y) - y0) / (y1 - y0) * ph; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(o.title) << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = x0 + (x1 - x0) * i / 4.0, fy = y0 + (y1 - y0) * i / 4.0;
        const double vx = o.log_x ? std::pow(10.0, fx) : fx, vy = o.log_y ? std::pow(10.0, fy) : fy;
        svg << "<text x=\"" << fmt(kLeft + pw * i / 4.0) << "\" y=\"" << fmt(kTop + ph + 18)
            << "\" text-anchor=\"middle\">" << label(vx) << "</text>\n";
        svg << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(kTop + ph - ph * i / 4.0 + 4)
            << "\" text-anchor=\"end\">" << label(vy) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kHeight - 16)
        << "\" text-anchor=\"middle\">" << escape(o.x_label) << "</text>\n";
    svg << "<text x=\"16\" y=\"" << fmt(kTop + ph / 2) << "\" transform=\"rotate(-90 16 "
        << fmt(kTop + ph / 2) << ")\" text-anchor=\"middle\">" << escape(o.y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kColors[i % std::size(kColors)];
        std::string points;
        for (auto [x, y] : series[i].points) {
            if (!usable(x, y)) continue;
            points += fmt(px(x)) + "," + fmt(py(y)) + " ";
        }
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"" << points
            << "\"/>\n";
        const double ly = kTop + 16 + 18.0 * static_cast<double>(i);
        svg << "<line x1=\"" << fmt(kWidth - kRight + 12) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << fmt(kWidth - kRight + 32) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(kWidth - kRight + 38) << "\" y=\"" << fmt(ly) << "\">"
            << escape(series[i].name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace llmcost
