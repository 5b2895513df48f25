#include "shp/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace shp {

namespace {

std::string f3(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// evenly spaced hues, fixed saturation/lightness
std::string palette_color(int i, int n) {
    const double h = std::fmod(47.0 + 360.0 * i / std::max(1, n), 360.0);
    const double s = 0.62, l = 0.58;
    const double c = (1.0 - std::fabs(2.0 * l - 1.0)) * s;
    const double x = c * (1.0 - std::fabs(std::fmod(h / 60.0, 2.0) - 1.0));
    const double m = l - c / 2.0;
    double r = 0, g = 0, b = 0;
    if (h < 60) {
        r = c; g = x;
    } else if (h < 120) {
        r = x; g = c;
    } else if (h < 180) {
        g = c; b = x;
    } else if (h < 240) {
        g = x; b = c;
    } else if (h < 300) {
        r = x; b = c;
    } else {
        r = c; b = x;
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>((r + m) * 255),
                  static_cast<int>((g + m) * 255), static_cast<int>((b + m) * 255));
    return buf;
}

}  // namespace

std::string plan_to_svg(const AdjacencyGraph& graph,
                        const std::vector<std::vector<int>>& plan) {
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (const auto& b : graph.blocks()) {
        min_x = std::min(min_x, b.x);
        max_x = std::max(max_x, b.x);
        min_y = std::min(min_y, b.y);
        max_y = std::max(max_y, b.y);
    }
    const double pad = 1.0;
    const double w = max_x - min_x + 2 * pad, h = max_y - min_y + 2 * pad;

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << f3(w) << " " << f3(h)
       << "\">\n";
    os << "<rect width=\"" << f3(w) << "\" height=\"" << f3(h) << "\" fill=\"#ffffff\"/>\n";
    const int k = static_cast<int>(plan.size());
    for (int d = 0; d < k; ++d) {
        const std::string color = palette_color(d, k);
        for (int b : plan[d]) {
            const auto& blk = graph.block(b);
            const double side = blk.area > 0.0 ? std::sqrt(blk.area) : 1.0;
            const double x = blk.x - min_x + pad - side / 2.0;
            const double y = (max_y - blk.y) + pad - side / 2.0;  // flip y for SVG
            os << "<rect x=\"" << f3(x) << "\" y=\"" << f3(y) << "\" width=\"" << f3(side)
               << "\" height=\"" << f3(side) << "\" fill=\"" << color
               << "\" stroke=\"#333333\" stroke-width=\"0.02\"/>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

void render_plan(const AdjacencyGraph& graph, const std::vector<std::vector<int>>& plan,
                 const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write SVG: " + path);
    out << plan_to_svg(graph, plan);
}

std::string boxplot_svg(const std::vector<std::string>& labels,
                        const std::vector<std::vector<double>>& series,
                        const std::string& title) {
    const double width = 120.0 * std::max<std::size_t>(1, series.size()) + 80.0;
    const double height = 320.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series)
        for (double v : s) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi <= lo) hi = lo + 1.0;
    auto ypix = [&](double v) { return 280.0 - 240.0 * (v - lo) / (hi - lo); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f3(width) << "\" height=\""
       << f3(height) << "\">\n";
    os << "<text x=\"10\" y=\"20\" font-size=\"14\">" << title << "</text>\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto v = series[i];
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        auto q = [&](double p) {
            const double idx = p * (v.size() - 1);
            const std::size_t a = static_cast<std::size_t>(idx);
            const double f = idx - a;
            return a + 1 < v.size() ? v[a] * (1 - f) + v[a + 1] * f : v[a];
        };
        const double cx = 80.0 + 120.0 * i + 40.0;
        const double bw = 50.0;
        os << "<line x1=\"" << f3(cx) << "\" y1=\"" << f3(ypix(v.front())) << "\" x2=\"" << f3(cx)
           << "\" y2=\"" << f3(ypix(v.back())) << "\" stroke=\"#444\"/>\n";
        os << "<rect x=\"" << f3(cx - bw / 2) << "\" y=\"" << f3(ypix(q(0.75))) << "\" width=\""
           << f3(bw) << "\" height=\"" << f3(ypix(q(0.25)) - ypix(q(0.75)))
           << "\" fill=\"" << palette_color(static_cast<int>(i), static_cast<int>(series.size()))
           << "\" fill-opacity=\"0.6\" stroke=\"#222\"/>\n";
        os << "<line x1=\"" << f3(cx - bw / 2) << "\" y1=\"" << f3(ypix(q(0.5))) << "\" x2=\""
           << f3(cx + bw / 2) << "\" y2=\"" << f3(ypix(q(0.5))) << "\" stroke=\"#000\"/>\n";
        os << "<text x=\"" << f3(cx - bw / 2) << "\" y=\"305\" font-size=\"12\">"
           << (i < labels.size() ? labels[i] : "") << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace shp
