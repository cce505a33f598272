#include "smx/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace smx {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string scatter_svg(const ScatterResult& r) {
    constexpr double kView = 800.0;
    constexpr double kPad = 40.0;

    double min_x = -r.delta / 2.0, max_x = r.delta / 2.0;
    double min_y = 0.0, max_y = r.delta / 4.0;
    for (const auto& p : r.points) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max(max_x - min_x, max_y - min_y);
    const double scale = span > 0.0 ? (kView - 2.0 * kPad) / span : 1.0;
    // axis-equal: one scale for both axes, content centred in the viewport
    const double cx = (min_x + max_x) / 2.0, cy = (min_y + max_y) / 2.0;
    auto sx = [&](double x) { return kView / 2.0 + (x - cx) * scale; };
    auto sy = [&](double y) { return kView / 2.0 - (y - cy) * scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
           "viewBox=\"0 0 800 800\">\n";
    out << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";

    // hyperplane between the pivots
    out << "<line x1=\"" << fmt(sx(0.0)) << "\" y1=\"0\" x2=\"" << fmt(sx(0.0))
        << "\" y2=\"800\" stroke=\"#bbbbbb\" stroke-dasharray=\"6 4\"/>\n";

    for (const auto& p : r.points) {
        const char* fill = p.hilbert_exclusive ? "#1f77b4" : "none";
        const char* stroke = p.hyperbolic_exclusive ? "#1f77b4" : "#d62728";
        out << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y))
            << "\" r=\"3\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
    }

    // pivot crosses on the baseline
    for (double px : {-r.delta / 2.0, r.delta / 2.0}) {
        const double x = sx(px), y = sy(0.0);
        out << "<path d=\"M" << fmt(x - 6) << ' ' << fmt(y - 6) << " L" << fmt(x + 6)
            << ' ' << fmt(y + 6) << " M" << fmt(x - 6) << ' ' << fmt(y + 6) << " L"
            << fmt(x + 6) << ' ' << fmt(y - 6) << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }

    // threshold-radius legend circle
    out << "<circle cx=\"60\" cy=\"740\" r=\"" << fmt(r.threshold * scale)
        << "\" fill=\"none\" stroke=\"#2ca02c\"/>\n";
    out << "<text x=\"60\" y=\"775\" font-size=\"14\" text-anchor=\"middle\">t = "
        << r.threshold << "</text>\n";
    out << "<text x=\"16\" y=\"28\" font-size=\"14\">delta = " << r.delta
        << ", hilbert non-exclusive " << r.hilbert_non_exclusive
        << ", hyperbolic non-exclusive " << r.hyperbolic_non_exclusive << "</text>\n";
    out << "</svg>\n";
    return out.str();
}

} // namespace smx
