#include "smx/planar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace smx {

namespace {

constexpr double kTriangleTol = 1e-9;
constexpr double kFlatSlope = 1e-12;

} // namespace

PlanarPoint project(double d1, double d2, double delta) {
    if (!(delta > 0.0))
        throw std::invalid_argument("planar projection requires delta > 0");
    const double scale = std::max({d1, d2, delta});
    const double slack = kTriangleTol * scale;
    if (d1 + d2 < delta - slack || d1 + delta < d2 - slack || d2 + delta < d1 - slack)
        throw std::invalid_argument("non-metric input: triangle inequality violated");

    const double x = (d1 * d1 - d2 * d2) / (2.0 * delta);
    const double from_p1 = x + delta / 2.0;
    // sqrt(max(0,.)) absorbs negative round-off for points on the baseline
    const double y = std::sqrt(std::max(0.0, d1 * d1 - from_p1 * from_p1));
    return {x, y};
}

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

Verdict hyperbolic_excludes(double d1, double d2, double t) {
    if (d1 - d2 > 2.0 * t) return Verdict::ExcludeP1Side;
    if (d2 - d1 > 2.0 * t) return Verdict::ExcludeP2Side;
    return Verdict::None;
}

Verdict hilbert_excludes(double d1, double d2, double delta, double t) {
    if (!(delta > 0.0))
        throw std::invalid_argument("hilbert exclusion requires delta > 0");
    const double lhs = (d1 * d1 - d2 * d2) / delta;
    if (lhs > 2.0 * t) return Verdict::ExcludeP1Side;
    if (-lhs > 2.0 * t) return Verdict::ExcludeP2Side;
    return Verdict::None;
}

bool cover_radius_excludes(double dq, double cr, double t) {
    return dq > cr + t;
}

RotationParams fit_line(std::span<const PlanarPoint> points) {
    if (points.size() < 2)
        throw std::invalid_argument("line fit requires at least 2 points");

    const double n = static_cast<double>(points.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : points) {
        sxx += (p.x - mx) * (p.x - mx);
        sxy += (p.x - mx) * (p.y - my);
    }

    RotationParams r;
    if (sxx == 0.0) {
        // all x identical: vertical line through the shared x
        r.vertical = true;
        r.theta = M_PI / 2.0;
        r.h = points[0].x;
        r.m = 0.0;
        return r;
    }
    r.m = sxy / sxx;
    if (std::fabs(r.m) < kFlatSlope) {
        r.theta = 0.0;
        r.h = mx;
        r.m = 0.0;
        return r;
    }
    r.theta = std::atan(r.m);
    r.h = mx - my / r.m;
    return r;
}

std::array<double, 2> rotate(const PlanarPoint& p, const RotationParams& params) {
    const double c = std::cos(params.theta), s = std::sin(params.theta);
    return {(p.x - params.h) * c - p.y * s, (p.x - params.h) * s + p.y * c};
}

PartitionStrategy parse_strategy(std::string_view name) {
    if (name == "split_x_median") return PartitionStrategy::SplitXMedian;
    if (name == "split_y_median") return PartitionStrategy::SplitYMedian;
    if (name == "pca_major") return PartitionStrategy::PcaMajor;
    if (name == "pca_minor") return PartitionStrategy::PcaMinor;
    if (name == "lr_orthogonal") return PartitionStrategy::LrOrthogonal;
    if (name == "lr_parallel") return PartitionStrategy::LrParallel;
    if (name == "radial_centre") return PartitionStrategy::RadialCentre;
    if (name == "radial_corner") return PartitionStrategy::RadialCorner;
    throw std::invalid_argument("unknown partition strategy '" + std::string(name) + "'");
}

std::string_view strategy_name(PartitionStrategy s) {
    switch (s) {
        case PartitionStrategy::SplitXMedian: return "split_x_median";
        case PartitionStrategy::SplitYMedian: return "split_y_median";
        case PartitionStrategy::PcaMajor: return "pca_major";
        case PartitionStrategy::PcaMinor: return "pca_minor";
        case PartitionStrategy::LrOrthogonal: return "lr_orthogonal";
        case PartitionStrategy::LrParallel: return "lr_parallel";
        case PartitionStrategy::RadialCentre: return "radial_centre";
        case PartitionStrategy::RadialCorner: return "radial_corner";
    }
    return "?";
}

namespace {

// unit direction of the principal component (major or minor) of the 2D cloud
std::array<double, 2> pca_direction(std::span<const PlanarPoint> pts, bool major) {
    const double n = static_cast<double>(pts.size());
    double mx = 0.0, my = 0.0;
    for (const auto& p : pts) {
        mx += p.x;
        my += p.y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        const double dx = p.x - mx, dy = p.y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    // eigenvector of [[sxx, sxy], [sxy, syy]]
    const double tr = sxx + syy;
    const double det = sxx * syy - sxy * sxy;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    const double lambda = tr / 2.0 + (major ? disc : -disc);
    double vx, vy;
    if (std::fabs(sxy) > 1e-300) {
        vx = lambda - syy;
        vy = sxy;
    } else {
        const bool x_first = (sxx >= syy) == major;
        vx = x_first ? 1.0 : 0.0;
        vy = x_first ? 0.0 : 1.0;
    }
    const double norm = std::hypot(vx, vy);
    return {vx / norm, vy / norm};
}

std::vector<double> strategy_scores(std::span<const PlanarPoint> pts,
                                    PartitionStrategy strategy) {
    std::vector<double> score(pts.size());
    switch (strategy) {
        case PartitionStrategy::SplitXMedian:
            for (std::size_t i = 0; i < pts.size(); ++i) score[i] = pts[i].x;
            break;
        case PartitionStrategy::SplitYMedian:
            for (std::size_t i = 0; i < pts.size(); ++i) score[i] = pts[i].y;
            break;
        case PartitionStrategy::PcaMajor:
        case PartitionStrategy::PcaMinor: {
            const auto dir =
                pca_direction(pts, strategy == PartitionStrategy::PcaMajor);
            for (std::size_t i = 0; i < pts.size(); ++i)
                score[i] = pts[i].x * dir[0] + pts[i].y * dir[1];
            break;
        }
        case PartitionStrategy::LrOrthogonal:
        case PartitionStrategy::LrParallel: {
            const auto params = fit_line(pts);
            const bool along = strategy == PartitionStrategy::LrOrthogonal;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const auto r = rotate(pts[i], params);
                score[i] = along ? r[0] : r[1];
            }
            break;
        }
        case PartitionStrategy::RadialCentre: {
            double mx = 0.0, my = 0.0;
            for (const auto& p : pts) {
                mx += p.x;
                my += p.y;
            }
            mx /= static_cast<double>(pts.size());
            my /= static_cast<double>(pts.size());
            for (std::size_t i = 0; i < pts.size(); ++i)
                score[i] = std::hypot(pts[i].x - mx, pts[i].y - my);
            break;
        }
        case PartitionStrategy::RadialCorner: {
            double cx = pts[0].x, cy = pts[0].y;
            for (const auto& p : pts) {
                cx = std::min(cx, p.x);
                cy = std::max(cy, p.y);
            }
            for (std::size_t i = 0; i < pts.size(); ++i)
                score[i] = std::hypot(pts[i].x - cx, pts[i].y - cy);
            break;
        }
    }
    return score;
}

} // namespace

std::vector<std::uint8_t> partition_labels(std::span<const PlanarPoint> points,
                                           PartitionStrategy strategy) {
    if (points.empty()) return {};
    const auto score = strategy_scores(points, strategy);
    std::vector<std::uint32_t> order(points.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return score[a] < score[b] || (score[a] == score[b] && a < b);
    });
    std::vector<std::uint8_t> label(points.size(), 1);
    for (std::size_t r = 0; r < points.size() / 2; ++r) label[order[r]] = 0;
    return label;
}

} // namespace smx
