#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace smx {

// Image of a point under the two-pivot planar projection. The pivots sit at
// (-delta/2, 0) and (+delta/2, 0); apexes are drawn above the baseline.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

// Apex of the triangle with baseline delta and side lengths d1 (to the left
// pivot) and d2 (to the right pivot). Throws if delta <= 0 or the triple
// violates the triangle inequality beyond 1e-9 relative.
PlanarPoint project(double d1, double d2, double delta);

double planar_distance(const PlanarPoint& a, const PlanarPoint& b);

enum class Verdict { None, ExcludeP1Side, ExcludeP2Side };

// Triangle-inequality rule: the farther pivot's side goes when |d1-d2| > 2t.
Verdict hyperbolic_excludes(double d1, double d2, double t);

// Four-point rule: (d1^2 - d2^2)/delta > 2t excludes the p1 side, and
// symmetrically. Equivalent to comparing |project(d1,d2,delta).x| with t.
Verdict hilbert_excludes(double d1, double d2, double delta, double t);

// cr is the maximum distance from the pivot to any point of its partition.
bool cover_radius_excludes(double dq, double cr, double t);

struct RotationParams {
    double theta = 0.0; // in (-pi/2, pi/2]
    double h = 0.0;     // X-intercept of the best-fit line
    double m = 0.0;     // slope; meaningless when vertical
    bool vertical = false;
};

// Least-squares line through >= 2 points, as (theta, h). Degenerate cases:
// |m| < 1e-12 gives theta = 0, h = mean x; zero x-variance gives a vertical
// line (theta = pi/2, h = the shared x).
RotationParams fit_line(std::span<const PlanarPoint> points);

// Rigid rotation about (h, 0):
//   r_x = (x-h) cos(theta) - y sin(theta)
//   r_y = (x-h) sin(theta) + y cos(theta)
std::array<double, 2> rotate(const PlanarPoint& p, const RotationParams& params);

enum class PartitionStrategy {
    SplitXMedian,
    SplitYMedian,
    PcaMajor,
    PcaMinor,
    LrOrthogonal,
    LrParallel,
    RadialCentre,
    RadialCorner,
};

PartitionStrategy parse_strategy(std::string_view name);
std::string_view strategy_name(PartitionStrategy s);

// Median split on the strategy's scalar score; class sizes differ by at
// most 1 (ties broken by point index). Returns one 0/1 label per point.
std::vector<std::uint8_t> partition_labels(std::span<const PlanarPoint> points,
                                           PartitionStrategy strategy);

} // namespace smx
