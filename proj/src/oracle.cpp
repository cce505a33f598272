#include "smx/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "smx/planar.hpp"
#include "smx/rng.hpp"

namespace smx {

OracleAnswer exhaustive_range(const Dataset& d, const Metric& metric,
                              std::span<const double> q, double t) {
    if (t < 0.0) throw std::invalid_argument("threshold must be nonnegative");
    OracleAnswer ans;
    for (std::uint32_t i = 0; i < d.size(); ++i) {
        ++ans.distance_count;
        if (metric(q, d[i]) <= t) ans.result_ids.push_back(i);
    }
    return ans;
}

QuadrupleReport quadruple_check(const Metric& metric, const Dataset& d,
                                std::size_t samples, std::uint64_t seed) {
    if (samples < 1) throw std::invalid_argument("samples must be >= 1");
    if (d.size() < 4) throw std::invalid_argument("need at least 4 vectors");

    Rng rng(derive_seed(seed, "quadruple"));
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(d.size() - 1));

    QuadrupleReport report;
    while (report.samples < samples) {
        const std::uint32_t p1 = pick(rng), p2 = pick(rng);
        const std::uint32_t a = pick(rng), b = pick(rng);
        if (p1 == p2 || a == b || a == p1 || a == p2 || b == p1 || b == p2) continue;
        const double delta = metric(d[p1], d[p2]);
        if (delta == 0.0) continue; // degenerate pivot pair, resample
        ++report.samples;

        const auto pa = project(metric(d[a], d[p1]), metric(d[a], d[p2]), delta);
        const auto pb = project(metric(d[b], d[p1]), metric(d[b], d[p2]), delta);
        const double planar = planar_distance(pa, pb);
        const double direct = metric(d[a], d[b]);
        if (planar > direct + 1e-9 * direct)
            report.violations.push_back({p1, p2, a, b, planar, direct});
    }
    return report;
}

} // namespace smx
