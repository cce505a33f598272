#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "smx/dataset.hpp"
#include "smx/metric.hpp"

namespace smx {

struct OracleAnswer {
    std::vector<std::uint32_t> result_ids; // sorted
    std::uint64_t distance_count = 0;      // always |S|
};

// Direct scan; the ground truth for every exactness check.
OracleAnswer exhaustive_range(const Dataset& d, const Metric& metric,
                              std::span<const double> q, double t);

struct QuadrupleViolation {
    std::uint32_t p1, p2, a, b;
    double planar;
    double direct;
};

struct QuadrupleReport {
    std::size_t samples = 0;
    std::vector<QuadrupleViolation> violations;
};

// Samples random quadruples (p1, p2, a, b), projects a and b against the
// pivot pair, and records every case where the planar distance exceeds
// d(a,b) by more than 1e-9 relative. Degenerate pivot pairs are resampled.
// An empty report certifies the planar lower bound on the sample.
QuadrupleReport quadruple_check(const Metric& metric, const Dataset& d,
                                std::size_t samples, std::uint64_t seed);

} // namespace smx
