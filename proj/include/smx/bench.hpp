#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "smx/dataset.hpp"
#include "smx/index.hpp"
#include "smx/metric.hpp"

namespace smx {

struct BenchOptions {
    double sem_target = 0.01; // relative standard error of the mean
    int max_repeats = 50;
    std::uint64_t seed = 0;
    // fraction of queries cross-checked against exhaustive search per build;
    // 0 disables verification
    double verify_fraction = 0.0;
};

struct BenchRow {
    std::string structure;
    std::string selection;
    std::string exclusion;
    std::string metric;
    double threshold = 0.0;
    double mean_distances = 0.0; // mean over per-build means
    double sem = 0.0;            // relative to mean_distances
    int repeats = 0;
    std::uint64_t build_distances = 0; // from the last build
    std::size_t queries = 0;
    std::uint64_t seed = 0;
};

class VerificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One benchmark cell: rebuild on seeded shuffles of the data and run the
// whole query set until the SEM of the per-build means reaches the target
// (or max_repeats). Throws VerificationError on any oracle mismatch.
BenchRow run_bench_cell(const Dataset& data, const Dataset& queries,
                        const Metric& metric, Structure structure,
                        Exclusion exclusion, double threshold,
                        const BenchOptions& opt);

// --- scatter / exclusive-query study --------------------------------------

enum class PivotMode { Random, FarOf1000, NearOf1000 };

PivotMode parse_pivot_mode(std::string_view name);

struct ScatterPoint {
    std::uint32_t id;
    double x, y;
    int side; // 0 = nearer p1, 1 = nearer p2
    bool hilbert_exclusive;
    bool hyperbolic_exclusive;
};

struct ScatterResult {
    std::uint32_t p1 = 0, p2 = 0;
    double delta = 0.0;
    double threshold = 0.0;
    std::vector<ScatterPoint> points;
    std::size_t hilbert_non_exclusive = 0;
    std::size_t hyperbolic_non_exclusive = 0;
};

ScatterResult run_scatter(const Dataset& data, const Metric& metric,
                          PivotMode mode, double threshold,
                          std::size_t sample_size, std::uint64_t seed);

// --- dimension sweep -------------------------------------------------------

struct DimSweepRow {
    std::size_t dim = 0;
    std::string selection; // fft | random
    std::string exclusion;
    double threshold = 0.0;
    double mean_distances = 0.0;
    double fraction_accessed = 0.0;
};

// Uniform hypercube data per dimension, threshold set to the radius
// returning one point in expectation; the four log-arity hyperplane tree
// variants are measured, averaged over `repeats` builds.
std::vector<DimSweepRow> run_dim_sweep(std::size_t dim_lo, std::size_t dim_hi,
                                       std::size_t n, std::size_t n_queries,
                                       int repeats, std::uint64_t seed);

// --- scaling sweep ---------------------------------------------------------

struct ScalingRow {
    std::size_t size = 0;
    std::string structure;
    std::string exclusion;
    double fraction = 0.0; // requested result fraction
    double threshold = 0.0;
    double fraction_accessed = 0.0;
};

std::vector<ScalingRow> run_scaling(const Dataset& data, const Metric& metric,
                                    const std::vector<std::size_t>& sizes,
                                    const std::vector<Structure>& structures,
                                    const std::vector<double>& fractions,
                                    std::size_t n_queries, std::uint64_t seed);

// --- space-overhead estimate -----------------------------------------------

enum class ArityPolicy { Binary, Fixed4, Log };

ArityPolicy parse_arity_policy(std::string_view name);

struct OverheadReport {
    double total_bytes = 0.0;
    double per_object = 0.0;
};

// Stored inter-pivot distances for a balanced tree, 4 bytes each:
//   overhead(N) = 0 for N <= 2
//   overhead(N) = C(p,2)*4 + p*overhead((N-p)/p), p per arity policy
OverheadReport overhead_estimate(double n, ArityPolicy policy);

} // namespace smx
