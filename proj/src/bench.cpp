#include "smx/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "smx/oracle.hpp"
#include "smx/planar.hpp"
#include "smx/rng.hpp"

namespace smx {

namespace {

std::string selection_label(Structure s) {
    switch (s) {
        case Structure::SatPure: return "proximal";
        case Structure::SatDistalPure:
        case Structure::SatDistalFixed:
        case Structure::SatDistalLog: return "distal";
        case Structure::SatGlobalFixed:
        case Structure::SatGlobalLog: return "global";
        case Structure::HptFftBinary:
        case Structure::HptFftFixed:
        case Structure::HptFftLog: return "fft";
        case Structure::HptRandomBinary:
        case Structure::HptRandomFixed:
        case Structure::HptRandomLog: return "random";
        case Structure::MonptRand:
        case Structure::BalancedMonptRand:
        case Structure::LrtRand: return "rand";
        case Structure::MonptFar:
        case Structure::BalancedMonptFar:
        case Structure::LrtFar: return "far";
        case Structure::Vpt: return "random";
    }
    return "?";
}

Dataset shuffled_copy(const Dataset& d, std::uint64_t seed) {
    std::vector<std::uint32_t> idx(d.size());
    std::iota(idx.begin(), idx.end(), 0u);
    Rng rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    Dataset out;
    out.name = d.name;
    out.dim = d.dim;
    out.values.reserve(d.values.size());
    for (std::uint32_t i : idx) out.push_back(d[i]);
    return out;
}

} // namespace

BenchRow run_bench_cell(const Dataset& data, const Dataset& queries,
                        const Metric& metric, Structure structure,
                        Exclusion exclusion, double threshold,
                        const BenchOptions& opt) {
    if (data.size() == 0 || queries.size() == 0)
        throw std::invalid_argument("bench cell needs data and queries");
    if (threshold < 0.0) throw std::invalid_argument("threshold must be nonnegative");
    if (opt.max_repeats < 2)
        throw std::invalid_argument("need at least 2 repeats for a SEM");

    std::ostringstream tag;
    tag << "cell:" << structure_name(structure) << ':' << exclusion_name(exclusion)
        << ':' << metric.name() << ':' << threshold;
    const std::uint64_t cell_seed = derive_seed(opt.seed, tag.str());

    BenchRow row;
    row.structure = std::string(structure_name(structure));
    row.selection = selection_label(structure);
    row.exclusion = std::string(exclusion_name(exclusion));
    row.metric = metric.name();
    row.threshold = threshold;
    row.queries = queries.size();
    row.seed = opt.seed;

    const std::size_t n_verify =
        opt.verify_fraction > 0.0
            ? std::max<std::size_t>(
                  1, static_cast<std::size_t>(std::ceil(
                         opt.verify_fraction * static_cast<double>(queries.size()))))
            : 0;

    std::vector<double> build_means;
    for (int r = 0; r < opt.max_repeats; ++r) {
        const std::uint64_t build_seed = derive_seed(cell_seed, static_cast<std::uint64_t>(r));
        const Dataset shuffled = shuffled_copy(data, derive_seed(build_seed, "present"));
        IndexConfig cfg;
        cfg.structure = structure;
        cfg.seed = build_seed;
        const auto index = build_index(shuffled, metric, cfg);
        row.build_distances = index->build_distance_count();

        std::vector<std::uint32_t> verify_ids;
        if (n_verify) {
            std::vector<std::uint32_t> qidx(queries.size());
            std::iota(qidx.begin(), qidx.end(), 0u);
            Rng vr(derive_seed(build_seed, "verify"));
            std::shuffle(qidx.begin(), qidx.end(), vr);
            verify_ids.assign(qidx.begin(),
                              qidx.begin() + static_cast<std::ptrdiff_t>(
                                                 std::min(n_verify, qidx.size())));
            std::sort(verify_ids.begin(), verify_ids.end());
        }

        std::uint64_t total = 0;
        for (std::uint32_t qi = 0; qi < queries.size(); ++qi) {
            const auto report = index->range_query(queries[qi], threshold, exclusion);
            total += report.distance_count;
            if (n_verify &&
                std::binary_search(verify_ids.begin(), verify_ids.end(), qi)) {
                const auto truth = exhaustive_range(shuffled, metric, queries[qi], threshold);
                if (truth.result_ids != report.result_ids) {
                    std::ostringstream msg;
                    msg << "result mismatch: " << row.structure << '/' << row.exclusion
                        << " t=" << threshold << " query " << qi << " returned "
                        << report.result_ids.size() << " ids, exhaustive found "
                        << truth.result_ids.size();
                    throw VerificationError(msg.str());
                }
            }
        }
        build_means.push_back(static_cast<double>(total) /
                              static_cast<double>(queries.size()));

        const std::size_t k = build_means.size();
        if (k >= 3) {
            double mean = 0.0;
            for (double m : build_means) mean += m;
            mean /= static_cast<double>(k);
            double var = 0.0;
            for (double m : build_means) var += (m - mean) * (m - mean);
            var /= static_cast<double>(k - 1);
            const double sem = std::sqrt(var / static_cast<double>(k));
            row.mean_distances = mean;
            row.sem = mean > 0.0 ? sem / mean : 0.0;
            row.repeats = static_cast<int>(k);
            if (row.sem <= opt.sem_target) return row;
        }
    }

    // max_repeats hit with < 3 builds recorded above: finish the bookkeeping
    double mean = 0.0;
    for (double m : build_means) mean += m;
    mean /= static_cast<double>(build_means.size());
    double var = 0.0;
    for (double m : build_means) var += (m - mean) * (m - mean);
    if (build_means.size() > 1) var /= static_cast<double>(build_means.size() - 1);
    row.mean_distances = mean;
    row.sem = mean > 0.0 ? std::sqrt(var / static_cast<double>(build_means.size())) / mean : 0.0;
    row.repeats = static_cast<int>(build_means.size());
    return row;
}

// --- scatter ---------------------------------------------------------------

PivotMode parse_pivot_mode(std::string_view name) {
    if (name == "random") return PivotMode::Random;
    if (name == "far") return PivotMode::FarOf1000;
    if (name == "near") return PivotMode::NearOf1000;
    throw std::invalid_argument("unknown pivot mode '" + std::string(name) + "'");
}

ScatterResult run_scatter(const Dataset& data, const Metric& metric,
                          PivotMode mode, double threshold,
                          std::size_t sample_size, std::uint64_t seed) {
    if (data.size() < 3) throw std::invalid_argument("need at least 3 vectors");
    if (threshold < 0.0) throw std::invalid_argument("threshold must be nonnegative");

    Rng rng(derive_seed(seed, "scatter"));
    std::uniform_int_distribution<std::uint32_t> pick(
        0, static_cast<std::uint32_t>(data.size() - 1));

    ScatterResult out;
    out.threshold = threshold;
    if (mode == PivotMode::Random) {
        do {
            out.p1 = pick(rng);
            out.p2 = pick(rng);
            out.delta = out.p1 == out.p2 ? 0.0 : metric(data[out.p1], data[out.p2]);
        } while (!(out.delta > 0.0));
    } else {
        // extreme pair over a 1000-point sample; for "near" this drives the
        // separation below typical query diameters, the regime where plain
        // hyperbolic exclusion stops working entirely
        const bool want_far = mode == PivotMode::FarOf1000;
        std::vector<std::uint32_t> pool;
        while (pool.size() < std::min<std::size_t>(1000, data.size()))
            pool.push_back(pick(rng));
        double best = want_far ? -1.0 : std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                if (pool[i] == pool[j]) continue;
                const double d = metric(data[pool[i]], data[pool[j]]);
                if (!(d > 0.0)) continue;
                if (want_far ? d > best : d < best) {
                    best = d;
                    out.p1 = pool[i];
                    out.p2 = pool[j];
                    out.delta = d;
                }
            }
        if (!(out.delta > 0.0))
            throw std::runtime_error("no non-degenerate pivot pair in the sample");
    }

    std::vector<std::uint32_t> ids;
    ids.reserve(data.size());
    for (std::uint32_t i = 0; i < data.size(); ++i)
        if (i != out.p1 && i != out.p2) ids.push_back(i);
    std::shuffle(ids.begin(), ids.end(), rng);
    if (ids.size() > sample_size) ids.resize(sample_size);
    std::sort(ids.begin(), ids.end());

    for (std::uint32_t id : ids) {
        const double d1 = metric(data[id], data[out.p1]);
        const double d2 = metric(data[id], data[out.p2]);
        const auto p = project(d1, d2, out.delta);
        ScatterPoint sp;
        sp.id = id;
        sp.x = p.x;
        sp.y = p.y;
        sp.side = d1 <= d2 ? 0 : 1;
        sp.hilbert_exclusive = std::fabs(p.x) > threshold;
        sp.hyperbolic_exclusive = std::fabs(d1 - d2) > 2.0 * threshold;
        if (!sp.hilbert_exclusive) ++out.hilbert_non_exclusive;
        if (!sp.hyperbolic_exclusive) ++out.hyperbolic_non_exclusive;
        out.points.push_back(sp);
    }
    return out;
}

// --- dimension sweep -------------------------------------------------------

std::vector<DimSweepRow> run_dim_sweep(std::size_t dim_lo, std::size_t dim_hi,
                                       std::size_t n, std::size_t n_queries,
                                       int repeats, std::uint64_t seed) {
    if (dim_lo < 1 || dim_hi < dim_lo)
        throw std::invalid_argument("bad dimension range");
    if (n < 2 || n_queries < 1 || repeats < 1)
        throw std::invalid_argument("bad sweep parameters");

    const Metric metric(MetricKind::Euclidean);
    struct Variant {
        Structure structure;
        Exclusion exclusion;
        const char* selection;
    };
    const Variant variants[] = {
        {Structure::HptFftLog, Exclusion::Hilbert, "fft"},
        {Structure::HptFftLog, Exclusion::Hyperbolic, "fft"},
        {Structure::HptRandomLog, Exclusion::Hilbert, "random"},
        {Structure::HptRandomLog, Exclusion::Hyperbolic, "random"},
    };

    std::vector<DimSweepRow> rows;
    for (std::size_t dim = dim_lo; dim <= dim_hi; ++dim) {
        const std::uint64_t dim_seed = derive_seed(seed, "dim:" + std::to_string(dim));
        const Dataset data = generate_uniform(n, dim, derive_seed(dim_seed, "data"));
        const Dataset queries =
            generate_uniform(n_queries, dim, derive_seed(dim_seed, "queries"));
        // radius that captures one point in expectation
        const double t = calibrate_radius(dim, 1.0 / static_cast<double>(n));

        // trees are shared between the two exclusion modes of a selection
        for (int sel = 0; sel < 2; ++sel) {
            double total[2] = {0.0, 0.0};
            for (int r = 0; r < repeats; ++r) {
                IndexConfig cfg;
                cfg.structure = variants[sel * 2].structure;
                cfg.seed = derive_seed(dim_seed, static_cast<std::uint64_t>(sel * 1000 + r));
                const auto index = build_index(data, metric, cfg);
                for (std::uint32_t qi = 0; qi < queries.size(); ++qi) {
                    total[0] += static_cast<double>(
                        index->range_query(queries[qi], t, Exclusion::Hilbert)
                            .distance_count);
                    total[1] += static_cast<double>(
                        index->range_query(queries[qi], t, Exclusion::Hyperbolic)
                            .distance_count);
                }
            }
            for (int e = 0; e < 2; ++e) {
                DimSweepRow row;
                row.dim = dim;
                row.selection = variants[sel * 2].selection;
                row.exclusion = std::string(
                    exclusion_name(e == 0 ? Exclusion::Hilbert : Exclusion::Hyperbolic));
                row.threshold = t;
                row.mean_distances =
                    total[e] / static_cast<double>(queries.size()) / repeats;
                row.fraction_accessed = row.mean_distances / static_cast<double>(n);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

// --- scaling sweep ---------------------------------------------------------

std::vector<ScalingRow> run_scaling(const Dataset& data, const Metric& metric,
                                    const std::vector<std::size_t>& sizes,
                                    const std::vector<Structure>& structures,
                                    const std::vector<double>& fractions,
                                    std::size_t n_queries, std::uint64_t seed) {
    if (sizes.empty() || structures.empty() || fractions.empty())
        throw std::invalid_argument("scaling sweep needs sizes, structures, fractions");
    const std::size_t max_size = *std::max_element(sizes.begin(), sizes.end());
    if (max_size + n_queries > data.size())
        throw std::invalid_argument("requested size exceeds available data");

    // queries come off the tail, so every size indexes the same prefix
    Dataset queries;
    queries.dim = data.dim;
    queries.name = data.name + "-queries";
    for (std::size_t i = data.size() - n_queries; i < data.size(); ++i)
        queries.push_back(data[i]);

    // thresholds calibrated once, on the largest indexed prefix
    Dataset base;
    base.dim = data.dim;
    base.name = data.name;
    for (std::size_t i = 0; i < max_size; ++i) base.push_back(data[i]);

    std::vector<double> thresholds;
    for (double f : fractions) {
        const std::size_t pairs = std::min<std::size_t>(
            10'000'000, std::max<std::size_t>(10'000, static_cast<std::size_t>(
                                                          std::ceil(100.0 / f))));
        thresholds.push_back(
            calibrate_threshold(base, metric, f, pairs, derive_seed(seed, "scal-t")));
    }

    std::vector<ScalingRow> rows;
    for (std::size_t size : sizes) {
        Dataset subset;
        subset.dim = data.dim;
        subset.name = data.name;
        for (std::size_t i = 0; i < size; ++i) subset.push_back(data[i]);
        for (Structure s : structures) {
            IndexConfig cfg;
            cfg.structure = s;
            cfg.seed = derive_seed(seed, "scal:" + std::to_string(size) + ':' +
                                             std::string(structure_name(s)));
            const auto index = build_index(subset, metric, cfg);
            const Exclusion excl =
                metric.four_point() ? Exclusion::Hilbert : Exclusion::Hyperbolic;
            for (std::size_t fi = 0; fi < fractions.size(); ++fi) {
                std::uint64_t total = 0;
                for (std::uint32_t qi = 0; qi < queries.size(); ++qi)
                    total += index->range_query(queries[qi], thresholds[fi], excl)
                                 .distance_count;
                ScalingRow row;
                row.size = size;
                row.structure = std::string(structure_name(s));
                row.exclusion = std::string(exclusion_name(excl));
                row.fraction = fractions[fi];
                row.threshold = thresholds[fi];
                row.fraction_accessed = static_cast<double>(total) /
                                        static_cast<double>(queries.size()) /
                                        static_cast<double>(size);
                rows.push_back(row);
            }
        }
    }
    return rows;
}

// --- overhead --------------------------------------------------------------

ArityPolicy parse_arity_policy(std::string_view name) {
    if (name == "binary") return ArityPolicy::Binary;
    if (name == "fixed") return ArityPolicy::Fixed4;
    if (name == "log") return ArityPolicy::Log;
    throw std::invalid_argument("unknown arity policy '" + std::string(name) + "'");
}

namespace {

double overhead_rec(double n, ArityPolicy policy) {
    if (n <= 2.0) return 0.0;
    double p;
    switch (policy) {
        case ArityPolicy::Binary: p = 2.0; break;
        case ArityPolicy::Fixed4: p = 4.0; break;
        case ArityPolicy::Log: p = std::max(2.0, std::floor(std::log(n))); break;
        default: p = 2.0; break;
    }
    p = std::min(p, n);
    return p * (p - 1.0) / 2.0 * 4.0 + p * overhead_rec((n - p) / p, policy);
}

} // namespace

OverheadReport overhead_estimate(double n, ArityPolicy policy) {
    if (!(n >= 1.0)) throw std::invalid_argument("n must be >= 1");
    OverheadReport out;
    out.total_bytes = overhead_rec(n, policy);
    out.per_object = out.total_bytes / n;
    return out;
}

} // namespace smx
