#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smx/dataset.hpp"
#include "smx/metric.hpp"
#include "smx/planar.hpp"

namespace smx {

enum class Structure {
    SatPure,
    SatDistalPure,
    SatDistalFixed,
    SatDistalLog,
    SatGlobalFixed,
    SatGlobalLog,
    HptFftBinary,
    HptFftFixed,
    HptFftLog,
    HptRandomBinary,
    HptRandomFixed,
    HptRandomLog,
    MonptRand,
    MonptFar,
    BalancedMonptRand,
    BalancedMonptFar,
    LrtRand,
    LrtFar,
    Vpt,
};

Structure parse_structure(std::string_view name);
std::string_view structure_name(Structure s);
const std::array<Structure, 19>& all_structures();

enum class Exclusion { Hyperbolic, Hilbert };

Exclusion parse_exclusion(std::string_view name);
std::string_view exclusion_name(Exclusion e);

struct IndexConfig {
    Structure structure = Structure::HptFftLog;
    std::uint64_t seed = 0;
    // 0 means the per-structure default (the node arity for n-ary trees,
    // 2 for the binary trees).
    std::size_t leaf_capacity = 0;
};

struct QueryReport {
    std::vector<std::uint32_t> result_ids; // sorted
    std::uint64_t distance_count = 0;
    std::uint64_t nodes_visited = 0;
};

// An immutable search tree over a dataset. Queries are read-only and safe to
// run concurrently; each carries its own distance counter.
class Index {
public:
    virtual ~Index() = default;

    // Exact range search. Hilbert exclusion is rejected unless the metric
    // has the four-point property.
    QueryReport range_query(std::span<const double> q, double t,
                            Exclusion exclusion) const;

    std::uint64_t build_distance_count() const { return build_distances_; }
    const IndexConfig& config() const { return config_; }
    const Metric& metric() const { return metric_; }

    // Every dataset index, as stored: each appears exactly once, either as a
    // pivot or in a leaf. Used by structural audits.
    std::vector<std::uint32_t> stored_ids() const;

protected:
    Index(const Dataset& data, const Metric& metric, const IndexConfig& config)
        : data_(&data), metric_(metric), config_(config) {}

    struct QueryCtx {
        std::span<const double> q;
        double t = 0.0;
        Exclusion exclusion = Exclusion::Hilbert;
        std::vector<std::uint32_t> results;
        std::uint64_t distances = 0;
        std::uint64_t nodes = 0;

        const Dataset* data = nullptr;
        const Metric* metric = nullptr;

        double dist(std::uint32_t id) {
            ++distances;
            return (*metric)(q, (*data)[id]);
        }
        void check(std::uint32_t id, double d) {
            if (d <= t) results.push_back(id);
        }
        void scan(std::span<const std::uint32_t> ids) {
            for (std::uint32_t id : ids) check(id, dist(id));
        }
    };

    virtual void run_query(QueryCtx& ctx) const = 0;
    virtual void collect_stored(std::vector<std::uint32_t>& out) const = 0;

    const Dataset* data_;
    Metric metric_;
    IndexConfig config_;
    std::uint64_t build_distances_ = 0;
};

std::unique_ptr<Index> build_index(const Dataset& data, const Metric& metric,
                                   const IndexConfig& config);

// --- pivot selection -------------------------------------------------------

using DistFn = std::function<double(std::uint32_t, std::uint32_t)>;

std::vector<std::uint32_t> select_random(std::span<const std::uint32_t> candidates,
                                         std::size_t k, std::uint64_t seed);

// Greedy farthest-first traversal; the first pivot is a uniform pick unless
// forced, each next pivot maximises its minimum distance to the chosen set.
std::vector<std::uint32_t> select_fft(std::span<const std::uint32_t> candidates,
                                      std::size_t k, std::uint64_t seed,
                                      const DistFn& dist,
                                      std::optional<std::uint32_t> first = {});

enum class SatOrder { Proximal, Distal, Global };

// Scans candidates in the given order of distance from the centre (Global
// scans by descending `global_key`), accepting a candidate iff it is strictly
// closer to the centre than to every already-accepted pivot. Stops at `cap`
// accepted pivots when cap != 0.
std::vector<std::uint32_t> select_sat(std::span<const std::uint32_t> candidates,
                                      std::uint32_t centre, SatOrder order,
                                      std::size_t cap, const DistFn& dist,
                                      const std::vector<double>* global_key = nullptr);

// --- exclusive-query counting ---------------------------------------------

// Number of projected sample points that, treated as queries at threshold t,
// cannot exclude the opposing semispace under the given predicate.
std::size_t count_non_exclusive(std::span<const PlanarPoint> sample, double delta,
                                double t, Exclusion exclusion);

} // namespace smx
