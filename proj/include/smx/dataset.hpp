#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smx/metric.hpp"

namespace smx {

// Fixed-dimension dense vectors in one flat buffer.
struct Dataset {
    std::string name;
    std::size_t dim = 0;
    std::vector<double> values;

    std::size_t size() const { return dim == 0 ? 0 : values.size() / dim; }

    std::span<const double> operator[](std::size_t i) const {
        return {values.data() + i * dim, dim};
    }

    void push_back(std::span<const double> v);
};

// Whitespace-separated reals, one vector per line. A first line of exactly
// two integer tokens is read as a "count dim" header; otherwise the shape is
// inferred. Ragged or non-numeric rows are parse errors naming the line.
Dataset load_ascii(const std::filesystem::path& path);

// Values rendered with 9 significant digits; load(save(d)) matches d within
// 1e-9 relative.
void save_ascii(const Dataset& d, const std::filesystem::path& path);

Dataset generate_uniform(std::size_t n, std::size_t dim, std::uint64_t seed);

// Seeded disjoint split; the query part gets round(fraction * n) vectors.
std::pair<Dataset, Dataset> split_queries(const Dataset& d, double fraction,
                                          std::uint64_t seed);

// Radius of a Euclidean ball whose volume is `fraction` of the unit
// hypercube, boundary effects ignored:
//   r = (fraction * Gamma(dim/2 + 1) / pi^(dim/2))^(1/dim)
double calibrate_radius(std::size_t dim, double fraction);

// fraction-quantile of sampled pairwise distances.
double calibrate_threshold(const Dataset& d, const Metric& metric,
                           double fraction, std::size_t sample_pairs,
                           std::uint64_t seed);

// mu^2 / (2 sigma^2) over sampled pairwise distances.
double intrinsic_dimensionality(const Dataset& d, const Metric& metric,
                                std::size_t sample_pairs, std::uint64_t seed);

} // namespace smx
