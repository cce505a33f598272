#include "smx/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "smx/rng.hpp"

namespace smx {

namespace {

[[noreturn]] void parse_error(const std::filesystem::path& path, std::size_t line,
                              const std::string& what) {
    throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what);
}

bool is_integer_token(const std::string& tok) {
    if (tok.empty()) return false;
    std::size_t i = (tok[0] == '+' || tok[0] == '-') ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    return true;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

} // namespace

void Dataset::push_back(std::span<const double> v) {
    if (dim == 0) dim = v.size();
    if (v.size() != dim) throw std::invalid_argument("vector dimension mismatch");
    values.insert(values.end(), v.begin(), v.end());
}

Dataset load_ascii(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    Dataset d;
    d.name = path.stem().string();

    std::string line;
    std::size_t lineno = 0;
    std::size_t declared_count = 0;
    bool have_header = false;
    bool first_content = true;

    while (std::getline(in, line)) {
        ++lineno;
        const auto toks = tokenize(line);
        if (toks.empty()) continue;

        // A first line of exactly two integer tokens is a "count dim" header.
        if (first_content && toks.size() == 2 && is_integer_token(toks[0]) &&
            is_integer_token(toks[1])) {
            declared_count = std::stoull(toks[0]);
            d.dim = std::stoull(toks[1]);
            if (d.dim == 0) parse_error(path, lineno, "header declares dim 0");
            have_header = true;
            first_content = false;
            continue;
        }
        first_content = false;

        if (d.dim == 0) d.dim = toks.size();
        if (toks.size() != d.dim)
            parse_error(path, lineno,
                        "ragged row: expected " + std::to_string(d.dim) +
                            " values, got " + std::to_string(toks.size()));
        for (const auto& tok : toks) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end != tok.c_str() + tok.size())
                parse_error(path, lineno, "non-numeric token '" + tok + "'");
            if (!std::isfinite(v))
                parse_error(path, lineno, "non-finite value '" + tok + "'");
            d.values.push_back(v);
        }
    }

    if (d.size() == 0) throw std::runtime_error(path.string() + ": empty file");
    if (have_header && declared_count != d.size())
        throw std::runtime_error(path.string() + ": header declares " +
                                 std::to_string(declared_count) + " vectors, file has " +
                                 std::to_string(d.size()));
    return d;
}

void save_ascii(const Dataset& d, const std::filesystem::path& path) {
    std::FILE* out = std::fopen(path.string().c_str(), "w");
    if (!out) throw std::runtime_error("cannot write " + path.string());
    std::fprintf(out, "%zu %zu\n", d.size(), d.dim);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto v = d[i];
        for (std::size_t j = 0; j < d.dim; ++j)
            std::fprintf(out, j + 1 == d.dim ? "%.9g\n" : "%.9g ", v[j]);
    }
    std::fclose(out);
}

Dataset generate_uniform(std::size_t n, std::size_t dim, std::uint64_t seed) {
    if (n == 0 || dim == 0)
        throw std::invalid_argument("generate_uniform requires n, dim >= 1");
    Dataset d;
    d.name = "uniform-" + std::to_string(dim) + "d";
    d.dim = dim;
    d.values.resize(n * dim);
    Rng rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : d.values) v = u(rng);
    return d;
}

std::pair<Dataset, Dataset> split_queries(const Dataset& d, double fraction,
                                          std::uint64_t seed) {
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw std::invalid_argument("query fraction must lie in (0, 1)");
    const std::size_t n = d.size();
    const std::size_t k = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(n)));

    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    Rng rng(derive_seed(seed, "split"));
    std::shuffle(idx.begin(), idx.end(), rng);

    Dataset queries, rest;
    queries.name = d.name + "-queries";
    rest.name = d.name;
    queries.dim = rest.dim = d.dim;
    queries.values.reserve(k * d.dim);
    rest.values.reserve((n - k) * d.dim);
    for (std::size_t i = 0; i < n; ++i)
        (i < k ? queries : rest).push_back(d[idx[i]]);
    return {rest, queries};
}

double calibrate_radius(std::size_t dim, double fraction) {
    if (dim == 0) throw std::invalid_argument("dim must be >= 1");
    if (!(fraction > 0.0) || !(fraction < 1.0))
        throw std::invalid_argument("volume fraction must lie in (0, 1)");
    // Inverse of the n-ball volume V(r) = pi^(d/2) r^d / Gamma(d/2 + 1),
    // evaluated in logs for stability at high dim.
    const double n = static_cast<double>(dim);
    const double log_r =
        (std::log(fraction) + std::lgamma(n / 2.0 + 1.0) - (n / 2.0) * std::log(M_PI)) / n;
    return std::exp(log_r);
}

namespace {

std::vector<double> sample_pair_distances(const Dataset& d, const Metric& metric,
                                          std::size_t sample_pairs,
                                          std::uint64_t seed) {
    const std::size_t n = d.size();
    if (n < 2) throw std::invalid_argument("need at least 2 vectors");
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> ds;
    ds.reserve(sample_pairs);
    while (ds.size() < sample_pairs) {
        const std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        ds.push_back(metric(d[i], d[j]));
    }
    return ds;
}

} // namespace

double calibrate_threshold(const Dataset& d, const Metric& metric, double fraction,
                           std::size_t sample_pairs, std::uint64_t seed) {
    if (sample_pairs < 10000)
        throw std::invalid_argument("calibration needs at least 10^4 sample pairs");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("fraction must lie in (0, 1]");
    if (fraction < 1.0 / static_cast<double>(sample_pairs))
        throw std::invalid_argument("fraction below the sample resolution");

    auto ds = sample_pair_distances(d, metric, sample_pairs, derive_seed(seed, "calib"));
    std::size_t k = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(ds.size())));
    k = std::min(std::max<std::size_t>(k, 1), ds.size()) - 1;
    std::nth_element(ds.begin(), ds.begin() + static_cast<std::ptrdiff_t>(k), ds.end());
    return ds[k];
}

double intrinsic_dimensionality(const Dataset& d, const Metric& metric,
                                std::size_t sample_pairs, std::uint64_t seed) {
    if (sample_pairs < 1000)
        throw std::invalid_argument("idim needs at least 10^3 sample pairs");
    const auto ds = sample_pair_distances(d, metric, sample_pairs, derive_seed(seed, "idim"));

    double mean = 0.0;
    for (double v : ds) mean += v;
    mean /= static_cast<double>(ds.size());
    double var = 0.0;
    for (double v : ds) var += (v - mean) * (v - mean);
    var /= static_cast<double>(ds.size());
    if (var <= 0.0)
        throw std::runtime_error("degenerate space: sampled distance variance is zero");
    return mean * mean / (2.0 * var);
}

} // namespace smx
