// smx: benchmark harness for the exact-search library.
//
// Subcommands: bench, dim-sweep, scatter, scaling, overhead, calibrate, idim.
// All tabular output is CSV and deterministic for a fixed (flags, seed).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smx/bench.hpp"
#include "smx/dataset.hpp"
#include "smx/index.hpp"
#include "smx/metric.hpp"
#include "smx/oracle.hpp"
#include "smx/rng.hpp"
#include "smx/svg.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;
constexpr int kExitIo = 3;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// --data accepts a file path (tried as-is, then under $SUPERMETRIC_DATA_DIR)
// or "synth:<n>,<dim>" for seeded uniform hypercube data.
smx::Dataset resolve_data(const std::string& spec, std::uint64_t seed) {
    if (spec.rfind("synth:", 0) == 0) {
        const auto rest = spec.substr(6);
        const auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--data", "expected synth:<n>,<dim>");
        const std::size_t n = std::stoull(rest.substr(0, comma));
        const std::size_t dim = std::stoull(rest.substr(comma + 1));
        return smx::generate_uniform(n, dim, seed);
    }
    std::filesystem::path p(spec);
    if (!std::filesystem::exists(p)) {
        if (const char* root = std::getenv("SUPERMETRIC_DATA_DIR")) {
            const auto alt = std::filesystem::path(root) / p;
            if (std::filesystem::exists(alt)) p = alt;
        }
    }
    return smx::load_ascii(p);
}

void write_out(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot write " + path);
    out << content;
    if (!out) throw std::ios_base::failure("write failed: " + path);
}

double resolve_threshold(const std::string& spec, const smx::Dataset& data,
                         const smx::Metric& metric, std::uint64_t seed) {
    if (spec.rfind("frac:", 0) == 0) {
        const double f = std::stod(spec.substr(5));
        return smx::calibrate_threshold(data, metric, f, 100000, seed);
    }
    return std::stod(spec);
}

// --- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string data, metric = "euclidean", out;
    std::vector<std::string> structures, exclusions, thresholds;
    double query_fraction = 0.10;
    double sem_target = 0.01;
    int max_repeats = 50;
    std::uint64_t seed = 0;
    bool verify = false;
};

int run_bench(const BenchArgs& a) {
    const smx::Metric metric = smx::Metric::parse(a.metric);

    std::vector<smx::Structure> structures;
    if (a.structures.empty()) {
        for (smx::Structure s : smx::all_structures()) structures.push_back(s);
    } else {
        for (const auto& s : a.structures) structures.push_back(smx::parse_structure(s));
    }
    std::vector<smx::Exclusion> exclusions;
    for (const auto& e : a.exclusions.empty()
                             ? std::vector<std::string>{"hilbert", "hyperbolic"}
                             : a.exclusions)
        exclusions.push_back(smx::parse_exclusion(e));

    // reject illegal combinations before any expensive work
    for (smx::Exclusion e : exclusions)
        if (e == smx::Exclusion::Hilbert && !metric.four_point())
            throw CLI::ValidationError(
                "--exclusion", "hilbert requires a four-point metric, not " + metric.name());

    const smx::Dataset full = resolve_data(a.data, smx::derive_seed(a.seed, "data"));
    auto [data, queries] = smx::split_queries(full, a.query_fraction, a.seed);

    std::vector<double> thresholds;
    for (const auto& t : a.thresholds)
        thresholds.push_back(
            resolve_threshold(t, data, metric, smx::derive_seed(a.seed, "thresh")));
    if (thresholds.empty())
        throw CLI::ValidationError("--threshold", "at least one threshold is required");

    smx::BenchOptions opt;
    opt.sem_target = a.sem_target;
    opt.max_repeats = a.max_repeats;
    opt.seed = a.seed;
    opt.verify_fraction = a.verify ? 0.01 : 0.0;

    std::ostringstream csv;
    csv << "structure,selection,exclusion,metric,threshold,mean_distances,sem,"
           "repeats,build_distances,queries,seed\n";
    for (smx::Structure s : structures)
        for (smx::Exclusion e : exclusions)
            for (double t : thresholds) {
                const auto row = smx::run_bench_cell(data, queries, metric, s, e, t, opt);
                csv << row.structure << ',' << row.selection << ',' << row.exclusion
                    << ',' << row.metric << ',' << num(row.threshold) << ','
                    << num(row.mean_distances) << ',' << num(row.sem) << ','
                    << row.repeats << ',' << row.build_distances << ',' << row.queries
                    << ',' << row.seed << '\n';
            }
    write_out(a.out, csv.str());
    return 0;
}

// --- dim-sweep -------------------------------------------------------------

struct DimSweepArgs {
    std::size_t dim_lo = 2, dim_hi = 14;
    std::size_t n = 100000, queries = 1000;
    int repeats = 3;
    std::uint64_t seed = 0;
    std::string out;
};

int run_dim_sweep_cmd(const DimSweepArgs& a) {
    const auto rows = smx::run_dim_sweep(a.dim_lo, a.dim_hi, a.n, a.queries, a.repeats, a.seed);
    std::ostringstream csv;
    csv << "dim,selection,exclusion,threshold,mean_distances,fraction_accessed\n";
    for (const auto& r : rows)
        csv << r.dim << ',' << r.selection << ',' << r.exclusion << ','
            << num(r.threshold) << ',' << num(r.mean_distances) << ','
            << num(r.fraction_accessed) << '\n';
    write_out(a.out, csv.str());
    return 0;
}

// --- scatter ---------------------------------------------------------------

struct ScatterArgs {
    std::string data, metric = "euclidean", pivots = "random", out, svg;
    double threshold = 0.1;
    std::size_t sample = 500;
    std::uint64_t seed = 0;
};

int run_scatter_cmd(const ScatterArgs& a) {
    const smx::Metric metric = smx::Metric::parse(a.metric);
    const smx::Dataset data = resolve_data(a.data, smx::derive_seed(a.seed, "data"));
    const auto r = smx::run_scatter(data, metric, smx::parse_pivot_mode(a.pivots),
                                    a.threshold, a.sample, a.seed);
    std::ostringstream csv;
    csv << "id,x,y,side,hilbert_exclusive,hyperbolic_exclusive\n";
    for (const auto& p : r.points)
        csv << p.id << ',' << num(p.x) << ',' << num(p.y) << ',' << p.side << ','
            << (p.hilbert_exclusive ? 1 : 0) << ',' << (p.hyperbolic_exclusive ? 1 : 0)
            << '\n';
    csv << "# p1=" << r.p1 << " p2=" << r.p2 << " delta=" << num(r.delta)
        << " hilbert_non_exclusive=" << r.hilbert_non_exclusive
        << " hyperbolic_non_exclusive=" << r.hyperbolic_non_exclusive << '\n';
    write_out(a.out, csv.str());
    if (!a.svg.empty()) write_out(a.svg, smx::scatter_svg(r));
    return 0;
}

// --- scaling ---------------------------------------------------------------

struct ScalingArgs {
    std::string data, metric = "euclidean", out;
    std::vector<std::size_t> sizes;
    std::vector<std::string> structures;
    std::vector<double> fractions;
    std::size_t queries = 100;
    std::uint64_t seed = 0;
};

int run_scaling_cmd(const ScalingArgs& a) {
    const smx::Metric metric = smx::Metric::parse(a.metric);
    const smx::Dataset data = resolve_data(a.data, smx::derive_seed(a.seed, "data"));
    std::vector<std::size_t> sizes = a.sizes;
    if (sizes.empty()) sizes = {10000, 100000, 1000000};
    std::vector<smx::Structure> structures;
    for (const auto& s : a.structures.empty()
                             ? std::vector<std::string>{"hpt_fft_log", "lrt_far", "vpt"}
                             : a.structures)
        structures.push_back(smx::parse_structure(s));
    std::vector<double> fractions = a.fractions;
    if (fractions.empty()) fractions = {1e-4, 1e-3};

    const auto rows = smx::run_scaling(data, metric, sizes, structures, fractions,
                                       a.queries, a.seed);
    std::ostringstream csv;
    csv << "size,structure,exclusion,fraction,threshold,fraction_accessed\n";
    for (const auto& r : rows)
        csv << r.size << ',' << r.structure << ',' << r.exclusion << ','
            << num(r.fraction) << ',' << num(r.threshold) << ','
            << num(r.fraction_accessed) << '\n';
    write_out(a.out, csv.str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact metric / supermetric range-search benchmarks"};
    app.require_subcommand(1);

    BenchArgs bench;
    auto* cb = app.add_subcommand("bench", "SEM-controlled tree benchmarks");
    cb->add_option("--data", bench.data, "dataset path or synth:<n>,<dim>")->required();
    cb->add_option("--metric", bench.metric, "distance function");
    cb->add_option("--structure", bench.structures, "tree variant (repeatable; default all)");
    cb->add_option("--exclusion", bench.exclusions, "hilbert | hyperbolic (repeatable)");
    cb->add_option("--threshold", bench.thresholds, "absolute value or frac:<x> (repeatable)")
        ->required();
    cb->add_option("--query-fraction", bench.query_fraction, "query split fraction");
    cb->add_option("--sem-target", bench.sem_target, "relative SEM stopping target");
    cb->add_option("--max-repeats", bench.max_repeats, "repeat cap per cell");
    cb->add_option("--seed", bench.seed, "base seed");
    cb->add_option("--out", bench.out, "CSV path (default stdout)");
    cb->add_flag("--verify", bench.verify, "cross-check 1% of queries exhaustively");

    DimSweepArgs sweep;
    auto* cd = app.add_subcommand("dim-sweep", "uniform-hypercube dimension sweep");
    cd->add_option("--dim-lo", sweep.dim_lo, "first dimension");
    cd->add_option("--dim-hi", sweep.dim_hi, "last dimension");
    cd->add_option("--n", sweep.n, "points per dimension");
    cd->add_option("--queries", sweep.queries, "queries per dimension");
    cd->add_option("--repeats", sweep.repeats, "builds per cell");
    cd->add_option("--seed", sweep.seed, "base seed");
    cd->add_option("--out", sweep.out, "CSV path (default stdout)");

    ScatterArgs scatter;
    auto* cs = app.add_subcommand("scatter", "planar projection / exclusion study");
    cs->add_option("--data", scatter.data, "dataset path or synth:<n>,<dim>")->required();
    cs->add_option("--metric", scatter.metric, "distance function");
    cs->add_option("--pivots", scatter.pivots, "random | far | near");
    cs->add_option("--threshold", scatter.threshold, "query threshold");
    cs->add_option("--sample", scatter.sample, "sample size");
    cs->add_option("--seed", scatter.seed, "base seed");
    cs->add_option("--out", scatter.out, "CSV path (default stdout)");
    cs->add_option("--svg", scatter.svg, "also write an SVG plot here");

    ScalingArgs scaling;
    auto* cg = app.add_subcommand("scaling", "data accessed vs. collection size");
    cg->add_option("--data", scaling.data, "dataset path or synth:<n>,<dim>")->required();
    cg->add_option("--metric", scaling.metric, "distance function");
    cg->add_option("--sizes", scaling.sizes, "prefix sizes to index");
    cg->add_option("--structures", scaling.structures, "tree variants");
    cg->add_option("--fractions", scaling.fractions, "result-set fractions");
    cg->add_option("--queries", scaling.queries, "query count (taken from the data tail)");
    cg->add_option("--seed", scaling.seed, "base seed");
    cg->add_option("--out", scaling.out, "CSV path (default stdout)");

    double over_n = 0.0;
    std::string over_policy = "log";
    auto* co = app.add_subcommand("overhead", "balanced-tree space overhead estimate");
    co->add_option("--n", over_n, "collection size")->required();
    co->add_option("--policy", over_policy, "binary | fixed | log");

    std::string cal_data, cal_metric = "euclidean";
    std::vector<double> cal_fractions{1e-4, 1e-3, 1e-2};
    std::size_t cal_pairs = 100000;
    std::uint64_t cal_seed = 0;
    auto* cc = app.add_subcommand("calibrate", "thresholds for target result fractions");
    cc->add_option("--data", cal_data, "dataset path or synth:<n>,<dim>")->required();
    cc->add_option("--metric", cal_metric, "distance function");
    cc->add_option("--fractions", cal_fractions, "target result fractions");
    cc->add_option("--pairs", cal_pairs, "sampled pairs");
    cc->add_option("--seed", cal_seed, "base seed");

    std::string idim_data, idim_metric = "euclidean";
    std::size_t idim_pairs = 100000;
    std::uint64_t idim_seed = 0;
    auto* ci = app.add_subcommand("idim", "intrinsic dimensionality estimate");
    ci->add_option("--data", idim_data, "dataset path or synth:<n>,<dim>")->required();
    ci->add_option("--metric", idim_metric, "distance function");
    ci->add_option("--pairs", idim_pairs, "sampled pairs");
    ci->add_option("--seed", idim_seed, "base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitUsage;
    }

    try {
        if (cb->parsed()) return run_bench(bench);
        if (cd->parsed()) return run_dim_sweep_cmd(sweep);
        if (cs->parsed()) return run_scatter_cmd(scatter);
        if (cg->parsed()) return run_scaling_cmd(scaling);
        if (co->parsed()) {
            const auto r = smx::overhead_estimate(over_n, smx::parse_arity_policy(over_policy));
            std::cout << "total_bytes," << num(r.total_bytes) << "\nper_object,"
                      << num(r.per_object) << '\n';
            return 0;
        }
        if (cc->parsed()) {
            const smx::Metric m = smx::Metric::parse(cal_metric);
            const smx::Dataset d = resolve_data(cal_data, smx::derive_seed(cal_seed, "data"));
            std::cout << "fraction,threshold\n";
            for (double f : cal_fractions)
                std::cout << num(f) << ','
                          << num(smx::calibrate_threshold(d, m, f, cal_pairs, cal_seed))
                          << '\n';
            return 0;
        }
        if (ci->parsed()) {
            const smx::Metric m = smx::Metric::parse(idim_metric);
            const smx::Dataset d = resolve_data(idim_data, smx::derive_seed(idim_seed, "data"));
            std::cout << "idim,"
                      << num(smx::intrinsic_dimensionality(d, m, idim_pairs, idim_seed))
                      << '\n';
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const smx::VerificationError& e) {
        std::cerr << "verification failure: " << e.what() << '\n';
        return kExitVerification;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        // dataset loading problems surface as runtime_errors
        return kExitIo;
    }
    return kExitUsage;
}
