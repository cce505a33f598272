#include <doctest.h>

#include <cmath>

#include "smx/bench.hpp"
#include "smx/svg.hpp"

using namespace smx;

TEST_CASE("overhead recurrence") {
    CHECK(overhead_estimate(2, ArityPolicy::Log).total_bytes == 0.0);
    CHECK(overhead_estimate(1, ArityPolicy::Binary).total_bytes == 0.0);

    // binary root term: one pivot pair, 4 bytes
    CHECK(overhead_estimate(10, ArityPolicy::Binary).total_bytes >= 4.0);

    // ln(1e10) ~ 23, so the root of the log policy stores C(23,2) distances
    const auto big = overhead_estimate(1e10, ArityPolicy::Log);
    CHECK(big.total_bytes >= 23.0 * 22.0 / 2.0 * 4.0);

    const auto b9 = overhead_estimate(1e9, ArityPolicy::Log);
    CHECK(b9.per_object >= 0.5);
    CHECK(b9.per_object <= 2.0);

    CHECK(parse_arity_policy("log") == ArityPolicy::Log);
    CHECK(parse_arity_policy("fixed") == ArityPolicy::Fixed4);
    CHECK(parse_arity_policy("binary") == ArityPolicy::Binary);
    CHECK_THROWS_AS(parse_arity_policy("quad"), std::invalid_argument);
    CHECK_THROWS_AS(overhead_estimate(0, ArityPolicy::Log), std::invalid_argument);
}

TEST_CASE("bench cell: stops on SEM, verifies, and is reproducible") {
    const Dataset full = generate_uniform(600, 5, 3);
    const auto [data, queries] = split_queries(full, 0.1, 3);
    const Metric m(MetricKind::Euclidean);

    BenchOptions opt;
    opt.seed = 11;
    opt.sem_target = 0.05;
    opt.max_repeats = 20;
    opt.verify_fraction = 1.0; // exhaustively cross-check every query

    const auto row =
        run_bench_cell(data, queries, m, Structure::HptFftLog, Exclusion::Hilbert, 0.3, opt);
    CHECK(row.mean_distances > 0.0);
    CHECK(row.repeats >= 3);
    CHECK((row.sem <= opt.sem_target || row.repeats == opt.max_repeats));
    CHECK(row.queries == queries.size());
    CHECK(row.structure == "hpt_fft_log");
    CHECK(row.selection == "fft");

    const auto again =
        run_bench_cell(data, queries, m, Structure::HptFftLog, Exclusion::Hilbert, 0.3, opt);
    CHECK(again.mean_distances == row.mean_distances);
    CHECK(again.repeats == row.repeats);

    CHECK_THROWS_AS(
        run_bench_cell(data, queries, m, Structure::Vpt, Exclusion::Hyperbolic, -1.0, opt),
        std::invalid_argument);
}

TEST_CASE("scatter study") {
    const Dataset d = generate_uniform(3000, 8, 21);
    const Metric m(MetricKind::Euclidean);

    const auto r = run_scatter(d, m, PivotMode::Random, 0.0, 500, 5);
    CHECK(r.points.size() == 500);
    CHECK(r.delta > 0.0);
    // t = 0: everything excludes
    CHECK(r.hilbert_non_exclusive == 0);
    CHECK(r.hyperbolic_non_exclusive == 0);

    const auto wide = run_scatter(d, m, PivotMode::Random, 50.0, 500, 5);
    CHECK(wide.hilbert_non_exclusive == 500);
    CHECK(wide.hyperbolic_non_exclusive == 500);

    // hilbert excludes at least as often as hyperbolic, at any threshold
    const auto mid = run_scatter(d, m, PivotMode::Random, 0.145, 500, 5);
    CHECK(mid.hilbert_non_exclusive <= mid.hyperbolic_non_exclusive);

    const auto near = run_scatter(d, m, PivotMode::NearOf1000, 0.145, 500, 5);
    const auto far = run_scatter(d, m, PivotMode::FarOf1000, 0.145, 500, 5);
    CHECK(near.delta < far.delta);

    CHECK(parse_pivot_mode("random") == PivotMode::Random);
    CHECK(parse_pivot_mode("far") == PivotMode::FarOf1000);
    CHECK(parse_pivot_mode("near") == PivotMode::NearOf1000);
    CHECK_THROWS_AS(parse_pivot_mode("mid"), std::invalid_argument);
}

TEST_CASE("scatter SVG") {
    const Dataset d = generate_uniform(800, 8, 2);
    const auto r = run_scatter(d, Metric(MetricKind::Euclidean), PivotMode::Random,
                               0.145, 100, 9);
    const std::string svg = scatter_svg(r);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    // one marker per sample point plus the threshold legend circle
    std::size_t circles = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        ++pos;
    }
    CHECK(circles == r.points.size() + 1);
    CHECK(scatter_svg(r) == svg); // deterministic bytes
}

TEST_CASE("dimension sweep at toy scale") {
    const auto rows = run_dim_sweep(2, 3, 400, 30, 1, 7);
    CHECK(rows.size() == 8); // 2 dims x 2 selections x 2 exclusions
    for (const auto& r : rows) {
        CHECK(r.mean_distances > 0.0);
        CHECK(r.fraction_accessed > 0.0);
        CHECK(r.fraction_accessed <= 1.0);
        CHECK(r.threshold == doctest::Approx(calibrate_radius(r.dim, 1.0 / 400)));
    }
    // same trees, so hilbert cannot cost more than hyperbolic
    for (std::size_t i = 0; i < rows.size(); i += 2)
        CHECK(rows[i].mean_distances <= rows[i + 1].mean_distances);
    CHECK_THROWS_AS(run_dim_sweep(3, 2, 100, 10, 1, 0), std::invalid_argument);
}

TEST_CASE("scaling sweep at toy scale") {
    const Dataset d = generate_uniform(4200, 4, 13);
    const Metric m(MetricKind::Euclidean);
    const auto rows = run_scaling(d, m, {500, 4000}, {Structure::HptFftLog},
                                  {0.01}, 100, 5);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.fraction_accessed > 0.0);
        CHECK(r.fraction_accessed <= 1.0);
        CHECK(r.threshold > 0.0);
    }
    // the fraction of data touched shrinks as the collection grows
    CHECK(rows[1].fraction_accessed < rows[0].fraction_accessed);

    CHECK_THROWS_AS(
        run_scaling(d, m, {5000}, {Structure::Vpt}, {0.01}, 300, 5),
        std::invalid_argument);
}
