#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <thread>

#include "smx/index.hpp"
#include "smx/oracle.hpp"
#include "smx/rng.hpp"

using namespace smx;

namespace {

Dataset line_points(std::initializer_list<double> xs) {
    Dataset d;
    d.dim = 1;
    d.values = xs;
    return d;
}

DistFn abs_diff(const Dataset& d) {
    return [&d](std::uint32_t a, std::uint32_t b) {
        return std::abs(d.values[a] - d.values[b]);
    };
}

std::vector<std::uint32_t> iota_ids(std::size_t n) {
    std::vector<std::uint32_t> ids(n);
    std::iota(ids.begin(), ids.end(), 0u);
    return ids;
}

} // namespace

TEST_CASE("structure names round-trip") {
    CHECK(all_structures().size() == 19);
    for (Structure s : all_structures())
        CHECK(parse_structure(structure_name(s)) == s);
    CHECK_THROWS_AS(parse_structure("ght"), std::invalid_argument);
    CHECK(parse_exclusion("hilbert") == Exclusion::Hilbert);
    CHECK(parse_exclusion("hyperbolic") == Exclusion::Hyperbolic);
    CHECK_THROWS_AS(parse_exclusion("euclid"), std::invalid_argument);
}

TEST_CASE("select_random") {
    const auto ids = iota_ids(20);
    const auto a = select_random(ids, 5, 42);
    CHECK(a.size() == 5);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    CHECK(a == select_random(ids, 5, 42));
    CHECK(a != select_random(ids, 5, 43));
    CHECK_THROWS_AS(select_random(ids, 21, 1), std::invalid_argument);
    CHECK_THROWS_AS(select_random(ids, 0, 1), std::invalid_argument);
}

TEST_CASE("select_fft greedy max-min on a line") {
    const Dataset d = line_points({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto ids = iota_ids(11);
    const auto two = select_fft(ids, 2, 0, abs_diff(d), 0u);
    CHECK(two == std::vector<std::uint32_t>{0, 10});
    const auto three = select_fft(ids, 3, 0, abs_diff(d), 0u);
    CHECK(three == std::vector<std::uint32_t>{0, 10, 5});
    CHECK_THROWS_AS(select_fft(ids, 2, 0, abs_diff(d), 99u), std::invalid_argument);
    // unforced first pick is seeded
    CHECK(select_fft(ids, 4, 7, abs_diff(d)) == select_fft(ids, 4, 7, abs_diff(d)));
}

TEST_CASE("select_sat scan rule, hand-simulated") {
    const Dataset d = line_points({0, 1, 2, 3}); // id 0 is the centre
    const std::vector<std::uint32_t> cands{1, 2, 3};
    const auto prox = select_sat(cands, 0, SatOrder::Proximal, 0, abs_diff(d));
    CHECK(prox == std::vector<std::uint32_t>{1}); // 2 and 3 are closer to 1 than to 0

    // distal: 3 accepted; 2 is closer to 3 than to the centre; 1 survives
    const auto dist = select_sat(cands, 0, SatOrder::Distal, 0, abs_diff(d));
    CHECK(dist == std::vector<std::uint32_t>{3, 1});

    const auto capped = select_sat(cands, 0, SatOrder::Distal, 1, abs_diff(d));
    CHECK(capped == std::vector<std::uint32_t>{3});

    CHECK(select_sat({}, 0, SatOrder::Proximal, 0, abs_diff(d)).empty());
    CHECK_THROWS_AS(select_sat(cands, 0, SatOrder::Global, 0, abs_diff(d)),
                    std::invalid_argument);
}

TEST_CASE("tiny datasets become a single leaf") {
    const Dataset d = generate_uniform(2, 4, 1);
    const Metric m(MetricKind::Euclidean);
    for (Structure s : all_structures()) {
        IndexConfig cfg;
        cfg.structure = s;
        const auto index = build_index(d, m, cfg);
        const auto report = index->range_query(d[0], 100.0, Exclusion::Hilbert);
        CHECK(report.result_ids == std::vector<std::uint32_t>{0, 1});
    }
    CHECK_THROWS_AS(build_index(Dataset{}, m, IndexConfig{}), std::invalid_argument);
}

TEST_CASE("structural audit: every point stored exactly once") {
    const Dataset d = generate_uniform(317, 6, 55);
    const Metric m(MetricKind::Euclidean);
    for (Structure s : all_structures()) {
        IndexConfig cfg;
        cfg.structure = s;
        cfg.seed = 9;
        const auto index = build_index(d, m, cfg);
        CHECK(index->stored_ids() == iota_ids(d.size()));
        CHECK(index->build_distance_count() > 0);
    }
}

TEST_CASE("argument validation in range_query") {
    const Dataset d = generate_uniform(50, 4, 2);
    IndexConfig cfg;
    cfg.structure = Structure::HptFftLog;
    const auto e_index = build_index(d, Metric(MetricKind::Euclidean), cfg);
    CHECK_THROWS_AS(e_index->range_query(d[0], -1.0, Exclusion::Hilbert),
                    std::invalid_argument);
    CHECK_THROWS_AS(e_index->range_query(std::vector<double>{1.0}, 0.1, Exclusion::Hilbert),
                    std::invalid_argument);

    // hilbert is illegal without the four-point property
    const auto l1_index = build_index(d, Metric(MetricKind::Manhattan), cfg);
    CHECK_THROWS_AS(l1_index->range_query(d[0], 0.1, Exclusion::Hilbert),
                    std::invalid_argument);
    CHECK_NOTHROW(l1_index->range_query(d[0], 0.1, Exclusion::Hyperbolic));
}

TEST_CASE("exactness, dominance and threshold monotonicity across all structures") {
    const std::size_t n = 400;
    const Metric metrics[] = {Metric(MetricKind::Euclidean),
                              Metric(MetricKind::JensenShannon),
                              Metric(MetricKind::Manhattan)};
    const Dataset d = generate_uniform(n, 6, 77);
    const Dataset qs = generate_uniform(15, 6, 78);

    for (const Metric& m : metrics) {
        const double thresholds[] = {0.05, 0.3, 0.8};
        for (Structure s : all_structures()) {
            IndexConfig cfg;
            cfg.structure = s;
            cfg.seed = 1234;
            const auto index = build_index(d, m, cfg);
            for (std::size_t qi = 0; qi < qs.size(); ++qi) {
                std::uint64_t prev_count = 0;
                for (double t : thresholds) {
                    const auto hyp = index->range_query(qs[qi], t, Exclusion::Hyperbolic);
                    const auto truth = exhaustive_range(d, m, qs[qi], t);
                    CHECK(hyp.result_ids == truth.result_ids);
                    CHECK(hyp.distance_count >= prev_count); // monotone in t
                    prev_count = hyp.distance_count;
                    if (m.four_point()) {
                        const auto hil = index->range_query(qs[qi], t, Exclusion::Hilbert);
                        CHECK(hil.result_ids == truth.result_ids);
                        CHECK(hil.distance_count <= hyp.distance_count);
                    }
                }
            }
        }
    }
}

TEST_CASE("member query at t=0 returns exactly itself; huge t returns everything") {
    const Dataset d = generate_uniform(300, 5, 10);
    const Metric m(MetricKind::Euclidean);
    for (Structure s : {Structure::SatPure, Structure::HptFftLog, Structure::LrtFar,
                        Structure::MonptRand, Structure::Vpt}) {
        IndexConfig cfg;
        cfg.structure = s;
        const auto index = build_index(d, m, cfg);
        const auto self = index->range_query(d[42], 0.0, Exclusion::Hilbert);
        CHECK(self.result_ids == std::vector<std::uint32_t>{42});
        const auto all = index->range_query(d[42], 10.0, Exclusion::Hilbert);
        CHECK(all.result_ids.size() == d.size());
    }
}

TEST_CASE("determinism: same seed, same tree, same counts") {
    const Dataset d = generate_uniform(500, 6, 3);
    const Dataset qs = generate_uniform(10, 6, 4);
    const Metric m(MetricKind::Euclidean);
    for (Structure s : {Structure::SatDistalLog, Structure::HptRandomFixed,
                        Structure::BalancedMonptFar, Structure::Vpt}) {
        IndexConfig cfg;
        cfg.structure = s;
        cfg.seed = 99;
        const auto a = build_index(d, m, cfg);
        const auto b = build_index(d, m, cfg);
        CHECK(a->build_distance_count() == b->build_distance_count());
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            const auto ra = a->range_query(qs[qi], 0.4, Exclusion::Hilbert);
            const auto rb = b->range_query(qs[qi], 0.4, Exclusion::Hilbert);
            CHECK(ra.result_ids == rb.result_ids);
            CHECK(ra.distance_count == rb.distance_count);
            CHECK(ra.nodes_visited == rb.nodes_visited);
        }
    }
}

TEST_CASE("duplicate-heavy data still builds and answers exactly") {
    Dataset d;
    d.dim = 2;
    for (int i = 0; i < 120; ++i) {
        const double v = (i % 3) * 0.5; // only three distinct points
        d.push_back(std::vector<double>{v, v});
    }
    const Metric m(MetricKind::Euclidean);
    for (Structure s : all_structures()) {
        IndexConfig cfg;
        cfg.structure = s;
        cfg.seed = 5;
        const auto index = build_index(d, m, cfg);
        const auto truth = exhaustive_range(d, m, d[0], 0.1);
        for (Exclusion e : {Exclusion::Hilbert, Exclusion::Hyperbolic})
            CHECK(index->range_query(d[0], 0.1, e).result_ids == truth.result_ids);
    }
}

TEST_CASE("concurrent queries agree with serial ones") {
    const Dataset d = generate_uniform(1000, 6, 8);
    const Dataset qs = generate_uniform(32, 6, 9);
    IndexConfig cfg;
    cfg.structure = Structure::HptFftLog;
    const auto index = build_index(d, Metric(MetricKind::Euclidean), cfg);

    std::vector<QueryReport> serial;
    for (std::size_t i = 0; i < qs.size(); ++i)
        serial.push_back(index->range_query(qs[i], 0.4, Exclusion::Hilbert));

    std::vector<QueryReport> parallel(qs.size());
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&, w] {
            for (std::size_t i = w; i < qs.size(); i += 4)
                parallel[i] = index->range_query(qs[i], 0.4, Exclusion::Hilbert);
        });
    for (auto& t : workers) t.join();
    for (std::size_t i = 0; i < qs.size(); ++i) {
        CHECK(parallel[i].result_ids == serial[i].result_ids);
        CHECK(parallel[i].distance_count == serial[i].distance_count);
    }
}

TEST_CASE("count_non_exclusive") {
    const std::vector<PlanarPoint> pts{{-0.4, 0.2}, {0.3, 0.1}, {0.05, 0.5}};
    // t = 0: every off-axis query excludes under both predicates
    CHECK(count_non_exclusive(pts, 1.0, 0.0, Exclusion::Hilbert) == 0);
    CHECK(count_non_exclusive(pts, 1.0, 0.0, Exclusion::Hyperbolic) == 0);
    // enormous t: nothing can exclude
    CHECK(count_non_exclusive(pts, 1.0, 10.0, Exclusion::Hilbert) == pts.size());
    CHECK(count_non_exclusive(pts, 1.0, 10.0, Exclusion::Hyperbolic) == pts.size());
    // the hilbert count keys on |x| alone
    CHECK(count_non_exclusive(pts, 1.0, 0.1, Exclusion::Hilbert) == 1);
    CHECK_THROWS_AS(count_non_exclusive(pts, 0.0, 0.1, Exclusion::Hilbert),
                    std::invalid_argument);
}
