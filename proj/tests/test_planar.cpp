#include <doctest.h>

#include <cmath>
#include <vector>

#include "smx/dataset.hpp"
#include "smx/metric.hpp"
#include "smx/planar.hpp"
#include "smx/rng.hpp"

using namespace smx;

TEST_CASE("project places known triangles") {
    const auto apex = project(std::sqrt(2.0), std::sqrt(2.0), 2.0);
    CHECK(apex.x == doctest::Approx(0.0));
    CHECK(apex.y == doctest::Approx(1.0));

    const auto at_p1 = project(0.0, 1.5, 1.5);
    CHECK(at_p1.x == doctest::Approx(-0.75));
    CHECK(at_p1.y == doctest::Approx(0.0));

    CHECK_THROWS_AS(project(1.0, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(project(1.0, 1.0, 3.0), std::invalid_argument); // no such triangle
}

TEST_CASE("project reconstructs its side lengths") {
    const Dataset d = generate_uniform(300, 8, 3);
    const Metric m(MetricKind::Euclidean);
    Rng rng(42);
    std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
    for (int r = 0; r < 2000; ++r) {
        const std::size_t p1 = pick(rng), p2 = pick(rng), s = pick(rng);
        const double delta = m(d[p1], d[p2]);
        if (delta == 0.0) continue;
        const double d1 = m(d[s], d[p1]), d2 = m(d[s], d[p2]);
        const auto p = project(d1, d2, delta);
        CHECK(p.y >= 0.0);
        const double r1 = std::hypot(p.x + delta / 2.0, p.y);
        const double r2 = std::hypot(p.x - delta / 2.0, p.y);
        CHECK(r1 == doctest::Approx(d1).epsilon(1e-9));
        CHECK(r2 == doctest::Approx(d2).epsilon(1e-9));
    }
}

TEST_CASE("planar distance") {
    CHECK(planar_distance({1.0, 2.0}, {1.0, 2.0}) == 0.0);
    CHECK(planar_distance({0.0, 0.0}, {3.0, 4.0}) == doctest::Approx(5.0));
}

TEST_CASE("exclusion verdicts") {
    CHECK(hyperbolic_excludes(0.9, 0.4, 0.2) == Verdict::ExcludeP1Side);
    CHECK(hyperbolic_excludes(0.4, 0.9, 0.2) == Verdict::ExcludeP2Side);
    CHECK(hyperbolic_excludes(0.9, 0.4, 0.3) == Verdict::None);
    CHECK(hyperbolic_excludes(0.7, 0.7, 0.0) == Verdict::None);

    CHECK(hilbert_excludes(0.9, 0.4, 1.0, 0.2) == Verdict::ExcludeP1Side);
    CHECK(hilbert_excludes(0.4, 0.9, 1.0, 0.2) == Verdict::ExcludeP2Side);
    CHECK(hilbert_excludes(0.7, 0.7, 1.0, 0.0) == Verdict::None);
    CHECK_THROWS_AS(hilbert_excludes(0.5, 0.5, 0.0, 0.1), std::invalid_argument);

    CHECK(cover_radius_excludes(1.0, 0.5, 0.4));
    CHECK_FALSE(cover_radius_excludes(1.0, 0.5, 0.5)); // boundary stays searchable
}

TEST_CASE("hyperbolic exclusion implies hilbert exclusion, and both are monotone in t") {
    // grid of admissible (d1, d2, delta) triples
    for (double delta = 0.2; delta <= 2.0; delta += 0.2) {
        for (double d1 = 0.0; d1 <= 2.0; d1 += 0.1) {
            for (double d2 = std::max(0.0, std::max(d1 - delta, delta - d1));
                 d2 <= d1 + delta; d2 += 0.07) {
                for (double t = 0.0; t <= 1.0; t += 0.05) {
                    const auto hyp = hyperbolic_excludes(d1, d2, t);
                    const auto hil = hilbert_excludes(d1, d2, delta, t);
                    if (hyp != Verdict::None) CHECK(hil == hyp);
                    if (t >= 0.05) {
                        // anything excluded at t is excluded at smaller t too
                        if (hyp != Verdict::None)
                            CHECK(hyperbolic_excludes(d1, d2, t - 0.05) == hyp);
                        if (hil != Verdict::None)
                            CHECK(hilbert_excludes(d1, d2, delta, t - 0.05) == hil);
                    }
                }
            }
        }
    }
}

namespace {

double residual_sum(std::span<const PlanarPoint> pts, double m, double b) {
    double s = 0;
    for (const auto& p : pts) {
        const double r = p.y - (m * p.x + b);
        s += r * r;
    }
    return s;
}

} // namespace

TEST_CASE("fit_line on exact and degenerate inputs") {
    std::vector<PlanarPoint> line;
    for (double x = -2.0; x <= 2.0; x += 0.5) line.push_back({x, 2.0 * x + 1.0});
    const auto r = fit_line(line);
    CHECK(r.m == doctest::Approx(2.0));
    CHECK(r.theta == doctest::Approx(std::atan(2.0)));
    CHECK(r.h == doctest::Approx(-0.5)); // x-intercept of y = 2x + 1

    const auto flat = fit_line(std::vector<PlanarPoint>{{-1.0, 0.7}, {1.0, 0.7}});
    CHECK(flat.m == 0.0);
    CHECK(flat.theta == 0.0);
    CHECK(flat.h == doctest::Approx(0.0));

    const auto vert = fit_line(std::vector<PlanarPoint>{{0.3, 0.0}, {0.3, 1.0}});
    CHECK(vert.vertical);
    CHECK(vert.theta == doctest::Approx(M_PI / 2.0));
    CHECK(vert.h == doctest::Approx(0.3));

    CHECK_THROWS_AS(fit_line(std::vector<PlanarPoint>{{0, 0}}), std::invalid_argument);
}

TEST_CASE("fit_line solves the normal equations") {
    Rng rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<PlanarPoint> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({u(rng), 0.3 * u(rng) + 0.6});
    const auto r = fit_line(pts);

    // independently coded normal equations for y = m x + b
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& p : pts) {
        sx += p.x;
        sy += p.y;
        sxx += p.x * p.x;
        sxy += p.x * p.y;
    }
    const double m_ref = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double b_ref = (sy - m_ref * sx) / n;
    CHECK(r.m == doctest::Approx(m_ref).epsilon(1e-9));
    CHECK(residual_sum(pts, r.m, b_ref) ==
          doctest::Approx(residual_sum(pts, m_ref, b_ref)).epsilon(1e-9));

    // a least-squares slope cannot be improved by nudging it
    const double best = residual_sum(pts, m_ref, b_ref);
    CHECK(best <= residual_sum(pts, m_ref + 1e-3, b_ref));
    CHECK(best <= residual_sum(pts, m_ref - 1e-3, b_ref));
}

TEST_CASE("rotate") {
    const RotationParams id{0.0, 0.5, 0.0, false};
    const auto r0 = rotate({2.0, 3.0}, id);
    CHECK(r0[0] == doctest::Approx(1.5));
    CHECK(r0[1] == doctest::Approx(3.0));

    RotationParams q;
    q.theta = M_PI / 4.0;
    q.h = 2.0;
    const auto r1 = rotate({3.0, 0.0}, q);
    CHECK(r1[0] == doctest::Approx(std::cos(M_PI / 4.0)));
    CHECK(r1[1] == doctest::Approx(std::sin(M_PI / 4.0)));

    // rigid: pairwise distances survive any rotation
    Rng rng(4);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        RotationParams p;
        p.theta = u(rng);
        p.h = u(rng);
        const PlanarPoint a{u(rng), std::abs(u(rng))}, b{u(rng), std::abs(u(rng))};
        const auto ra = rotate(a, p), rb = rotate(b, p);
        CHECK(std::hypot(ra[0] - rb[0], ra[1] - rb[1]) ==
              doctest::Approx(planar_distance(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("partition strategies split evenly") {
    CHECK_THROWS_AS(parse_strategy("diagonal"), std::invalid_argument);

    const auto simple = partition_labels(
        std::vector<PlanarPoint>{{-1.0, 0.0}, {1.0, 0.0}}, PartitionStrategy::SplitXMedian);
    CHECK(simple[0] != simple[1]);

    Rng rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<PlanarPoint> pts;
    for (int i = 0; i < 101; ++i) pts.push_back({u(rng), u(rng)});
    for (const char* name : {"split_x_median", "split_y_median", "pca_major",
                             "pca_minor", "lr_orthogonal", "lr_parallel",
                             "radial_centre", "radial_corner"}) {
        const auto strategy = parse_strategy(name);
        CHECK(strategy_name(strategy) == name);
        const auto labels = partition_labels(pts, strategy);
        std::size_t zeros = 0;
        for (auto l : labels) zeros += l == 0;
        CHECK(zeros == pts.size() / 2);
    }

    // y-median split is exactly the split on apex height
    const auto by_y = partition_labels(pts, PartitionStrategy::SplitYMedian);
    std::vector<double> heights;
    for (const auto& p : pts) heights.push_back(p.y);
    std::vector<double> sorted = heights;
    std::sort(sorted.begin(), sorted.end());
    const double med = sorted[pts.size() / 2];
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (heights[i] < med) CHECK(by_y[i] == 0);
}
