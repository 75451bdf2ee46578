#include <doctest.h>

#include <cmath>

#include "beeridx/constructions.hpp"
#include "beeridx/polygon.hpp"
#include "beeridx/rng.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace beeridx;

TEST_CASE("polygon normalization and validation") {
    auto sq = fixtures::unit_square();
    CHECK(sq.size() == 4);
    CHECK(sq.area() == doctest::Approx(1.0));

    // CW input is flipped to CCW
    auto sq2 = SimplePolygon::from_vertices({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(sq2.area() == doctest::Approx(1.0));
    CHECK(shoelace_area(sq2.vertices()) > 0.0);

    // duplicate and collinear vertices are stripped
    auto sq3 = SimplePolygon::from_vertices({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {1, 1}, {0, 1}});
    CHECK(sq3.size() == 4);

    CHECK_THROWS_AS(SimplePolygon::from_vertices({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeomError);
    CHECK_THROWS_AS(SimplePolygon::from_vertices({{0, 0}, {1, 0}}), GeomError);
}

TEST_CASE("area examples") {
    CHECK(fixtures::unit_square().area() == doctest::Approx(1.0));
    // comb(1) degenerates to the triangle (0,0),(0,1),(1,1)
    auto c1 = comb_polygon(1, 0.1);
    CHECK(c1.size() == 3);
    CHECK(c1.area() == doctest::Approx(0.5));
    // comb(8, 1e-4): frozen from the independent shoelace oracle
    auto c8 = comb_polygon(8, 1e-4);
    CHECK(c8.area() == doctest::Approx(oracles::shoelace(c8.vertices())).epsilon(1e-12));
    CHECK(c8.area() == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("contains_point semantics") {
    auto sq = fixtures::unit_square();
    CHECK(sq.contains_point({0.5, 0.5}));
    CHECK_FALSE(sq.contains_point({2, 2}));
    CHECK(sq.contains_point({0, 0}));      // vertex, closed semantics
    CHECK(sq.contains_point({0.5, 0}));    // edge
    CHECK(sq.contains_point({0.5, -1e-13}));  // within the boundary snap band
    CHECK_FALSE(sq.contains_point({0.5, -1e-9}));

    auto L = fixtures::l_shape();
    CHECK(L.contains_point({0.25, 0.75}));
    CHECK_FALSE(L.contains_point({0.75, 0.75}));
    CHECK(L.contains_point({0.5, 0.75}));  // inner wall
}

TEST_CASE("contains_segment examples") {
    auto sq = fixtures::unit_square();
    CHECK(sq.contains_segment({{0.1, 0.1}, {0.9, 0.8}, true}));
    CHECK(sq.contains_segment({{0, 0}, {1, 1}, true}));  // chord of a convex polygon

    auto c2 = comb_polygon(2, 0.01);
    // tip-to-tip hop is blocked between the spikes
    CHECK_FALSE(c2.contains_segment({{0.5, 0.9}, {2.5, 0.9}, true}));
    // runs along the spike-0 boundary edge; closed semantics keeps it inside
    CHECK(c2.contains_segment({{0, 0}, {0.5, 0.5}, true}));
}

TEST_CASE("contains_segment implies contained midpoints") {
    Rng rng(7);
    auto L = fixtures::l_shape();
    Triangulation tri = triangulate(L);
    int checked = 0;
    while (checked < 200) {
        Point2 a = sample_uniform(L, tri, rng);
        Point2 b = sample_uniform(L, tri, rng);
        if (!L.contains_segment({a, b, true})) continue;
        ++checked;
        for (int i = 0; i <= 100; ++i)
            CHECK(L.contains_point(a + (i / 100.0) * (b - a)));
    }
}

TEST_CASE("triangulate counts and area sums") {
    CHECK(triangulate(fixtures::unit_square()).triangles.size() == 2);

    auto pent = fixtures::rooted_convex_pentagon().polygon;
    CHECK(triangulate(pent).triangles.size() == 3);

    auto c4 = comb_polygon(4, 1e-3);
    Triangulation tri = triangulate(c4);
    CHECK(tri.triangles.size() == 13);  // 4*4-1-2
    CHECK(tri.total_area() == doctest::Approx(c4.area()).epsilon(1e-9));
}

TEST_CASE("sample_uniform distribution and determinism") {
    auto sq = fixtures::unit_square();
    Triangulation tri = triangulate(sq);

    Rng rng(42);
    const int N = 100000;
    int quad[4] = {0, 0, 0, 0};
    for (int i = 0; i < N; ++i) {
        Point2 p = sample_uniform(sq, tri, rng);
        int q = (p.x() >= 0.5) + 2 * (p.y() >= 0.5);
        ++quad[q];
    }
    double sigma = std::sqrt(N * 0.25 * 0.75);
    for (int q = 0; q < 4; ++q) CHECK(std::abs(quad[q] - N / 4.0) <= 4.0 * sigma);

    // fixed seed reproduces the sequence exactly
    Rng r1(9), r2(9);
    for (int i = 0; i < 100; ++i) {
        Point2 p1 = sample_uniform(sq, tri, r1);
        Point2 p2 = sample_uniform(sq, tri, r2);
        CHECK(p1 == p2);
    }

    // comb spike share
    auto c2 = comb_polygon(2, 0.01);
    Triangulation t2 = triangulate(c2);
    double spike_share = 0.5 / c2.area();
    int in_spike = 0;
    Rng rc(4);
    for (int i = 0; i < N; ++i) {
        Point2 p = sample_uniform(c2, t2, rc);
        if (oracles::CombUnion::in_triangle(p, {0, 0}, {0, 1}, {1, 1})) ++in_spike;
    }
    double sig = std::sqrt(N * spike_share * (1 - spike_share));
    CHECK(std::abs(in_spike - N * spike_share) <= 4.0 * sig);
}

TEST_CASE("sample_uniform chi-square occupancy on the unit square") {
    auto sq = fixtures::unit_square();
    Triangulation tri = triangulate(sq);
    // chi-square(99) critical value at p=0.001
    const double crit = 148.23;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Rng rng(seed);
        int counts[100] = {};
        const int N = 100000;
        for (int i = 0; i < N; ++i) {
            Point2 p = sample_uniform(sq, tri, rng);
            int cx = std::min(9, static_cast<int>(p.x() * 10));
            int cy = std::min(9, static_cast<int>(p.y() * 10));
            ++counts[cy * 10 + cx];
        }
        double chi2 = 0.0;
        for (int c : counts) {
            double e = N / 100.0;
            chi2 += (c - e) * (c - e) / e;
        }
        CHECK(chi2 < crit);
    }
}

TEST_CASE("extend_to_diagonal examples") {
    auto sq = fixtures::unit_square();
    Segment2 s{{0.25, 0.5}, {0.75, 0.5}, true};
    Segment2 d = extend_to_diagonal(sq, s);
    CHECK((d.a - Point2{0, 0.5}).norm() <= 1e-12);
    CHECK((d.b - Point2{1, 0.5}).norm() <= 1e-12);

    // already maximal: unchanged
    Segment2 d2 = extend_to_diagonal(sq, d);
    CHECK((d2.a - d.a).norm() <= 1e-12);
    CHECK((d2.b - d.b).norm() <= 1e-12);

    // comb(2): the left edge chord, frozen from a ray-cast oracle
    auto c2 = comb_polygon(2, 0.01);
    Segment2 left = extend_to_diagonal(c2, {{0, 0.3}, {0, 0.6}, true});
    CHECK((left.a - Point2{0, 0}).norm() <= 1e-12);
    CHECK((left.b - Point2{0, 1}).norm() <= 1e-12);

    CHECK_THROWS_AS(extend_to_diagonal(sq, Segment2{{0.5, 0.5}, {2, 0.5}, true}), GeomError);
}

TEST_CASE("split_by_diagonal on the square") {
    auto sq = fixtures::unit_square();
    auto [r1, r2] = split_by_diagonal(sq, {{0, 0.5}, {1, 0.5}, true});
    CHECK(r1.polygon.area() == doctest::Approx(0.5));
    CHECK(r2.polygon.area() == doctest::Approx(0.5));
    CHECK(r1.polygon.area() + r2.polygon.area() == doctest::Approx(sq.area()).epsilon(1e-9));
    // both roots span the full chord
    CHECK(r1.root.length() == doctest::Approx(1.0));
    CHECK(r2.root.length() == doctest::Approx(1.0));
}

TEST_CASE("split_by_diagonal rejects boundary chords") {
    auto c2 = comb_polygon(2, 0.01);
    // the left edge is a maximal chord but has no interior part
    CHECK_THROWS_AS(split_by_diagonal(c2, Segment2{{0, 0}, {0, 1}, true}), GeomError);
    // non-maximal chords are rejected
    CHECK_THROWS_AS(split_by_diagonal(fixtures::unit_square(),
                                      Segment2{{0.25, 0.5}, {0.75, 0.5}, true}),
                    GeomError);
}

TEST_CASE("split_by_diagonal on the comb spike chord") {
    double delta = 1e-3;
    auto c4 = comb_polygon(4, delta);
    Segment2 d = extend_to_diagonal(c4, {{0.25, 0.25}, {0.75, 0.75}, true});
    // the maximal chord through y=x is (0,0)-(1,1)
    CHECK((d.a - Point2{0, 0}).norm() <= 1e-12);
    CHECK((d.b - Point2{1, 1}).norm() <= 1e-12);

    auto [r1, r2] = split_by_diagonal(c4, d);
    CHECK(r1.polygon.area() + r2.polygon.area() == doctest::Approx(c4.area()).epsilon(1e-9));
    const RootedPolygon& spike = r1.polygon.area() < r2.polygon.area() ? r1 : r2;
    const RootedPolygon& rest = r1.polygon.area() < r2.polygon.area() ? r2 : r1;
    CHECK(spike.polygon.area() == doctest::Approx(0.5));
    CHECK(spike.polygon.size() == 3);
    // the spike keeps the full chord; the rest only touches it near the origin
    CHECK(spike.root.length() == doctest::Approx(std::sqrt(2.0)));
    CHECK(rest.root.length() == doctest::Approx(delta * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("split partition property on random interior points") {
    auto sq = fixtures::unit_square();
    auto [r1, r2] = split_by_diagonal(sq, {{0, 0}, {1, 1}, true});
    Rng rng(13);
    Triangulation tri = triangulate(sq);
    for (int i = 0; i < 2000; ++i) {
        Point2 p = sample_uniform(sq, tri, rng);
        bool in1 = r1.polygon.contains_point(p);
        bool in2 = r2.polygon.contains_point(p);
        bool on_diag = orient2d(Point2{0, 0}, Point2{1, 1}, p) == 0;
        if (on_diag)
            CHECK((in1 && in2));
        else
            CHECK(in1 != in2);
    }
}

TEST_CASE("polygon json round trip is bit exact") {
    auto c4 = comb_polygon(4, 1e-3);
    auto back = polygon_from_json(polygon_to_json(c4));
    REQUIRE(back.size() == c4.size());
    for (int i = 0; i < c4.size(); ++i) {
        CHECK(back.vertices()[i].x() == c4.vertices()[i].x());
        CHECK(back.vertices()[i].y() == c4.vertices()[i].y());
    }

    RootedPolygon rp = fixtures::rooted_comb(4, 1e-3);
    RootedPolygon rb = rooted_from_json(rooted_to_json(rp));
    CHECK(rb.root.a.x() == rp.root.a.x());
    CHECK(rb.root.b.y() == rp.root.b.y());
}

TEST_CASE("convex hull polygon wrapper") {
    auto P = convex_hull_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.8}});
    CHECK(P.size() == 4);
    CHECK(P.area() == doctest::Approx(1.0));
}
