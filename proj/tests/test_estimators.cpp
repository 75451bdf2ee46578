#include <doctest.h>

#include <cmath>

#include "beeridx/estimators.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace beeridx;

// 400x400 grid-pair brute-force value for the L-shape, computed once by the
// lshape_oracle tool before the estimator work started
static constexpr double kLShapeOracle = 0.888892332361;

TEST_CASE("wilson interval basics") {
    auto e = wilson_estimate(50, 100, 1);
    CHECK(e.value == doctest::Approx(0.5));
    CHECK(e.ci_low < 0.5);
    CHECK(e.ci_high > 0.5);
    CHECK(e.ci_high - e.ci_low < 0.25);

    auto all = wilson_estimate(1000, 1000, 1);
    CHECK(all.value == 1.0);
    CHECK(all.ci_high == 1.0);
    CHECK(all.ci_low > 0.99);

    auto none = wilson_estimate(0, 1000, 1);
    CHECK(none.value == 0.0);
    CHECK(none.ci_low == 0.0);
}

TEST_CASE("beer index of the unit square is exactly one") {
    auto e = estimate_beer_index(fixtures::unit_square(), 20000, 7);
    CHECK(e.value == 1.0);
    CHECK(e.hits == 20000);
}

TEST_CASE("estimates are deterministic and thread-count independent") {
    auto L = fixtures::l_shape();
    auto e1 = estimate_beer_index(L, 20000, 99, 1);
    auto e2 = estimate_beer_index(L, 20000, 99, 2);
    auto e3 = estimate_beer_index(L, 20000, 99, 7);
    CHECK(e1.hits == e2.hits);
    CHECK(e2.hits == e3.hits);
    CHECK(e1.value == e3.value);

    auto d1 = estimate_beer_index(L, 20000, 100, 2);
    CHECK(d1.hits != e1.hits);  // different seed, different stream
}

TEST_CASE("beer index of the L-shape matches the frozen grid oracle") {
    auto e = estimate_beer_index(fixtures::l_shape(), 200000, 31);
    double sigma = std::sqrt(e.value * (1 - e.value) / e.samples);
    CHECK(std::abs(e.value - kLShapeOracle) <= 3.0 * sigma);
}

TEST_CASE("CI calibration: 100 seeds cover the oracle value") {
    auto L = fixtures::l_shape();
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto e = estimate_beer_index(L, 10000, seed);
        if (e.ci_low <= kLShapeOracle && kLShapeOracle <= e.ci_high) ++covered;
    }
    CHECK(covered >= 93);
}

TEST_CASE("beer index of a comb tracks the fine-grid double-integral oracle") {
    // independent oracle for comb(2, 0.05): grid points classified by the
    // union-of-triangles membership, visibility by dense segment sampling
    double delta = 0.05;
    oracles::CombUnion U{2, delta};
    std::vector<Point2> pts;
    for (int i = 0; i < 90; ++i)
        for (int j = 0; j < 30; ++j) {
            Point2 p{(i + 0.5) / 30.0, (j + 0.5) / 30.0};
            if (U.contains(p)) pts.push_back(p);
        }
    long long vis = 0, tot = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            ++tot;
            if (U.contains_segment_dense(pts[i], pts[j], 200)) ++vis;
        }
    double oracle = static_cast<double>(2 * vis + static_cast<long long>(pts.size())) /
                    (static_cast<double>(pts.size()) * pts.size());

    auto e = estimate_beer_index(comb_polygon(2, delta), 100000, 17);
    double sigma = std::sqrt(e.value * (1 - e.value) / e.samples);
    // grid bias allowance on top of the Monte Carlo band
    CHECK(std::abs(e.value - oracle) <= 3.0 * sigma + 0.02);
}

TEST_CASE("comb(8) beer index approaches 1/8") {
    auto e = estimate_beer_index(comb_polygon(8, 1e-4), 200000, 5);
    CHECK(e.value * 8.0 > 0.9);
    CHECK(e.value * 8.0 < 1.1);
}

TEST_CASE("triangle index of a convex polygon is one") {
    auto e = estimate_triangle_index(fixtures::unit_square(), 5000, 3);
    CHECK(e.value == 1.0);
    auto p = estimate_triangle_index(fixtures::rooted_convex_pentagon().polygon, 5000, 3);
    CHECK(p.value == 1.0);
}

TEST_CASE("k-index of the punctured box: segments never hit punctures") {
    PuncturedBox B;
    B.d = 2;
    B.r = 4;
    Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        PointD p(2);
        p << rng.uniform(), rng.uniform();
        B.points.push_back(p);
    }
    auto e = estimate_k_index_box(B, 1, 20000, 11);
    CHECK(e.value == 1.0);
}

TEST_CASE("2-index with a single center puncture: oracle and Lemma bound") {
    PuncturedBox B;
    B.d = 2;
    B.r = 2;
    PointD c(2);
    c << 0.5, 0.5;
    B.points.push_back(c);

    auto e = estimate_k_index_box(B, 2, 200000, 21);

    // independent MC oracle: sign-area triangle test on its own stream
    Rng rng(777);
    long long hit = 0;
    const long long n = 200000;
    for (long long i = 0; i < n; ++i) {
        double ax = rng.uniform(), ay = rng.uniform();
        double bx = rng.uniform(), by = rng.uniform();
        double cx = rng.uniform(), cy = rng.uniform();
        double s1 = (bx - ax) * (0.5 - ay) - (by - ay) * (0.5 - ax);
        double s2 = (cx - bx) * (0.5 - by) - (cy - by) * (0.5 - bx);
        double s3 = (ax - cx) * (0.5 - cy) - (ay - cy) * (0.5 - cx);
        bool inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
        if (!inside) ++hit;
    }
    double oracle = static_cast<double>(hit) / n;
    double sigma = std::sqrt(e.value * (1 - e.value) / e.samples) +
                   std::sqrt(oracle * (1 - oracle) / n);
    CHECK(std::abs(e.value - oracle) <= 3.0 * sigma);
    CHECK(e.value >= 0.5);  // b_d >= 1/(2n) with n = 1
}

TEST_CASE("shared-sample chain is monotone sample-wise") {
    auto B = punctured_box_net(2, 8, 13, 5, 50);
    auto chain = estimate_k_chain_box(B, 30000, 23);
    REQUIRE(chain.size() == 2);
    CHECK(chain[0].hits >= chain[1].hits);
    CHECK(chain[0].value >= chain[1].value);

    PuncturedBox B3;
    B3.d = 3;
    B3.r = 4;
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        PointD p(3);
        p << rng.uniform(), rng.uniform(), rng.uniform();
        B3.points.push_back(p);
    }
    auto chain3 = estimate_k_chain_box(B3, 5000, 29);
    REQUIRE(chain3.size() == 3);
    CHECK(chain3[0].hits >= chain3[1].hits);
    CHECK(chain3[1].hits >= chain3[2].hits);
}

TEST_CASE("grid acceleration agrees with the naive scan") {
    auto B = punctured_box_net(2, 8, 37, 5, 50);
    auto fast = estimate_k_index_box(B, 2, 10000, 41, 1, true);
    auto slow = estimate_k_index_box(B, 2, 10000, 41, 1, false);
    CHECK(fast.hits == slow.hits);  // zero divergence
}

TEST_CASE("convexity ratio of the square") {
    auto sq = fixtures::unit_square();
    auto cr = estimate_convexity_ratio(sq, 1, 7, false);
    CHECK(cr.lower == doctest::Approx(0.5));  // best triangle in a square
    CHECK_FALSE(cr.rectangle_witness);

    auto cr2 = estimate_convexity_ratio(sq, 1, 7, true);
    CHECK(cr2.lower == doctest::Approx(1.0));
    CHECK(cr2.rectangle_witness);
}

TEST_CASE("convexity ratio of combs scales like 1/n") {
    for (int n : {4, 8}) {
        auto cr = estimate_convexity_ratio(comb_polygon(n, 1e-4), 1, 3);
        CHECK(cr.lower * n > 0.9);
        CHECK(cr.lower * n < 1.05);
        // witness must be a genuinely inscribed triangle
        CHECK(cr.witness_area > 0.0);
    }
}

TEST_CASE("convexity ratio of a convex polygon beats the Blaschke constant") {
    auto P = fixtures::rooted_convex_pentagon().polygon;
    auto cr = estimate_convexity_ratio(P, 2, 11, false);
    CHECK(cr.lower >= 3.0 * std::sqrt(3.0) / (4.0 * M_PI) - 1e-9);
}

TEST_CASE("inequality report: polygon bounds") {
    auto square_beer = estimate_beer_index(fixtures::unit_square(), 10000, 3);
    auto lines = inequality_report_polygon(square_beer, 1.0, 1.0);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].pass);  // 1 >= 1^2
    CHECK(lines[1].pass);  // 1 <= 180
}

TEST_CASE("inequality report: punctured box bounds") {
    auto B = punctured_box_net(2, 8, 51, 5, 50);
    auto e = estimate_k_index_box(B, 2, 50000, 53);
    auto lines = inequality_report_box(e, B);
    REQUIRE(lines.size() == 3);
    for (const auto& l : lines) CHECK(l.pass);
    CHECK(theorem4_bound(2, 1.0) == doctest::Approx(6.0));
    CHECK(theorem4_bound(3, 1.0) == doctest::Approx(48.0));
}

TEST_CASE("cone beer index matches the base polygon") {
    auto base = comb_polygon(2, 0.01);
    ConeSet cone(base);
    auto eb = estimate_beer_index(base, 50000, 61);
    auto ec = estimate_beer_index_cone(cone, 50000, 62);
    double sigma = std::sqrt(eb.value * (1 - eb.value) / eb.samples) +
                   std::sqrt(ec.value * (1 - ec.value) / ec.samples);
    CHECK(std::abs(eb.value - ec.value) <= 3.0 * sigma);
}

TEST_CASE("cone 2-index matches the base polygon") {
    auto base = comb_polygon(2, 0.01);
    ConeSet cone(base);
    auto eb = estimate_triangle_index(base, 30000, 63);
    auto ec = estimate_triangle_index_cone(cone, 30000, 64);
    double sigma = std::sqrt(eb.value * (1 - eb.value) / eb.samples) +
                   std::sqrt(ec.value * (1 - ec.value) / ec.samples);
    CHECK(std::abs(eb.value - ec.value) <= 3.0 * sigma);
}

TEST_CASE("estimate json embeds reproducibility fields") {
    auto e = estimate_beer_index(fixtures::unit_square(), 1000, 5);
    std::string js = estimate_to_json(e, "beer_index");
    CHECK(js.find("\"quantity\":\"beer_index\"") != std::string::npos);
    CHECK(js.find("\"seed\":5") != std::string::npos);
    CHECK(js.find("\"samples\":1000") != std::string::npos);
}
