#pragma once

#include <cstdint>
#include <vector>

#include "beeridx/visibility.hpp"

namespace beeridx {

// One piece of the visibility cover: convex quad (possibly degenerate), with
// its closed-form area and the construction it came from.
struct Trapezoid {
    std::vector<Point2> verts;  // CCW, 4 points (degenerate allowed)
    char kind = '1';            // '1','2','3', or 'R' for the on-root case
    double area = 0.0;

    bool contains(const Point2& p) const;
};

struct CoverContext {
    double gamma = 0.5186;
    double K = 1.0;  // upper bound for smc(R), e.g. area(R)
    const BodyTree* tree = nullptr;
};

// 6 x^-2 + 3 (1-x)^-2 x^-2 + 4 (1-x)^-2 - 1, the total cover-area coefficient.
double cover_coefficient(double gamma);

// The <=3 trapezoids covering everything the point must see. A point on its
// body root gets the degenerate root-segment cover.
std::vector<Trapezoid> trapezoid_cover(const Point2& A, const CoverContext& ctx);

struct CoverReport {
    long long sampled = 0;
    long long checked = 0;  // visible pairs
    long long violations = 0;
    double max_cover_area_ratio = 0.0;  // max over points of sum(area)/K
};

// Samples point pairs, keeps mutually visible ones, and tests the cover
// disjunction: B in T(A) or A in T(B).
CoverReport verify_cover(const RootedPolygon& R, const BodyTree& tree, double gamma, double K,
                         long long pairs, std::uint64_t seed);

struct CrossingReport {
    double mc_area = 0.0;
    double sigma = 0.0;
    double bound = 0.0;  // 3K
    bool ok = false;
    long long samples = 0;
};

// Monte Carlo area of {B : AB in S, AB meets ell, |y(A)| >= |y(B)|} for a
// diagonal ell on the x-axis; checks it against 3K.
CrossingReport crossing_region_check(const SimplePolygon& S, const Segment2& ell,
                                     const Point2& A, double K, long long samples,
                                     std::uint64_t seed);

}  // namespace beeridx
