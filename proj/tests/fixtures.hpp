#pragma once

#include "beeridx/constructions.hpp"
#include "beeridx/polygon.hpp"

namespace fixtures {

using beeridx::Point2;
using beeridx::RootedPolygon;
using beeridx::Segment2;
using beeridx::SimplePolygon;

inline SimplePolygon unit_square() {
    return SimplePolygon::from_vertices({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
}

// unit square minus the top-right quadrant
inline SimplePolygon l_shape() {
    return SimplePolygon::from_vertices(
        {{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}});
}

inline RootedPolygon rooted_square_bottom() {
    return {unit_square(), Segment2{{0, 0}, {1, 0}, true}};
}

inline RootedPolygon rooted_l_shape() {
    return {l_shape(), Segment2{{0, 0}, {1, 0}, true}};
}

// comb rooted at the first notch-floor edge
inline RootedPolygon rooted_comb(int n, double delta) {
    SimplePolygon P = beeridx::comb_polygon(n, delta);
    return {P, Segment2{{delta, delta}, {2.0 * delta, delta}, true}};
}

inline RootedPolygon rooted_convex_pentagon() {
    SimplePolygon P = SimplePolygon::from_vertices(
        {{0, 0}, {2, -0.3}, {3, 1}, {1.5, 2.2}, {-0.5, 1.1}});
    return {P, Segment2{{0, 0}, {2, -0.3}, true}};
}

}  // namespace fixtures
