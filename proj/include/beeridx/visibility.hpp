#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beeridx/polygon.hpp"

namespace beeridx {

// Rigid frame attached to a body: maps the body's root onto the x-axis with
// the body region in y >= 0.
struct BodyFrame {
    double c = 1.0, s = 0.0;  // rotation column (cos, sin), possibly negated
    Point2 origin{0, 0};

    Point2 to_frame(const Point2& p) const {
        Point2 q = p - origin;
        return {c * q.x() + s * q.y(), -s * q.x() + c * q.y()};
    }
    Point2 from_frame(const Point2& p) const {
        return {origin.x() + c * p.x() - s * p.y(), origin.y() + s * p.x() + c * p.y()};
    }
};

struct Body {
    SimplePolygon region;
    Segment2 root;
    int level = 1;        // k >= 1
    int parent = -1;      // index into BodyTree::bodies, -1 for the root body
    BodyFrame frame;
};

struct BodyTree {
    std::vector<Body> bodies;  // BFS order: levels non-decreasing
    RootedPolygon source;
    bool truncated = false;
    int merged_slivers = 0;

    const Body& root_body() const { return bodies.front(); }
};

struct PocketInfo {
    SimplePolygon pocket;
    Segment2 window;
};

struct WeakVisibilityResult {
    SimplePolygon region;
    std::vector<PocketInfo> pockets;
};

struct BaseSegmentInfo {
    int body_index = -1;
    Segment2 base;
    int level = 1;
};

struct StructuralError : GeomError {
    using GeomError::GeomError;
};

// Parameter interval of chord points visible from p within P (closed
// visibility; the interval endpoints are critical parameters where a
// sightline grazes a vertex). Empty optional if p sees no chord point.
std::optional<std::pair<double, double>> visible_interval(const SimplePolygon& P,
                                                          const Segment2& chord,
                                                          const Point2& p);

inline bool is_weakly_visible(const SimplePolygon& P, const Segment2& chord, const Point2& p) {
    return visible_interval(P, chord, p).has_value();
}

// Weak visibility region of the root inside the polygon, plus the pockets
// hidden behind their window chords.
WeakVisibilityResult weak_visibility_region(const RootedPolygon& R);

// Recursive window decomposition: the region is a k-body, each pocket
// re-rooted at its window recurses at level k+1.
BodyTree level_decomposition(const RootedPolygon& R, int max_levels = 64);

// Locates the minimal-level portion of a contained segment and validates the
// two-level shape of the decomposition. Throws StructuralError on violation.
BaseSegmentInfo base_segment(const BodyTree& tree, const Segment2& s);

// Index of the body whose region contains p (lowest level wins on boundary
// ties); -1 if p is outside every body.
int locate_body(const BodyTree& tree, const Point2& p);

std::string body_tree_to_json(const BodyTree& tree);

}  // namespace beeridx
