#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "beeridx/geom.hpp"
#include "beeridx/rng.hpp"

namespace beeridx {

// Simple polygon with CCW vertex cycle and closed-region semantics: the
// boundary counts as inside for every membership test.
class SimplePolygon {
public:
    SimplePolygon() = default;

    // Normalizes the input: enforces CCW, strips duplicate and collinear
    // (including reversal) vertices, rejects self-intersecting cycles.
    static SimplePolygon from_vertices(std::vector<Point2> verts);

    // Skips normalization except orientation/area bookkeeping. For internal
    // use where the cycle is known to be clean.
    static SimplePolygon from_clean_vertices(std::vector<Point2> verts);

    const std::vector<Point2>& vertices() const { return verts_; }
    int size() const { return static_cast<int>(verts_.size()); }
    const Point2& vertex(int i) const { return verts_[wrap(i)]; }
    Segment2 edge(int i) const { return {verts_[wrap(i)], verts_[wrap(i + 1)], true}; }

    double area() const { return area_; }
    Point2 bbox_min() const { return bbox_min_; }
    Point2 bbox_max() const { return bbox_max_; }
    double scale() const;  // bounding-box diagonal
    // derived points (chord casts, window trims) sit within this distance of
    // the true boundary; membership treats them as boundary points
    double boundary_tol() const { return boundary_tol_; }

    double distance_to_boundary(const Point2& p) const;
    bool contains_point(const Point2& p) const;
    bool on_boundary(const Point2& p) const;
    bool contains_segment(const Segment2& s) const;

private:
    int wrap(int i) const {
        int n = size();
        return ((i % n) + n) % n;
    }
    void finish();

    std::vector<Point2> verts_;
    double area_ = 0.0;
    Point2 bbox_min_{0, 0}, bbox_max_{0, 0};
    double boundary_tol_ = 0.0;
};

struct RootedPolygon {
    SimplePolygon polygon;
    Segment2 root;
};

struct Triangulation {
    std::vector<std::array<int, 3>> triangles;
    std::vector<double> cumulative_area;  // prefix sums, back() == polygon area
    double total_area() const { return cumulative_area.empty() ? 0.0 : cumulative_area.back(); }
};

double shoelace_area(const std::vector<Point2>& verts);

// Ear-clipping triangulation; triangle areas sum to area(P).
Triangulation triangulate(const SimplePolygon& P);

// Uniform point in P: triangle by area, then uniform within the triangle.
Point2 sample_uniform(const SimplePolygon& P, const Triangulation& tri, Rng& rng);

// Intersection parameters of s with the polygon boundary (values in [0,1]
// along s, deduplicated and sorted, 0 and 1 included).
std::vector<double> boundary_intersection_params(const SimplePolygon& P, const Segment2& s);

// The inclusion-maximal chord of P containing s. Throws if s is not in P.
Segment2 extend_to_diagonal(const SimplePolygon& P, const Segment2& s);

// Splits P along a diagonal into two rooted polygons whose interiors
// partition P minus the diagonal. Each part's root is the portion of the
// diagonal on that part's boundary. Throws if the chord is not a diagonal or
// has no interior part.
std::pair<RootedPolygon, RootedPolygon> split_by_diagonal(const SimplePolygon& P,
                                                          const Segment2& diagonal);

// Splits P along any chord (endpoints on the boundary, interior inside);
// first part is the one lying locally left of a->b.
std::pair<SimplePolygon, SimplePolygon> split_by_chord(const SimplePolygon& P,
                                                       const Segment2& chord);

SimplePolygon convex_hull_polygon(const std::vector<Point2>& pts);

std::string polygon_to_json(const SimplePolygon& P);
SimplePolygon polygon_from_json(const std::string& text);
std::string rooted_to_json(const RootedPolygon& R);
RootedPolygon rooted_from_json(const std::string& text);

}  // namespace beeridx
