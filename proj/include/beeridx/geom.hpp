#pragma once

#include <Eigen/Dense>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "beeridx/predicates.hpp"

namespace beeridx {

using Point2 = Eigen::Vector2d;
using PointD = Eigen::VectorXd;

// Relative tolerance below which a point tuple counts as affinely dependent.
inline constexpr double kDegenerateTol = 1e-12;

struct Segment2 {
    Point2 a;
    Point2 b;
    bool closed = true;

    double length() const { return (b - a).norm(); }
    Point2 at(double t) const { return a + t * (b - a); }
    Point2 midpoint() const { return 0.5 * (a + b); }
};

// Ordered (d+1)-tuple of d-dimensional points.
struct SimplexTuple {
    std::vector<PointD> pts;

    int dim() const { return pts.empty() ? 0 : static_cast<int>(pts.front().size()); }
    int size() const { return static_cast<int>(pts.size()); }
};

inline int orient2d(const Point2& p, const Point2& q, const Point2& r) {
    return orient2d(p.x(), p.y(), q.x(), q.y(), r.x(), r.y());
}

inline bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
    return on_segment(a.x(), a.y(), b.x(), b.y(), p.x(), p.y());
}

// Lebesgue measure of conv(T) for a (d+1)-tuple in R^d: |det|/d!.
double simplex_measure(const SimplexTuple& T);

// d-dimensional measure of the k-simplex spanned by k+1 points in R^d
// (k <= d), via the Gram determinant.
double embedded_simplex_measure(const std::vector<PointD>& pts);

// Euclidean distance from P to the affine hull of the basis points.
// Throws if the basis is affinely dependent beyond kDegenerateTol.
double dist_to_affine_hull(const PointD& P, const std::vector<PointD>& basis);

// Orthogonal projection of P onto the affine hull of the basis points.
PointD project_to_affine_hull(const PointD& P, const std::vector<PointD>& basis);

// Barycentric-coordinate membership test. Throws on degenerate T.
bool point_in_simplex(const PointD& P, const SimplexTuple& T, bool closed = true);

// Indices of a pair realizing the maximum pairwise distance, ties broken by
// the lexicographically smallest index pair.
std::pair<int, int> diameter_pair(const std::vector<PointD>& pts);
std::pair<int, int> diameter_pair_2d(const std::vector<Point2>& pts);

// CCW convex hull (Andrew's monotone chain, exact orientation, collinear
// points dropped). Throws if fewer than 3 points or all collinear.
std::vector<Point2> convex_hull_2d(const std::vector<Point2>& pts);

struct GeomError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace beeridx
