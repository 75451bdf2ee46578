#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beeridx/polygon.hpp"
#include "beeridx/rng.hpp"

namespace beeridx {

// Star-shaped polygon with 4n-1 vertices: n spikes (0,0)(2i,1)(2i+1,1) glued
// by a sliver triangle (0,0)(0,delta)((2n-1)delta,delta). Beer index tends to
// 1/n while the convexity ratio stays <= 1/n as delta -> 0.
SimplePolygon comb_polygon(int n, double delta);

// Square spiral corridor with the given number of full turns; rooted at the
// outer end cap of the corridor. Drives the level decomposition through at
// least `turns` levels.
RootedPolygon spiral_polygon(int turns);

// Dimension-d box (0,1)^d with a finite point set removed. N is sized as an
// epsilon-net for volume-1/r ellipsoids: |N| = 2 * C(d+2,d) * r * ceil(log2 r).
struct PuncturedBox {
    int d = 2;
    int r = 2;
    std::uint64_t seed = 0;
    int vc_bound = 6;  // C(d+2,d)
    std::vector<PointD> points;
    int retries_used = 0;
};

struct NetReport {
    int trials = 0;
    int stabbed = 0;
    int violations = 0;
};

std::int64_t net_size(int d, int r);

// Samples |N| uniform points and verifies them against random ellipsoids of
// volume exactly 1/r inside the box; resamples on failure.
PuncturedBox punctured_box_net(int d, int r, std::uint64_t seed, int max_retries = 5,
                               int trials = 1000);

NetReport verify_net(const PuncturedBox& B, int trials, std::uint64_t seed);

std::string punctured_box_to_json(const PuncturedBox& B);
PuncturedBox punctured_box_from_json(const std::string& text);

// The 2n open convex cells cut from (0,1)^2 by the n lines through apex and
// each point of N (exact polygon clipping). Throws on general-position
// violations.
std::vector<SimplePolygon> hyperplane_partition_2d(const Point2& apex,
                                                   const std::vector<Point2>& N);

// Monte Carlo cell volumes of the same construction in dimension d >= 3:
// cells are indexed by the angular sector around aff(A_pts) and measured by
// sampling (flagged approximate).
std::vector<double> hyperplane_partition_volumes_mc(const std::vector<PointD>& A_pts,
                                                    const std::vector<PointD>& N, int samples,
                                                    std::uint64_t seed);

// Cone over a planar base: {(tx, ty, t) : t in [0,1], (x,y) in base}.
// Membership and containment reduce to the base via central projection.
class ConeSet {
public:
    explicit ConeSet(SimplePolygon base);

    const SimplePolygon& base() const { return base_; }
    bool contains(const Eigen::Vector3d& p) const;
    // segment containment: central projection maps 3d segments to planar ones
    bool contains_segment(const Eigen::Vector3d& p, const Eigen::Vector3d& q) const;
    // triangle containment: the projected boundary decides (base simply connected)
    bool contains_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& q,
                           const Eigen::Vector3d& r) const;
    Eigen::Vector3d sample(Rng& rng) const;  // t by cube-root law, then t*base

private:
    SimplePolygon base_;
    Triangulation tri_;
};

inline ConeSet cone_lift(SimplePolygon base) { return ConeSet(std::move(base)); }

}  // namespace beeridx
