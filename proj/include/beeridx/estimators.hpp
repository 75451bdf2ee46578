#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "beeridx/constructions.hpp"
#include "beeridx/polygon.hpp"

namespace beeridx {

struct Estimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;  // 95% Wilson
    long long hits = 0;
    long long samples = 0;
    std::uint64_t seed = 0;
    double elapsed_ms = 0.0;
};

Estimate wilson_estimate(long long hits, long long samples, std::uint64_t seed,
                         double elapsed_ms = 0.0);

// Counts indicator hits over [0, samples) with per-index substreams; the
// result is independent of the thread count.
long long count_hits(long long samples, int threads, std::uint64_t seed,
                     const std::function<bool(long long, Rng&)>& indicator);

// Beer index b(P): fraction of uniform point pairs whose segment stays in P.
Estimate estimate_beer_index(const SimplePolygon& P, long long samples, std::uint64_t seed,
                             int threads = 0);

// 2-index for polygons: triangles with all three edges inside.
Estimate estimate_triangle_index(const SimplePolygon& P, long long samples, std::uint64_t seed,
                                 int threads = 0);

// Beer index of the cone over a base polygon (segment containment via central
// projection onto the base).
Estimate estimate_beer_index_cone(const ConeSet& cone, long long samples, std::uint64_t seed,
                                  int threads = 0);

// 2-index of the cone: projected triangle edges decide containment.
Estimate estimate_triangle_index_cone(const ConeSet& cone, long long samples,
                                      std::uint64_t seed, int threads = 0);

// Uniform grid over the punctured box for o(|N|) candidate lookups per query.
class PointGrid {
public:
    PointGrid(const std::vector<PointD>& pts, int d);
    // indices of stored points whose cell intersects [lo, hi]
    void candidates(const PointD& lo, const PointD& hi, std::vector<int>& out) const;
    int cells_per_axis() const { return m_; }

private:
    int d_, m_;
    std::vector<std::vector<int>> buckets_;
    int cell_of(const PointD& p) const;
};

// k-index of the punctured box: hull of k+1 points contains no removed point
// (exact: lower-dimensional hulls a.s. miss every puncture; k = d uses
// barycentric containment). With use_grid, candidates come from the grid.
Estimate estimate_k_index_box(const PuncturedBox& B, int k, long long samples,
                              std::uint64_t seed, int threads = 0, bool use_grid = true);

// Shared-sample chain: evaluates k = 1..d on nested prefixes of the same
// tuples, so b_1 >= b_2 >= ... >= b_d holds sample-wise.
std::vector<Estimate> estimate_k_chain_box(const PuncturedBox& B, long long samples,
                                           std::uint64_t seed, int threads = 0);

struct ConvexityRatioBound {
    double lower = 0.0;
    double upper = 1.0;
    std::array<Point2, 3> witness;        // inscribed triangle realizing `lower`
    double witness_area = 0.0;
    bool rectangle_witness = false;       // bbox witness beat the triangle
};

// Heuristic inscribed-triangle lower bound (vertex triples + hill climbing),
// with an optional axis-aligned rectangle probe.
ConvexityRatioBound estimate_convexity_ratio(const SimplePolygon& P, int effort,
                                             std::uint64_t seed, bool try_rectangle = true);

struct InequalityLine {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    bool is_upper = false;  // true: lhs <= rhs expected, else lhs >= rhs
    bool pass = false;
};

// b >= c_lower^2 and b <= 180 * c_upper, evaluated CI-aware.
std::vector<InequalityLine> inequality_report_polygon(const Estimate& beer, double c_lower,
                                                      double c_upper);

// Theorem 4 upper bound and the Lemma 18 / epsilon-net lower chain for the
// d-index of a punctured box.
std::vector<InequalityLine> inequality_report_box(const Estimate& bd, const PuncturedBox& B);

double theorem4_bound(int d, double c_upper);

std::string estimate_to_json(const Estimate& e, const std::string& quantity);

}  // namespace beeridx
