#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "beeridx/geom.hpp"
#include "beeridx/rng.hpp"

namespace beeridx {

struct CanonicalOrder {
    std::vector<int> indices;     // positions into the original tuple
    std::vector<PointD> points;   // tuple in canonical order
    std::vector<double> heights;  // d_1 .. d_{d-1}
};

// Deterministic ordering: diameter pair first, then greedy farthest from the
// growing affine hull; ties broken toward the lexicographically smallest
// index vector. Throws on affinely dependent tuples.
CanonicalOrder canonical_permutation(const SimplexTuple& T);

// Orthogonal box confining the last point of any hull contained in a set of
// budget = lambda_d(S) * c(S): built from the first d canonical points.
class BoxChain {
public:
    BoxChain(const std::vector<PointD>& prefix, double budget);

    bool contains(const PointD& p, double rel_tol = 1e-9) const;
    // definitional route: projection in the (d-1)-box and simplex-measure
    // inequality, evaluated through an independent determinant
    bool contains_definitional(const PointD& p, double rel_tol = 1e-9) const;

    double volume() const;
    double height_extent() const { return hmax_; }
    double budget() const { return budget_; }
    const std::vector<double>& heights() const { return heights_; }
    // frame coordinates of p (axis 1 along B0B1, axis d normal to the prefix)
    Eigen::VectorXd coords(const PointD& p) const;
    double extent_low(int axis) const { return lo_[axis]; }
    double extent_high(int axis) const { return hi_[axis]; }

private:
    int d_;
    PointD origin_;
    Eigen::MatrixXd axes_;  // orthonormal columns u_1..u_d
    std::vector<double> lo_, hi_;
    std::vector<double> heights_;
    std::vector<PointD> prefix_;
    double budget_ = 0.0;
    double hmax_ = 0.0;
    double base_measure_ = 0.0;  // lambda_{d-1} of conv(prefix)
};

inline BoxChain box_chain(const std::vector<PointD>& prefix, double budget) {
    return BoxChain(prefix, budget);
}

struct BoxReport {
    long long checked = 0;
    long long hull_in_count = 0;
    long long projection_failures = 0;   // Lemma on box_i projections
    long long containment_failures = 0;  // last point escaping box_d
    double max_obs1_rel_error = 0.0;     // simplex-measure identity
};

// Samples (d+1)-tuples from a membership-defined set, keeps those whose hull
// lies inside (probed on a barycentric lattice plus random interior points),
// and checks the projection and containment properties with
// budget = volume * c_upper.
BoxReport verify_box_containment(const std::function<bool(const PointD&)>& member,
                                 const std::function<PointD(Rng&)>& sampler, double volume,
                                 double c_upper, int d, long long tuples, std::uint64_t seed);

// Barycentric lattice + random probes for conv(T) subset-of-S tests.
bool hull_in_set(const std::vector<PointD>& tuple,
                 const std::function<bool(const PointD&)>& member, Rng& rng,
                 int random_probes = 64);

}  // namespace beeridx
