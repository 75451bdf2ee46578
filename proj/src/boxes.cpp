#include "beeridx/boxes.hpp"

#include <algorithm>
#include <cmath>

namespace beeridx {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

double dist_to_span(const PointD& p, const PointD& origin, const Eigen::MatrixXd& ortho,
                    int cols) {
    Eigen::VectorXd w = p - origin;
    for (int j = 0; j < cols; ++j) w -= ortho.col(j).dot(p - origin) * ortho.col(j);
    return w.norm();
}

}  // namespace

CanonicalOrder canonical_permutation(const SimplexTuple& T) {
    const int d = T.dim();
    const int n = T.size();
    if (n != d + 1) throw GeomError("canonical_permutation: tuple size must be d+1");
    if (simplex_measure(T) < kDegenerateTol) throw GeomError("canonical_permutation: degenerate tuple");

    // diameter pair, lexicographically smallest ordered pair among realizers
    double best = -1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) best = std::max(best, (T.pts[i] - T.pts[j]).squaredNorm());
    int i0 = -1, i1 = -1;
    for (int i = 0; i < n && i0 < 0; ++i)
        for (int j = 0; j < n; ++j)
            if (j != i && (T.pts[i] - T.pts[j]).squaredNorm() == best) {
                i0 = i;
                i1 = j;
                break;
            }

    CanonicalOrder ord;
    ord.indices = {i0, i1};
    std::vector<bool> used(n, false);
    used[i0] = used[i1] = true;

    // orthonormal frame of the growing hull for distance computations
    Eigen::MatrixXd ortho(d, d);
    Eigen::VectorXd u = T.pts[i1] - T.pts[i0];
    ord.heights.push_back(u.norm());
    ortho.col(0) = u / u.norm();
    int cols = 1;

    for (int pos = 2; pos <= d; ++pos) {
        int pick = -1;
        double farthest = -1.0;
        if (pos <= d - 1) {
            for (int i = 0; i < n; ++i) {
                if (used[i]) continue;
                double dist = dist_to_span(T.pts[i], T.pts[i0], ortho, cols);
                if (dist > farthest) {
                    farthest = dist;
                    pick = i;
                }
            }
        } else {
            for (int i = 0; i < n; ++i)
                if (!used[i]) {
                    pick = i;
                    break;
                }
        }
        used[pick] = true;
        ord.indices.push_back(pick);
        if (pos <= d - 1) {
            ord.heights.push_back(farthest);
            Eigen::VectorXd w = T.pts[pick] - T.pts[i0];
            for (int j = 0; j < cols; ++j) w -= ortho.col(j).dot(T.pts[pick] - T.pts[i0]) * ortho.col(j);
            ortho.col(cols++) = w / w.norm();
        }
    }
    for (int idx : ord.indices) ord.points.push_back(T.pts[idx]);
    return ord;
}

BoxChain::BoxChain(const std::vector<PointD>& prefix, double budget)
    : prefix_(prefix), budget_(budget) {
    d_ = static_cast<int>(prefix.front().size());
    if (static_cast<int>(prefix.size()) != d_)
        throw GeomError("box_chain: need exactly d points");
    if (!(budget > 0.0)) throw GeomError("box_chain: budget must be positive");
    origin_ = prefix[0];

    axes_.resize(d_, d_);
    lo_.assign(d_, 0.0);
    hi_.assign(d_, 0.0);

    Eigen::VectorXd u1 = prefix[1] - prefix[0];
    double d1 = u1.norm();
    if (d1 <= 0.0) throw GeomError("box_chain: repeated points");
    heights_.push_back(d1);
    axes_.col(0) = u1 / d1;
    lo_[0] = 0.0;
    hi_[0] = d1;

    for (int i = 2; i < d_; ++i) {
        Eigen::VectorXd w = prefix[i] - origin_;
        for (int j = 0; j < i - 1; ++j) w -= axes_.col(j).dot(prefix[i] - origin_) * axes_.col(j);
        double di = w.norm();
        if (di < kDegenerateTol * d1) throw GeomError("box_chain: affinely dependent prefix");
        heights_.push_back(di);
        axes_.col(i - 1) = w / di;
        lo_[i - 1] = -di;
        hi_[i - 1] = di;
    }

    // normal direction to aff(prefix): complete the orthonormal frame
    Eigen::MatrixXd U = axes_.leftCols(d_ - 1);
    Eigen::FullPivHouseholderQR<Eigen::MatrixXd> qr(U);
    Eigen::MatrixXd Q = qr.matrixQ();
    axes_.col(d_ - 1) = Q.col(d_ - 1);

    base_measure_ = 1.0;
    for (double h : heights_) base_measure_ *= h;
    base_measure_ /= factorial(d_ - 1);

    // lambda_d(conv(prefix, P)) = base * |h| / d <= budget
    hmax_ = factorial(d_) * budget_;
    for (double h : heights_) hmax_ /= h;
    lo_[d_ - 1] = -hmax_;
    hi_[d_ - 1] = hmax_;
}

Eigen::VectorXd BoxChain::coords(const PointD& p) const {
    return axes_.transpose() * (p - origin_);
}

bool BoxChain::contains(const PointD& p, double rel_tol) const {
    Eigen::VectorXd c = coords(p);
    for (int i = 0; i < d_; ++i) {
        double span = hi_[i] - lo_[i];
        double tol = rel_tol * std::max(1.0, span);
        if (c(i) < lo_[i] - tol || c(i) > hi_[i] + tol) return false;
    }
    return true;
}

bool BoxChain::contains_definitional(const PointD& p, double rel_tol) const {
    Eigen::VectorXd c = coords(p);
    for (int i = 0; i < d_ - 1; ++i) {
        double span = hi_[i] - lo_[i];
        double tol = rel_tol * std::max(1.0, span);
        if (c(i) < lo_[i] - tol || c(i) > hi_[i] + tol) return false;
    }
    // measure of conv(prefix, p) through the determinant route
    SimplexTuple T;
    T.pts = prefix_;
    T.pts.push_back(p);
    double m = simplex_measure(T);
    return m <= budget_ * (1.0 + rel_tol) + rel_tol * 1e-300;
}

double BoxChain::volume() const {
    double v = 1.0;
    for (int i = 0; i < d_; ++i) v *= hi_[i] - lo_[i];
    return v;
}

bool hull_in_set(const std::vector<PointD>& tuple,
                 const std::function<bool(const PointD&)>& member, Rng& rng,
                 int random_probes) {
    const int k = static_cast<int>(tuple.size());
    // deterministic barycentric lattice of resolution 5
    const int res = 5;
    std::vector<int> bar(k, 0);
    std::function<bool(int, int)> walk = [&](int pos, int left) -> bool {
        if (pos == k - 1) {
            bar[pos] = left;
            PointD p = PointD::Zero(tuple[0].size());
            for (int i = 0; i < k; ++i) p += (static_cast<double>(bar[i]) / res) * tuple[i];
            return member(p);
        }
        for (int v = 0; v <= left; ++v) {
            bar[pos] = v;
            if (!walk(pos + 1, left - v)) return false;
        }
        return true;
    };
    if (!walk(0, res)) return false;
    for (int i = 0; i < random_probes; ++i) {
        Eigen::VectorXd w(k);
        for (int j = 0; j < k; ++j) w(j) = -std::log(1.0 - rng.uniform());
        w /= w.sum();
        PointD p = PointD::Zero(tuple[0].size());
        for (int j = 0; j < k; ++j) p += w(j) * tuple[j];
        if (!member(p)) return false;
    }
    return true;
}

BoxReport verify_box_containment(const std::function<bool(const PointD&)>& member,
                                 const std::function<PointD(Rng&)>& sampler, double volume,
                                 double c_upper, int d, long long tuples, std::uint64_t seed) {
    BoxReport rep;
    const double budget = volume * c_upper;
    for (long long t = 0; t < tuples; ++t) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
        SimplexTuple T;
        for (int i = 0; i < d + 1; ++i) T.pts.push_back(sampler(rng));
        ++rep.checked;

        CanonicalOrder ord;
        try {
            ord = canonical_permutation(T);
        } catch (const GeomError&) {
            continue;  // degenerate tuples carry no mass
        }
        if (!hull_in_set(T.pts, member, rng)) continue;
        ++rep.hull_in_count;

        std::vector<PointD> prefix(ord.points.begin(), ord.points.end() - 1);
        BoxChain chain(prefix, budget);

        // projections of every tuple point lie in each partial box
        Eigen::VectorXd c0 = chain.coords(ord.points.back());
        for (const auto& p : ord.points) {
            Eigen::VectorXd c = chain.coords(p);
            for (int i = 0; i < d - 1; ++i) {
                double span = chain.extent_high(i) - chain.extent_low(i);
                double tol = 1e-9 * std::max(1.0, span);
                if (c(i) < chain.extent_low(i) - tol || c(i) > chain.extent_high(i) + tol) {
                    ++rep.projection_failures;
                    i = d;  // count once per point
                }
            }
        }
        if (!chain.contains(ord.points.back())) ++rep.containment_failures;

        // simplex-measure identity for the prefix face
        double base = 1.0;
        for (double h : chain.heights()) base *= h;
        base /= factorial(d - 1);
        double direct = embedded_simplex_measure(prefix);
        double rel = std::abs(direct - base) / std::max(base, 1e-300);
        rep.max_obs1_rel_error = std::max(rep.max_obs1_rel_error, rel);
    }
    return rep;
}

}  // namespace beeridx
