#include "beeridx/constructions.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace beeridx {

SimplePolygon comb_polygon(int n, double delta) {
    if (n < 1) throw GeomError("comb: n must be >= 1");
    if (!(delta > 0.0) || delta >= 1.0 / (2.0 * n))
        throw GeomError("comb: delta must be in (0, 1/(2n))");
    std::vector<Point2> v;
    v.emplace_back(0.0, 0.0);
    v.emplace_back(0.0, 1.0);
    v.emplace_back(1.0, 1.0);
    for (int i = 1; i < n; ++i) {
        v.emplace_back((2 * i - 1) * delta, delta);
        v.emplace_back((2 * i) * delta, delta);
        v.emplace_back(2.0 * i, 1.0);
        v.emplace_back(2.0 * i + 1, 1.0);
    }
    return SimplePolygon::from_vertices(std::move(v));
}

RootedPolygon spiral_polygon(int turns) {
    if (turns < 1 || turns > 6) throw GeomError("spiral: turns must be in [1,6]");
    // corridor width 1, wall width 1; winding k is inset by 2k
    const double size = 4.0 * turns;
    std::vector<Point2> cyc;

    // inner wall, spiraling inward from the entrance cap corner (0,1)
    cyc.emplace_back(0.0, 1.0);
    for (int k = 0; k < turns; ++k) {
        double o = 2.0 * k;
        cyc.emplace_back(size - 1.0 - o, 1.0 + o);           // bottom run end
        cyc.emplace_back(size - 1.0 - o, size - 1.0 - o);    // up the right
        cyc.emplace_back(1.0 + o, size - 1.0 - o);           // across the top
        if (k < turns - 1)
            cyc.emplace_back(1.0 + o, 3.0 + o);              // down into next winding
        else
            cyc.emplace_back(1.0 + o, 2.0 + o);              // dead-end inner corner
    }
    // dead-end cap
    cyc.emplace_back(2.0 * (turns - 1), 2.0 * (turns - 1) + 2.0);
    // outer wall, spiraling back out
    for (int k = turns - 1; k >= 0; --k) {
        double o = 2.0 * k;
        cyc.emplace_back(o, size - o);
        cyc.emplace_back(size - o, size - o);
        cyc.emplace_back(size - o, o);
        if (k > 0)
            cyc.emplace_back(o - 2.0, o);
        else
            cyc.emplace_back(0.0, 0.0);
    }

    SimplePolygon P = SimplePolygon::from_vertices(std::move(cyc));
    return {P, Segment2{{0.0, 0.0}, {0.0, 1.0}, true}};
}

namespace {

std::int64_t binom(int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double ball_volume(int d) {
    // lambda_d of the unit ball
    if (d == 1) return 2.0;
    if (d == 2) return M_PI;
    double v1 = 2.0, v2 = M_PI;
    for (int k = 3; k <= d; ++k) {
        double v = 2.0 * M_PI / k * v1;
        v1 = v2;
        v2 = v;
    }
    return v2;
}

// Random ellipsoid of volume exactly `vol` fully inside (0,1)^d, as an affine
// map center + M*u over the unit ball. Axis ratios log-uniform in [1,8].
struct Ellipsoid {
    PointD center;
    Eigen::MatrixXd M;     // columns: semi-axis vectors
    Eigen::MatrixXd Minv;  // inverse for membership
};

Ellipsoid sample_ellipsoid(int d, double vol, Rng& rng) {
    for (int attempt = 0; attempt < 10000; ++attempt) {
        // orthonormal frame from a Gaussian matrix
        Eigen::MatrixXd G(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) G(i, j) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
        Eigen::MatrixXd Q = qr.householderQ();

        Eigen::VectorXd rho(d);
        for (int i = 0; i < d; ++i) rho(i) = std::exp(rng.uniform() * std::log(8.0));
        double s = std::pow(vol / (ball_volume(d) * rho.prod()), 1.0 / d);
        Eigen::VectorXd axes = s * rho;

        Eigen::MatrixXd M = Q * axes.asDiagonal();
        // axis-aligned extent of the ellipsoid along coordinate i is the
        // 2-norm of row i of M
        PointD center(d);
        bool fits = true;
        for (int i = 0; i < d; ++i) {
            double ext = M.row(i).norm();
            if (2.0 * ext >= 1.0) {
                fits = false;
                break;
            }
            center(i) = ext + rng.uniform() * (1.0 - 2.0 * ext);
        }
        if (!fits) continue;
        Ellipsoid e;
        e.center = center;
        e.M = M;
        e.Minv = M.inverse();
        return e;
    }
    throw GeomError("ellipsoid sampling failed: volume too large for the box");
}

}  // namespace

std::int64_t net_size(int d, int r) {
    int log2r = 0;
    while ((1 << log2r) < r) ++log2r;  // ceil(log2 r)
    return 2 * binom(d + 2, d) * static_cast<std::int64_t>(r) * log2r;
}

NetReport verify_net(const PuncturedBox& B, int trials, std::uint64_t seed) {
    NetReport rep;
    rep.trials = trials;
    const double vol = 1.0 / B.r;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
        Ellipsoid e = sample_ellipsoid(B.d, vol, rng);
        bool stabbed = false;
        for (const auto& p : B.points) {
            if ((e.Minv * (p - e.center)).squaredNorm() <= 1.0) {
                stabbed = true;
                break;
            }
        }
        if (stabbed)
            ++rep.stabbed;
        else
            ++rep.violations;
    }
    return rep;
}

PuncturedBox punctured_box_net(int d, int r, std::uint64_t seed, int max_retries, int trials) {
    if (d < 2 || r < 2) throw GeomError("punctured_box_net: need d >= 2 and r >= 2");
    const std::int64_t n = net_size(d, r);
    for (int retry = 0; retry <= max_retries; ++retry) {
        PuncturedBox B;
        B.d = d;
        B.r = r;
        B.seed = seed;
        B.vc_bound = static_cast<int>(binom(d + 2, d));
        B.retries_used = retry;
        B.points.reserve(n);
        for (std::int64_t i = 0; i < n; ++i) {
            Rng rng = Rng::substream(seed + 0x1000003ULL * retry, static_cast<std::uint64_t>(i));
            PointD p(d);
            for (int j = 0; j < d; ++j) p(j) = rng.uniform();
            B.points.push_back(std::move(p));
        }
        NetReport rep = verify_net(B, trials, seed ^ 0x5eedULL);
        if (rep.violations == 0) return B;
    }
    throw GeomError("punctured_box_net: retries exhausted without a verified net");
}

std::string punctured_box_to_json(const PuncturedBox& B) {
    nlohmann::json j;
    j["d"] = B.d;
    j["r"] = B.r;
    j["seed"] = B.seed;
    j["points"] = nlohmann::json::array();
    for (const auto& p : B.points) {
        nlohmann::json jp = nlohmann::json::array();
        for (int i = 0; i < p.size(); ++i) jp.push_back(p(i));
        j["points"].push_back(jp);
    }
    return j.dump();
}

PuncturedBox punctured_box_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    PuncturedBox B;
    B.d = j.at("d").get<int>();
    B.r = j.at("r").get<int>();
    B.seed = j.at("seed").get<std::uint64_t>();
    B.vc_bound = static_cast<int>(binom(B.d + 2, B.d));
    for (const auto& jp : j.at("points")) {
        PointD p(B.d);
        for (int i = 0; i < B.d; ++i) p(i) = jp.at(i).get<double>();
        B.points.push_back(std::move(p));
    }
    return B;
}

namespace {

// Clips a convex polygon by the half-plane left of the directed line a->b.
std::vector<Point2> clip_halfplane(const std::vector<Point2>& poly, const Point2& a,
                                   const Point2& b) {
    std::vector<Point2> out;
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        int sp = orient2d(a, b, p);
        int sq = orient2d(a, b, q);
        if (sp >= 0) out.push_back(p);
        if ((sp > 0 && sq < 0) || (sp < 0 && sq > 0)) {
            Point2 d1 = b - a, d2 = q - p;
            double denom = d1.x() * d2.y() - d1.y() * d2.x();
            double t = ((a - p).x() * d1.y() - (a - p).y() * d1.x()) / -denom;
            out.push_back(p + t * d2);
        }
    }
    return out;
}

}  // namespace

std::vector<SimplePolygon> hyperplane_partition_2d(const Point2& apex,
                                                   const std::vector<Point2>& N) {
    if (N.empty()) throw GeomError("hyperplane_partition: empty N");
    if (!(apex.x() > 0 && apex.x() < 1 && apex.y() > 0 && apex.y() < 1))
        throw GeomError("hyperplane_partition: apex must be inside the box");
    for (std::size_t i = 0; i < N.size(); ++i) {
        if ((N[i] - apex).squaredNorm() == 0.0)
            throw GeomError("hyperplane_partition: apex coincides with a puncture");
        for (std::size_t j = i + 1; j < N.size(); ++j)
            if (orient2d(apex, N[i], N[j]) == 0)
                throw GeomError("hyperplane_partition: punctures collinear with the apex");
        if (orient2d(apex, N[i], Point2(0, 0)) == 0)
            throw GeomError("hyperplane_partition: puncture line hits the origin");
    }

    const std::vector<Point2> box{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const int n = static_cast<int>(N.size());

    if (n == 1) {
        std::vector<SimplePolygon> cells;
        Point2 dir = N[0] - apex;
        for (int side = 0; side < 2; ++side) {
            Point2 a = apex, b = apex + (side == 0 ? dir : Point2(-dir));
            auto c = clip_halfplane(box, a, b);
            cells.push_back(SimplePolygon::from_clean_vertices(c));
        }
        return cells;
    }

    // pencil of n lines through the apex: 2n angular sectors clipped to the box
    std::vector<double> dirs;
    for (const auto& p : N) {
        double ang = std::atan2(p.y() - apex.y(), p.x() - apex.x());
        dirs.push_back(ang);
        dirs.push_back(ang > 0 ? ang - M_PI : ang + M_PI);
    }
    std::sort(dirs.begin(), dirs.end());

    std::vector<SimplePolygon> cells;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        double a1 = dirs[i];
        double a2 = (i + 1 < dirs.size()) ? dirs[i + 1] : dirs[0] + 2.0 * M_PI;
        Point2 u1(std::cos(a1), std::sin(a1));
        Point2 u2(std::cos(a2), std::sin(a2));
        // sector = right of ray u2, left of ray u1 (angles < pi apart)
        auto c = clip_halfplane(box, apex, apex + u1);
        c = clip_halfplane(c, apex + u2, apex);
        if (c.size() >= 3 && std::abs(shoelace_area(c)) > 0.0)
            cells.push_back(SimplePolygon::from_clean_vertices(c));
        else
            throw GeomError("hyperplane_partition: degenerate sector");
    }
    return cells;
}

std::vector<double> hyperplane_partition_volumes_mc(const std::vector<PointD>& A_pts,
                                                    const std::vector<PointD>& N, int samples,
                                                    std::uint64_t seed) {
    if (A_pts.empty() || N.empty()) throw GeomError("hyperplane_partition: empty input");
    const int d = static_cast<int>(A_pts.front().size());
    if (d < 3) throw GeomError("hyperplane_partition: MC route requires d >= 3");
    if (static_cast<int>(A_pts.size()) != d - 1)
        throw GeomError("hyperplane_partition: need d-1 apex points");

    // orthonormal complement of the direction space of aff(A_pts)
    Eigen::MatrixXd D(d, A_pts.size() - 1);
    for (std::size_t j = 1; j < A_pts.size(); ++j) D.col(j - 1) = A_pts[j] - A_pts[0];
    Eigen::MatrixXd base = Eigen::MatrixXd::Zero(d, d);
    int bc = 0;
    if (D.cols() > 0) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(D);
        Eigen::MatrixXd Q = qr.householderQ();
        for (int j = 0; j < D.cols(); ++j) base.col(bc++) = Q.col(j);
    }
    // extend to a full basis; the last two directions span the rotation plane
    Eigen::FullPivHouseholderQR<Eigen::MatrixXd> full(base.leftCols(std::max(bc, 1)));
    Eigen::MatrixXd Qf = full.matrixQ();
    Eigen::VectorXd e1 = Qf.col(d - 2), e2 = Qf.col(d - 1);

    auto angle_of = [&](const PointD& p) {
        PointD q = p - A_pts[0];
        return std::atan2(q.dot(e2), q.dot(e1));
    };

    std::vector<double> dirs;
    for (const auto& p : N) {
        double ang = angle_of(p);
        dirs.push_back(ang);
        dirs.push_back(ang > 0 ? ang - M_PI : ang + M_PI);
    }
    std::sort(dirs.begin(), dirs.end());

    std::vector<double> volumes(dirs.size(), 0.0);
    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(s));
        PointD p(d);
        for (int i = 0; i < d; ++i) p(i) = rng.uniform();
        double ang = angle_of(p);
        auto it = std::upper_bound(dirs.begin(), dirs.end(), ang);
        std::size_t idx = (it == dirs.begin()) ? dirs.size() - 1 : (it - dirs.begin() - 1);
        volumes[idx] += 1.0;
    }
    for (auto& v : volumes) v /= samples;
    return volumes;
}

ConeSet::ConeSet(SimplePolygon base) : base_(std::move(base)), tri_(triangulate(base_)) {}

bool ConeSet::contains(const Eigen::Vector3d& p) const {
    double t = p.z();
    if (t < 0.0 || t > 1.0) return false;
    if (t == 0.0) return p.x() == 0.0 && p.y() == 0.0;
    return base_.contains_point(Point2(p.x() / t, p.y() / t));
}

bool ConeSet::contains_segment(const Eigen::Vector3d& p, const Eigen::Vector3d& q) const {
    if (!contains(p) || !contains(q)) return false;
    if (p.z() == 0.0 || q.z() == 0.0) return true;  // apex ray: projects to a point set
    Point2 pp(p.x() / p.z(), p.y() / p.z());
    Point2 qq(q.x() / q.z(), q.y() / q.z());
    return base_.contains_segment({pp, qq, true});
}

bool ConeSet::contains_triangle(const Eigen::Vector3d& p, const Eigen::Vector3d& q,
                                const Eigen::Vector3d& r) const {
    return contains_segment(p, q) && contains_segment(q, r) && contains_segment(r, p);
}

Eigen::Vector3d ConeSet::sample(Rng& rng) const {
    double t = std::cbrt(rng.uniform());
    Point2 b = sample_uniform(base_, tri_, rng);
    return {t * b.x(), t * b.y(), t};
}

}  // namespace beeridx
