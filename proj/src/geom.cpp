#include "beeridx/geom.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace beeridx {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Columns are the edge vectors from pts[0].
Eigen::MatrixXd edge_matrix(const std::vector<PointD>& pts) {
    const int d = static_cast<int>(pts.front().size());
    const int m = static_cast<int>(pts.size()) - 1;
    Eigen::MatrixXd M(d, m);
    for (int j = 0; j < m; ++j) M.col(j) = pts[j + 1] - pts[0];
    return M;
}

double coordinate_scale(const std::vector<PointD>& pts) {
    double s = 0.0;
    for (const auto& p : pts) s = std::max(s, p.lpNorm<Eigen::Infinity>());
    return s > 0.0 ? s : 1.0;
}

}  // namespace

double simplex_measure(const SimplexTuple& T) {
    const int d = T.dim();
    if (T.size() != d + 1) throw GeomError("simplex_measure: tuple size must be d+1");
    for (const auto& p : T.pts)
        if (p.size() != d) throw GeomError("simplex_measure: dimension mismatch");
    Eigen::MatrixXd M = edge_matrix(T.pts);
    return std::abs(M.determinant()) / factorial(d);
}

double embedded_simplex_measure(const std::vector<PointD>& pts) {
    const int k = static_cast<int>(pts.size()) - 1;
    if (k < 1) return 0.0;
    Eigen::MatrixXd M = edge_matrix(pts);
    double g = (M.transpose() * M).determinant();
    if (g < 0.0) g = 0.0;
    return std::sqrt(g) / factorial(k);
}

double dist_to_affine_hull(const PointD& P, const std::vector<PointD>& basis) {
    PointD proj = project_to_affine_hull(P, basis);
    return (P - proj).norm();
}

PointD project_to_affine_hull(const PointD& P, const std::vector<PointD>& basis) {
    if (basis.empty()) throw GeomError("affine hull: empty basis");
    if (basis.size() == 1) return basis[0];
    Eigen::MatrixXd M = edge_matrix(basis);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double scale = coordinate_scale(basis);
    if (svd.singularValues()(svd.singularValues().size() - 1) < kDegenerateTol * scale)
        throw GeomError("affine hull: basis affinely dependent");
    Eigen::VectorXd rhs = P - basis[0];
    Eigen::VectorXd coef = svd.solve(rhs);
    return basis[0] + M * coef;
}

bool point_in_simplex(const PointD& P, const SimplexTuple& T, bool closed) {
    const int d = T.dim();
    if (T.size() != d + 1) throw GeomError("point_in_simplex: tuple size must be d+1");
    if (P.size() != d) throw GeomError("point_in_simplex: dimension mismatch");
    Eigen::MatrixXd M = edge_matrix(T.pts);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    double scale = coordinate_scale(T.pts);
    lu.setThreshold(kDegenerateTol);
    if (!lu.isInvertible()) throw GeomError("point_in_simplex: degenerate simplex");
    Eigen::VectorXd lambda = lu.solve(P - T.pts[0]);
    double lambda0 = 1.0 - lambda.sum();
    double tol = kDegenerateTol * std::max(1.0, scale);
    if (closed) {
        if (lambda0 < -tol) return false;
        for (int i = 0; i < d; ++i)
            if (lambda(i) < -tol) return false;
        return true;
    }
    if (lambda0 <= tol) return false;
    for (int i = 0; i < d; ++i)
        if (lambda(i) <= tol) return false;
    return true;
}

std::pair<int, int> diameter_pair(const std::vector<PointD>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 2) throw GeomError("diameter_pair: need at least two points");
    double best = -1.0;
    std::pair<int, int> arg{0, 1};
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d2 = (pts[i] - pts[j]).squaredNorm();
            if (d2 > best) {
                best = d2;
                arg = {i, j};
            }
        }
    return arg;
}

std::pair<int, int> diameter_pair_2d(const std::vector<Point2>& pts) {
    std::vector<PointD> lifted;
    lifted.reserve(pts.size());
    for (const auto& p : pts) {
        PointD q(2);
        q << p.x(), p.y();
        lifted.push_back(q);
    }
    return diameter_pair(lifted);
}

std::vector<Point2> convex_hull_2d(const std::vector<Point2>& pts) {
    if (pts.size() < 3) throw GeomError("convex_hull_2d: need at least 3 points");
    std::vector<Point2> p = pts;
    std::sort(p.begin(), p.end(), [](const Point2& a, const Point2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    p.erase(std::unique(p.begin(), p.end(),
                        [](const Point2& a, const Point2& b) { return a == b; }),
            p.end());
    const int n = static_cast<int>(p.size());
    if (n < 3) throw GeomError("convex_hull_2d: need 3 distinct points");

    std::vector<Point2> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {  // lower
        while (k >= 2 && orient2d(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (int i = n - 2, lo = k + 1; i >= 0; --i) {  // upper
        while (k >= lo && orient2d(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    if (h.size() < 3) throw GeomError("convex_hull_2d: all points collinear");
    return h;
}

}  // namespace beeridx
