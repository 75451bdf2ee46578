#include "beeridx/predicates.hpp"

#include <algorithm>
#include <cmath>

namespace beeridx {

namespace {

// Error-free transformations (Knuth / Dekker). two_product uses fma, which is
// exact on all targets we build for.
inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    double bv = s - a;
    double av = s - bv;
    e = (a - av) + (b - bv);
}

inline void two_product(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

// Nonoverlapping expansion arithmetic: components stored in increasing order
// of magnitude; the sign of the expansion is the sign of its largest nonzero
// component.
struct Expansion {
    double c[16];
    int n = 0;

    void add(double b) {  // grow-expansion
        double q = b;
        int m = 0;
        double h[16];
        for (int i = 0; i < n; ++i) {
            double s, e;
            two_sum(q, c[i], s, e);
            if (e != 0.0) h[m++] = e;
            q = s;
        }
        h[m++] = q;
        n = m;
        for (int i = 0; i < m; ++i) c[i] = h[i];
    }

    int sign() const {
        for (int i = n - 1; i >= 0; --i) {
            if (c[i] > 0.0) return 1;
            if (c[i] < 0.0) return -1;
        }
        return 0;
    }
};

int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
    // det = ax*by - ax*cy + bx*cy - bx*ay + cx*ay - cx*by
    double p[6], e[6];
    two_product(ax, by, p[0], e[0]);
    two_product(-ax, cy, p[1], e[1]);
    two_product(bx, cy, p[2], e[2]);
    two_product(-bx, ay, p[3], e[3]);
    two_product(cx, ay, p[4], e[4]);
    two_product(-cx, by, p[5], e[5]);
    Expansion x;
    for (int i = 0; i < 6; ++i) {
        x.add(e[i]);
        x.add(p[i]);
    }
    return x.sign();
}

}  // namespace

int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
    double detleft = (ax - cx) * (by - cy);
    double detright = (ay - cy) * (bx - cx);
    double det = detleft - detright;

    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = -detleft - detright;
    } else {
        return detright > 0.0 ? -1 : (detright < 0.0 ? 1 : 0);
    }

    // 3.33e-16 > (3 + 16*eps)*eps, the static filter bound for this formula
    double errbound = 3.3306690738754716e-16 * detsum;
    if (det > errbound) return 1;
    if (-det > errbound) return -1;
    return orient2d_exact(ax, ay, bx, by, cx, cy);
}

bool on_segment(double ax, double ay, double bx, double by, double px, double py) {
    if (orient2d(ax, ay, bx, by, px, py) != 0) return false;
    return std::min(ax, bx) <= px && px <= std::max(ax, bx) &&
           std::min(ay, by) <= py && py <= std::max(ay, by);
}

}  // namespace beeridx
