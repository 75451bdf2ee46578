#include "beeridx/cover.hpp"

#include <algorithm>
#include <cmath>

#include "beeridx/estimators.hpp"

namespace beeridx {

namespace {

Trapezoid make_trapezoid(std::vector<Point2> verts, char kind) {
    Trapezoid t;
    if (shoelace_area(verts) < 0.0) std::reverse(verts.begin(), verts.end());
    t.verts = std::move(verts);
    t.kind = kind;
    t.area = shoelace_area(t.verts);
    return t;
}

Point2 dilate(const Point2& center, const Point2& p, double ratio) {
    return center + ratio * (p - center);
}

}  // namespace

bool Trapezoid::contains(const Point2& p) const {
    if (kind == 'R' || area <= 0.0) {
        // degenerate: the cover is a segment (or empty); containment means
        // lying on it
        for (std::size_t i = 0; i + 1 < verts.size(); ++i)
            if (on_segment(verts[i], verts[i + 1], p)) return true;
        return false;
    }
    const int n = static_cast<int>(verts.size());
    for (int i = 0; i < n; ++i)
        if (orient2d(verts[i], verts[(i + 1) % n], p) < 0) return false;
    return true;
}

double cover_coefficient(double gamma) {
    double x = gamma;
    double ix = 1.0 / (x * x);
    double iy = 1.0 / ((1.0 - x) * (1.0 - x));
    return 6.0 * ix + 3.0 * iy * ix + 4.0 * iy - 1.0;
}

std::vector<Trapezoid> trapezoid_cover(const Point2& A, const CoverContext& ctx) {
    if (!ctx.tree) throw GeomError("trapezoid_cover: missing body tree");
    const BodyTree& tree = *ctx.tree;
    const SimplePolygon& world = tree.source.polygon;
    const double g = ctx.gamma;
    const double K = ctx.K;
    if (!(g > 0.0 && g < 1.0)) throw GeomError("trapezoid_cover: gamma must be in (0,1)");
    if (!(K > 0.0)) throw GeomError("trapezoid_cover: K must be positive");

    int bi = locate_body(tree, A);
    if (bi < 0) throw GeomError("trapezoid_cover: point outside the decomposed set");
    const Body& body = tree.bodies[bi];

    const double snap = 1e-12 * std::max(1.0, world.scale());
    double dA = body.frame.to_frame(A).y();
    if (dA <= snap) {
        // A on its body root: everything it must cover lies on the root
        Trapezoid t;
        t.kind = 'R';
        t.verts = {body.root.a, body.root.b};
        t.area = 0.0;
        return {t};
    }

    std::vector<Trapezoid> cover;

    // visible portion of the body root, seen within the whole rooted set
    auto iv = visible_interval(world, body.root, A);
    if (!iv) throw GeomError("trapezoid_cover: body point sees no root point");
    Point2 C = body.root.at(iv->first);
    Point2 D = body.root.at(iv->second);
    Point2 H = body.root.at(0.5 * (iv->first + iv->second));

    // T1: root-parallel trapezoid, larger base 8K/d(A) centered at A, smaller
    // base 4K/d(A) centered at H, dilated by 1/gamma from A
    {
        const BodyFrame& f = body.frame;
        Point2 Af = f.to_frame(A);
        Point2 Hf = f.to_frame(H);
        double wa = 4.0 * K / dA;  // half of the larger base
        double wh = 2.0 * K / dA;  // half of the smaller base
        std::vector<Point2> t1{{Hf.x() - wh, 0.0},
                               {Hf.x() + wh, 0.0},
                               {Af.x() + wa, Af.y()},
                               {Af.x() - wa, Af.y()}};
        for (auto& p : t1) p = f.from_frame(dilate(Af, p, 1.0 / g));
        cover.push_back(make_trapezoid(std::move(t1), '1'));
    }

    // T2 only exists for bodies attached to a parent
    if (body.parent >= 0) {
        const Body& parent = tree.bodies[body.parent];
        const BodyFrame& pf = parent.frame;
        // conjugate the frame if the child hangs below the parent root line
        bool flip = pf.to_frame(A).y() < 0.0;
        auto TF = [&](const Point2& w) {
            Point2 q = pf.to_frame(w);
            if (flip) q.y() = -q.y();
            return q;
        };
        auto FF = [&](Point2 q) {
            if (flip) q.y() = -q.y();
            return pf.from_frame(q);
        };
        Point2 Apf = TF(A);
        double h = Apf.y();  // d(A, r')
        Point2 qa = TF(body.root.a);
        Point2 qb = TF(body.root.b);
        double denom = qb.y() - qa.y();
        if (h > snap && std::abs(denom) > 1e-12 * (qb - qa).norm()) {
            // O = q 'cap' {y=h}, O0 = q 'cap' {y=0}
            double tO = (h - qa.y()) / denom;
            double t0 = (0.0 - qa.y()) / denom;
            Point2 O = qa + tO * (qb - qa);
            Point2 O0 = qa + t0 * (qb - qa);
            // the trapezoid sits on the side of q away from A: stepping from
            // O along +x crosses to the side with sign -qd_y, so match signs
            double sideA = (qb.x() - qa.x()) * (Apf.y() - qa.y()) -
                           (qb.y() - qa.y()) * (Apf.x() - qa.x());
            double dir = (qb.y() - qa.y()) * sideA > 0.0 ? 1.0 : -1.0;
            double L1 = 4.0 * K / ((1.0 - g) * (1.0 - g) * h);
            double L2 = 2.0 * K / ((1.0 - g) * (1.0 - g) * h);
            std::vector<Point2> t2{O, Point2{O.x() + dir * L1, h}, Point2{O0.x() + dir * L2, 0.0},
                                   O0};
            for (auto& p : t2) p = FF(dilate(O, p, 1.0 / g));
            cover.push_back(make_trapezoid(std::move(t2), '2'));
        }
    }

    // T3: dilation of the visibility triangle ACD by 2/(1-gamma) from A,
    // minus the triangle itself
    {
        double ratio = 2.0 / (1.0 - g);
        Point2 C2 = dilate(A, C, ratio);
        Point2 D2 = dilate(A, D, ratio);
        cover.push_back(make_trapezoid({C, D, D2, C2}, '3'));
    }

    return cover;
}

CoverReport verify_cover(const RootedPolygon& R, const BodyTree& tree, double gamma, double K,
                         long long pairs, std::uint64_t seed) {
    CoverReport rep;
    CoverContext ctx{gamma, K, &tree};
    Triangulation tri = triangulate(R.polygon);

    for (long long i = 0; i < pairs; ++i) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        Point2 a = sample_uniform(R.polygon, tri, rng);
        Point2 b = sample_uniform(R.polygon, tri, rng);
        ++rep.sampled;
        if (!R.polygon.contains_segment({a, b, true})) continue;
        ++rep.checked;

        std::vector<Trapezoid> ca = trapezoid_cover(a, ctx);
        double area_a = 0.0;
        bool b_covered = false;
        for (const auto& t : ca) {
            area_a += t.area;
            if (t.contains(b)) b_covered = true;
        }
        rep.max_cover_area_ratio = std::max(rep.max_cover_area_ratio, area_a / K);
        if (b_covered) continue;

        std::vector<Trapezoid> cb = trapezoid_cover(b, ctx);
        double area_b = 0.0;
        bool a_covered = false;
        for (const auto& t : cb) {
            area_b += t.area;
            if (t.contains(a)) a_covered = true;
        }
        rep.max_cover_area_ratio = std::max(rep.max_cover_area_ratio, area_b / K);
        if (!a_covered) ++rep.violations;
    }
    return rep;
}

CrossingReport crossing_region_check(const SimplePolygon& S, const Segment2& ell,
                                     const Point2& A, double K, long long samples,
                                     std::uint64_t seed) {
    CrossingReport rep;
    rep.samples = samples;
    rep.bound = 3.0 * K;
    Triangulation tri = triangulate(S);

    auto segments_meet = [](const Point2& a, const Point2& b, const Point2& c,
                            const Point2& d) {
        int o1 = orient2d(a, b, c), o2 = orient2d(a, b, d);
        int o3 = orient2d(c, d, a), o4 = orient2d(c, d, b);
        if (o1 * o2 < 0 && o3 * o4 < 0) return true;
        if (o1 == 0 && on_segment(a, b, c)) return true;
        if (o2 == 0 && on_segment(a, b, d)) return true;
        if (o3 == 0 && on_segment(c, d, a)) return true;
        if (o4 == 0 && on_segment(c, d, b)) return true;
        return false;
    };

    long long hits = 0;
    for (long long i = 0; i < samples; ++i) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
        Point2 b = sample_uniform(S, tri, rng);
        if (std::abs(b.y()) > std::abs(A.y())) continue;
        if (!segments_meet(A, b, ell.a, ell.b)) continue;
        if (!S.contains_segment({A, b, true})) continue;
        ++hits;
    }
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    rep.mc_area = p * S.area();
    rep.sigma = S.area() * std::sqrt(std::max(p * (1.0 - p), 0.0) / samples);
    rep.ok = rep.mc_area <= rep.bound + 3.0 * rep.sigma;
    return rep;
}

}  // namespace beeridx
