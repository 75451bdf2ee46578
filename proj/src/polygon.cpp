#include "beeridx/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace beeridx {

namespace {

constexpr double kParamTol = 1e-12;

double cross2(const Point2& u, const Point2& v) { return u.x() * v.y() - u.y() * v.x(); }

bool points_coincide(const Point2& a, const Point2& b, double snap) {
    return (a - b).lpNorm<Eigen::Infinity>() <= snap;
}

}  // namespace

double shoelace_area(const std::vector<Point2>& verts) {
    double s = 0.0;
    const int n = static_cast<int>(verts.size());
    for (int i = 0; i < n; ++i) {
        const Point2& p = verts[i];
        const Point2& q = verts[(i + 1) % n];
        s += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * s;
}

SimplePolygon SimplePolygon::from_vertices(std::vector<Point2> verts) {
    if (verts.size() < 3) throw GeomError("polygon: need at least 3 vertices");

    double scale = 0.0;
    for (const auto& v : verts) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
    if (scale <= 0.0) scale = 1.0;
    for (const auto& v : verts)
        if (!std::isfinite(v.x()) || !std::isfinite(v.y()))
            throw GeomError("polygon: non-finite coordinate");
    const double snap = 1e-12 * scale;

    if (shoelace_area(verts) < 0.0) std::reverse(verts.begin(), verts.end());

    // strip duplicates and collinear vertices (covers reversal spikes left by
    // chord splits that ride along the boundary)
    bool changed = true;
    while (changed && verts.size() > 3) {
        changed = false;
        for (int i = 0; i < static_cast<int>(verts.size()) && verts.size() > 3; ++i) {
            int n = static_cast<int>(verts.size());
            const Point2& u = verts[(i + n - 1) % n];
            const Point2& v = verts[i];
            const Point2& w = verts[(i + 1) % n];
            if (points_coincide(u, v, snap) || points_coincide(v, w, snap) ||
                orient2d(u, v, w) == 0) {
                verts.erase(verts.begin() + i);
                changed = true;
                --i;
            }
        }
    }
    if (verts.size() < 3) throw GeomError("polygon: degenerate after normalization");

    const int n = static_cast<int>(verts.size());
    for (int i = 0; i < n; ++i) {
        const Point2& a = verts[i];
        const Point2& b = verts[(i + 1) % n];
        for (int j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            const Point2& c = verts[j];
            const Point2& d = verts[(j + 1) % n];
            int o1 = orient2d(a, b, c);
            int o2 = orient2d(a, b, d);
            int o3 = orient2d(c, d, a);
            int o4 = orient2d(c, d, b);
            if (adjacent) {
                // shared endpoint only; any other contact is a fold
                if (o1 == 0 && o2 == 0) throw GeomError("polygon: collinear fold");
                continue;
            }
            if (o1 * o2 < 0 && o3 * o4 < 0) throw GeomError("polygon: self-intersection");
            if ((o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
                (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b)))
                throw GeomError("polygon: boundary touches itself");
        }
    }

    SimplePolygon P;
    P.verts_ = std::move(verts);
    P.finish();
    if (P.area_ <= 0.0) throw GeomError("polygon: non-positive area");
    return P;
}

SimplePolygon SimplePolygon::from_clean_vertices(std::vector<Point2> verts) {
    if (verts.size() < 3) throw GeomError("polygon: need at least 3 vertices");
    if (shoelace_area(verts) < 0.0) std::reverse(verts.begin(), verts.end());
    SimplePolygon P;
    P.verts_ = std::move(verts);
    P.finish();
    return P;
}

void SimplePolygon::finish() {
    area_ = shoelace_area(verts_);
    bbox_min_ = bbox_max_ = verts_[0];
    for (const auto& v : verts_) {
        bbox_min_ = bbox_min_.cwiseMin(v);
        bbox_max_ = bbox_max_.cwiseMax(v);
    }
    boundary_tol_ = 1e-12 * std::max(1.0, (bbox_max_ - bbox_min_).norm());
}

double SimplePolygon::scale() const { return (bbox_max_ - bbox_min_).norm(); }

double SimplePolygon::distance_to_boundary(const Point2& p) const {
    double best = std::numeric_limits<double>::infinity();
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const Point2& u = verts_[i];
        const Point2& w = verts_[(i + 1) % n];
        Point2 d = w - u;
        double t = std::clamp((p - u).dot(d) / d.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (p - (u + t * d)).norm());
    }
    return best;
}

bool SimplePolygon::on_boundary(const Point2& p) const {
    const int n = size();
    for (int i = 0; i < n; ++i)
        if (beeridx::on_segment(verts_[i], verts_[(i + 1) % n], p)) return true;
    return distance_to_boundary(p) <= boundary_tol_;
}

bool SimplePolygon::contains_point(const Point2& p) const {
    if (p.x() < bbox_min_.x() - boundary_tol_ || p.x() > bbox_max_.x() + boundary_tol_ ||
        p.y() < bbox_min_.y() - boundary_tol_ || p.y() > bbox_max_.y() + boundary_tol_)
        return false;
    if (on_boundary(p)) return true;
    // crossing parity with the half-open edge rule; exact orientations make
    // vertex-on-ray cases consistent
    bool inside = false;
    const int n = size();
    for (int i = 0; i < n; ++i) {
        const Point2& u = verts_[i];
        const Point2& v = verts_[(i + 1) % n];
        if ((u.y() <= p.y()) == (v.y() <= p.y())) continue;
        int o = orient2d(u, v, p);
        if (v.y() > u.y()) {
            if (o > 0) inside = !inside;
        } else {
            if (o < 0) inside = !inside;
        }
    }
    return inside;
}

std::vector<double> boundary_intersection_params(const SimplePolygon& P, const Segment2& s) {
    std::vector<double> ts{0.0, 1.0};
    const Point2 dir = s.b - s.a;
    const double len2 = dir.squaredNorm();
    if (len2 == 0.0) return ts;
    const int n = P.size();
    // split at near-vertex grazes so no sub-piece midpoint can sit on a
    // boundary corner and hide an outside stretch
    const double graze = 1e-9 * std::max(1.0, P.scale());
    for (const auto& w : P.vertices()) {
        double t = (w - s.a).dot(dir) / len2;
        if (t <= 0.0 || t >= 1.0) continue;
        if ((s.at(t) - w).norm() <= graze) ts.push_back(t);
    }
    for (int i = 0; i < n; ++i) {
        const Point2& u = P.vertices()[i];
        const Point2& v = P.vertices()[(i + 1) % n];
        int o1 = orient2d(s.a, s.b, u);
        int o2 = orient2d(s.a, s.b, v);
        int o3 = orient2d(u, v, s.a);
        int o4 = orient2d(u, v, s.b);
        if (o1 == 0 && o2 == 0) {
            // edge collinear with s: record the overlap interval endpoints
            double tu = (u - s.a).dot(dir) / len2;
            double tv = (v - s.a).dot(dir) / len2;
            if (tu > tv) std::swap(tu, tv);
            if (tv < 0.0 || tu > 1.0) continue;
            ts.push_back(std::clamp(tu, 0.0, 1.0));
            ts.push_back(std::clamp(tv, 0.0, 1.0));
            continue;
        }
        if (o1 == 0) {
            double t = (u - s.a).dot(dir) / len2;
            if (t >= 0.0 && t <= 1.0) ts.push_back(t);
            continue;
        }
        if (o2 == 0) {
            double t = (v - s.a).dot(dir) / len2;
            if (t >= 0.0 && t <= 1.0) ts.push_back(t);
            continue;
        }
        if (o1 != o2 && ((o3 == 0 || o4 == 0) || o3 != o4)) {
            // proper or endpoint-touching transversal crossing
            double denom = cross2(dir, v - u);
            if (denom == 0.0) continue;
            double t = cross2(u - s.a, v - u) / denom;
            if (t >= 0.0 && t <= 1.0) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    std::vector<double> out;
    for (double t : ts)
        if (out.empty() || t - out.back() > kParamTol) out.push_back(t);
    return out;
}

bool SimplePolygon::contains_segment(const Segment2& s) const {
    if (!contains_point(s.a) || !contains_point(s.b)) return false;
    if ((s.b - s.a).squaredNorm() == 0.0) return true;
    std::vector<double> ts = boundary_intersection_params(*this, s);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double mid = 0.5 * (ts[i] + ts[i + 1]);
        if (!contains_point(s.at(mid))) return false;
    }
    return true;
}

namespace {

bool point_in_triangle_closed(const Point2& a, const Point2& b, const Point2& c,
                              const Point2& p) {
    int o1 = orient2d(a, b, p);
    int o2 = orient2d(b, c, p);
    int o3 = orient2d(c, a, p);
    return o1 >= 0 && o2 >= 0 && o3 >= 0;
}

}  // namespace

Triangulation triangulate(const SimplePolygon& P) {
    const auto& v = P.vertices();
    std::vector<int> idx(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) idx[i] = static_cast<int>(i);

    Triangulation tri;
    bool strict_block = true;
    int stall = 0;
    while (idx.size() > 3) {
        const int m = static_cast<int>(idx.size());
        bool clipped = false;
        for (int k = 0; k < m; ++k) {
            int ip = idx[(k + m - 1) % m], ic = idx[k], in = idx[(k + 1) % m];
            if (orient2d(v[ip], v[ic], v[in]) <= 0) continue;
            bool blocked = false;
            for (int j = 0; j < m; ++j) {
                int o = idx[j];
                if (o == ip || o == ic || o == in) continue;
                bool hit = strict_block
                               ? point_in_triangle_closed(v[ip], v[ic], v[in], v[o])
                               : (orient2d(v[ip], v[ic], v[o]) > 0 &&
                                  orient2d(v[ic], v[in], v[o]) > 0 &&
                                  orient2d(v[in], v[ip], v[o]) > 0);
                if (hit) {
                    blocked = true;
                    break;
                }
            }
            if (blocked) continue;
            tri.triangles.push_back({ip, ic, in});
            idx.erase(idx.begin() + k);
            clipped = true;
            break;
        }
        if (!clipped) {
            if (strict_block && stall == 0) {
                strict_block = false;  // collinear vertices on ear boundaries
                stall = 1;
                continue;
            }
            throw GeomError("triangulate: no ear found");
        }
        stall = 0;
        strict_block = true;
    }
    tri.triangles.push_back({idx[0], idx[1], idx[2]});

    tri.cumulative_area.reserve(tri.triangles.size());
    double acc = 0.0;
    for (const auto& t : tri.triangles) {
        double a = 0.5 * std::abs(cross2(v[t[1]] - v[t[0]], v[t[2]] - v[t[0]]));
        acc += a;
        tri.cumulative_area.push_back(acc);
    }
    return tri;
}

Point2 sample_uniform(const SimplePolygon& P, const Triangulation& tri, Rng& rng) {
    double target = rng.uniform() * tri.total_area();
    auto it = std::lower_bound(tri.cumulative_area.begin(), tri.cumulative_area.end(), target);
    std::size_t k = static_cast<std::size_t>(it - tri.cumulative_area.begin());
    if (k >= tri.triangles.size()) k = tri.triangles.size() - 1;
    const auto& t = tri.triangles[k];
    const auto& v = P.vertices();
    double u1 = rng.uniform(), u2 = rng.uniform();
    if (u1 + u2 > 1.0) {
        u1 = 1.0 - u1;
        u2 = 1.0 - u2;
    }
    return v[t[0]] + u1 * (v[t[1]] - v[t[0]]) + u2 * (v[t[2]] - v[t[0]]);
}

namespace {

// Parameters (along the infinite line a + t*dir) of all contacts between the
// line and the polygon boundary.
std::vector<double> line_contact_params(const SimplePolygon& P, const Point2& a,
                                        const Point2& dir) {
    std::vector<double> ts;
    const double len2 = dir.squaredNorm();
    const Point2 b = a + dir;
    const int n = P.size();
    for (int i = 0; i < n; ++i) {
        const Point2& u = P.vertices()[i];
        const Point2& v = P.vertices()[(i + 1) % n];
        int o1 = orient2d(a, b, u);
        int o2 = orient2d(a, b, v);
        if (o1 == 0) ts.push_back((u - a).dot(dir) / len2);
        if (o2 == 0) ts.push_back((v - a).dot(dir) / len2);
        if (o1 != 0 && o2 != 0 && o1 != o2) {
            double denom = cross2(dir, v - u);
            if (denom != 0.0) ts.push_back(cross2(u - a, v - u) / denom);
        }
    }
    std::sort(ts.begin(), ts.end());
    std::vector<double> out;
    for (double t : ts)
        if (out.empty() || t - out.back() > kParamTol) out.push_back(t);
    return out;
}

}  // namespace

Segment2 extend_to_diagonal(const SimplePolygon& P, const Segment2& s) {
    if (!P.contains_segment(s)) throw GeomError("extend_to_diagonal: segment not inside polygon");
    const Point2 dir = s.b - s.a;
    if (dir.squaredNorm() == 0.0) throw GeomError("extend_to_diagonal: degenerate segment");
    std::vector<double> ts = line_contact_params(P, s.a, dir);

    double t_hi = 1.0;
    for (double t : ts) {
        if (t <= t_hi + kParamTol) continue;
        if (P.contains_segment({s.at(t_hi), s.at(t), true}))
            t_hi = t;
        else
            break;
    }
    double t_lo = 0.0;
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        double t = *it;
        if (t >= t_lo - kParamTol) continue;
        if (P.contains_segment({s.at(t), s.at(t_lo), true}))
            t_lo = t;
        else
            break;
    }
    return {s.at(t_lo), s.at(t_hi), true};
}

std::pair<SimplePolygon, SimplePolygon> split_by_chord(const SimplePolygon& P,
                                                       const Segment2& chord) {
    const double snap = P.boundary_tol();
    const auto& v = P.vertices();
    const int n = P.size();

    // refined cycle with chord endpoints inserted; cast endpoints may sit an
    // ulp off their edge, so insertion goes by projection distance
    std::vector<Point2> cyc;
    int i0 = -1, i1 = -1;
    for (int i = 0; i < n; ++i) {
        const Point2& u = v[i];
        const Point2& w = v[(i + 1) % n];
        cyc.push_back(u);
        if (points_coincide(u, chord.a, snap)) i0 = static_cast<int>(cyc.size()) - 1;
        if (points_coincide(u, chord.b, snap)) i1 = static_cast<int>(cyc.size()) - 1;
        std::vector<std::pair<double, Point2>> ins;
        for (const Point2& c : {chord.a, chord.b}) {
            if (points_coincide(u, c, snap) || points_coincide(w, c, snap)) continue;
            Point2 d = w - u;
            double t = (c - u).dot(d) / d.squaredNorm();
            if (t <= 0.0 || t >= 1.0) continue;
            if ((c - (u + t * d)).norm() <= snap) ins.emplace_back(t, c);
        }
        std::sort(ins.begin(), ins.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (const auto& [t, c] : ins) {
            cyc.push_back(c);
            if (points_coincide(c, chord.a, snap)) i0 = static_cast<int>(cyc.size()) - 1;
            if (points_coincide(c, chord.b, snap)) i1 = static_cast<int>(cyc.size()) - 1;
        }
    }
    if (i0 < 0 || i1 < 0 || i0 == i1)
        throw GeomError("split_by_chord: chord endpoints not on the boundary");

    const int m = static_cast<int>(cyc.size());
    std::vector<Point2> part1, part2;
    for (int i = i0; i != i1; i = (i + 1) % m) part1.push_back(cyc[i]);
    part1.push_back(cyc[i1]);
    for (int i = i1; i != i0; i = (i + 1) % m) part2.push_back(cyc[i]);
    part2.push_back(cyc[i0]);

    return {SimplePolygon::from_vertices(std::move(part1)),
            SimplePolygon::from_vertices(std::move(part2))};
}

namespace {

// Portion of the chord lying on the boundary of part: union of the collinear
// overlaps with part edges, required to be one interval.
Segment2 chord_portion_on_boundary(const SimplePolygon& part, const Segment2& chord) {
    const Point2 dir = chord.b - chord.a;
    const double len2 = dir.squaredNorm();
    std::vector<std::pair<double, double>> iv;
    const int n = part.size();
    for (int i = 0; i < n; ++i) {
        const Point2& u = part.vertices()[i];
        const Point2& w = part.vertices()[(i + 1) % n];
        if (orient2d(chord.a, chord.b, u) != 0 || orient2d(chord.a, chord.b, w) != 0) continue;
        double tu = (u - chord.a).dot(dir) / len2;
        double tw = (w - chord.a).dot(dir) / len2;
        if (tu > tw) std::swap(tu, tw);
        tu = std::max(tu, 0.0);
        tw = std::min(tw, 1.0);
        if (tw - tu > kParamTol) iv.emplace_back(tu, tw);
    }
    if (iv.empty()) throw GeomError("split_by_diagonal: part has no root portion");
    std::sort(iv.begin(), iv.end());
    double lo = iv.front().first, hi = iv.front().second;
    for (const auto& [a, b] : iv) {
        if (a > hi + 1e-9) throw GeomError("split_by_diagonal: fragmented root portion");
        hi = std::max(hi, b);
    }
    return {chord.at(lo), chord.at(hi), true};
}

}  // namespace

std::pair<RootedPolygon, RootedPolygon> split_by_diagonal(const SimplePolygon& P,
                                                          const Segment2& diagonal) {
    Segment2 maximal = extend_to_diagonal(P, diagonal);
    const double snap = 1e-9 * std::max(1.0, P.scale());
    bool same = (points_coincide(maximal.a, diagonal.a, snap) &&
                 points_coincide(maximal.b, diagonal.b, snap)) ||
                (points_coincide(maximal.a, diagonal.b, snap) &&
                 points_coincide(maximal.b, diagonal.a, snap));
    if (!same) throw GeomError("split_by_diagonal: segment is not inclusion-maximal");

    // the diagonal must have an interior part; a chord running entirely along
    // the boundary does not split anything
    bool has_interior = false;
    std::vector<double> ts = boundary_intersection_params(P, diagonal);
    for (std::size_t i = 0; i + 1 < ts.size() && !has_interior; ++i) {
        Point2 q = diagonal.at(0.5 * (ts[i] + ts[i + 1]));
        if (P.contains_point(q) && !P.on_boundary(q)) has_interior = true;
    }
    if (!has_interior) throw GeomError("split_by_diagonal: diagonal lies on the boundary");

    auto [p1, p2] = split_by_chord(P, diagonal);
    double rel = std::abs(p1.area() + p2.area() - P.area()) / P.area();
    if (rel > 1e-9) throw GeomError("split_by_diagonal: area mismatch after split");

    RootedPolygon r1{p1, chord_portion_on_boundary(p1, diagonal)};
    RootedPolygon r2{p2, chord_portion_on_boundary(p2, diagonal)};
    return {r1, r2};
}

SimplePolygon convex_hull_polygon(const std::vector<Point2>& pts) {
    return SimplePolygon::from_clean_vertices(convex_hull_2d(pts));
}

std::string polygon_to_json(const SimplePolygon& P) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const auto& v : P.vertices()) j["vertices"].push_back({v.x(), v.y()});
    return j.dump();
}

SimplePolygon polygon_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Point2> verts;
    for (const auto& v : j.at("vertices")) verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    return SimplePolygon::from_vertices(std::move(verts));
}

std::string rooted_to_json(const RootedPolygon& R) {
    nlohmann::json j = nlohmann::json::parse(polygon_to_json(R.polygon));
    j["root"] = {{R.root.a.x(), R.root.a.y()}, {R.root.b.x(), R.root.b.y()}};
    return j.dump();
}

RootedPolygon rooted_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    SimplePolygon P = polygon_from_json(text);
    const auto& r = j.at("root");
    Segment2 root{{r.at(0).at(0).get<double>(), r.at(0).at(1).get<double>()},
                  {r.at(1).at(0).get<double>(), r.at(1).at(1).get<double>()},
                  true};
    return {P, root};
}

}  // namespace beeridx
