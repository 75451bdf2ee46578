#include "beeridx/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <json.hpp>

namespace beeridx {

namespace {

constexpr double kParamTol = 1e-12;

double cross2(const Point2& u, const Point2& v) { return u.x() * v.y() - u.y() * v.x(); }

}  // namespace

std::optional<std::pair<double, double>> visible_interval(const SimplePolygon& P,
                                                          const Segment2& chord,
                                                          const Point2& p) {
    const Point2 dir = chord.b - chord.a;

    // critical parameters: chord points collinear with p and a polygon vertex
    std::vector<double> ts{0.0, 1.0};
    for (const Point2& w : P.vertices()) {
        Point2 wp = w - p;
        double denom = cross2(wp, dir);
        if (denom == 0.0) continue;
        double t = -cross2(wp, chord.a - p) / denom;
        if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return b - a <= kParamTol; }),
             ts.end());

    // the visible set is a closed subinterval whose endpoints are critical
    // parameters, so scanning the candidates decides it exactly
    double lo = 2.0, hi = -1.0;
    for (double t : ts) {
        if (P.contains_segment({p, chord.at(t), true})) {
            lo = std::min(lo, t);
            hi = std::max(hi, t);
        }
    }
    if (hi < lo) return std::nullopt;
    return std::make_pair(lo, hi);
}

namespace {

std::vector<double> line_contacts(const SimplePolygon& P, const Point2& a, const Point2& dir) {
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
        if (out.empty() || t - out.back() > 1e-9) out.push_back(t);
    return out;
}

bool reflex_at(const SimplePolygon& P, int i) {
    return orient2d(P.vertex(i - 1), P.vertex(i), P.vertex(i + 1)) < 0;
}

// Maximal contained sub-chords of the line through g and v that contain v:
// candidate windows emanating from the reflex vertex v.
void chord_candidates_through(const SimplePolygon& P, const Point2& g, const Point2& v,
                              std::vector<Segment2>& out) {
    Point2 dir = v - g;
    if (dir.squaredNorm() == 0.0) return;
    std::vector<double> ts = line_contacts(P, v, dir / dir.norm());
    double before = 0.0, after = 0.0;
    bool has_before = false, has_after = false;
    for (double t : ts) {
        if (t < -kParamTol && (!has_before || t > before)) {
            before = t;
            has_before = true;
        }
        if (t > kParamTol && (!has_after || t < after)) {
            after = t;
            has_after = true;
        }
    }
    Point2 u = dir / dir.norm();
    if (has_after) out.push_back({v, v + after * u, true});
    if (has_before) out.push_back({v + before * u, v, true});
    if (has_before && has_after) out.push_back({v + before * u, v + after * u, true});
}

std::vector<Segment2> window_candidates(const SimplePolygon& P, const Segment2& root) {
    std::vector<Segment2> cands;
    const int n = P.size();
    std::vector<int> reflex;
    for (int i = 0; i < n; ++i)
        if (reflex_at(P, i)) reflex.push_back(i);

    for (int i : reflex) {
        const Point2& v = P.vertex(i);
        std::vector<Point2> gens{root.a, root.b, P.vertex(i - 1), P.vertex(i + 1)};
        for (int j : reflex) {
            if (j == i) continue;
            gens.push_back(P.vertex(j));
        }
        for (const Point2& g : gens) {
            if ((g - v).squaredNorm() == 0.0) continue;
            if (!P.contains_segment({g, v, true})) continue;
            chord_candidates_through(P, g, v, cands);
        }
    }

    // dedupe
    std::vector<Segment2> out;
    for (const auto& c : cands) {
        bool dup = false;
        for (const auto& o : out) {
            if (((c.a - o.a).lpNorm<Eigen::Infinity>() < 1e-12 &&
                 (c.b - o.b).lpNorm<Eigen::Infinity>() < 1e-12) ||
                ((c.a - o.b).lpNorm<Eigen::Infinity>() < 1e-12 &&
                 (c.b - o.a).lpNorm<Eigen::Infinity>() < 1e-12)) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(c);
    }
    return out;
}

// Portion of the chord lying on the part boundary (the pocket window).
Segment2 chord_portion_on(const SimplePolygon& part, const Segment2& chord) {
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
    if (iv.empty()) throw GeomError("window: no boundary portion");
    std::sort(iv.begin(), iv.end());
    double lo = iv.front().first, hi = iv.front().second;
    for (const auto& [a, b] : iv) {
        if (a > hi + 1e-9) throw GeomError("window: fragmented boundary portion");
        hi = std::max(hi, b);
    }
    return {chord.at(lo), chord.at(hi), true};
}

// Total parameter length of the part-boundary edges collinear with seg,
// clipped to seg. Robust side-of-split detection for boundary segments.
double boundary_overlap_length(const SimplePolygon& part, const Segment2& seg) {
    const Point2 dir = seg.b - seg.a;
    const double len2 = dir.squaredNorm();
    double total = 0.0;
    const int n = part.size();
    for (int i = 0; i < n; ++i) {
        const Point2& u = part.vertices()[i];
        const Point2& w = part.vertices()[(i + 1) % n];
        if (orient2d(seg.a, seg.b, u) != 0 || orient2d(seg.a, seg.b, w) != 0) continue;
        double tu = (u - seg.a).dot(dir) / len2;
        double tw = (w - seg.a).dot(dir) / len2;
        if (tu > tw) std::swap(tu, tw);
        tu = std::max(tu, 0.0);
        tw = std::min(tw, 1.0);
        if (tw > tu) total += tw - tu;
    }
    return total;
}

bool chord_has_interior(const SimplePolygon& P, const Segment2& c) {
    for (int k = 1; k < 16; ++k) {
        Point2 q = c.at(k / 16.0);
        if (P.contains_point(q) && !P.on_boundary(q)) return true;
    }
    return false;
}

std::vector<Point2> interior_probes(const SimplePolygon& part) {
    std::vector<Point2> probes;
    Triangulation tri = triangulate(part);
    const auto& v = part.vertices();
    for (const auto& t : tri.triangles) {
        Point2 c = (v[t[0]] + v[t[1]] + v[t[2]]) / 3.0;
        probes.push_back(c);
        for (int e = 0; e < 3; ++e) probes.push_back((v[t[e]] + v[t[(e + 1) % 3]] + c) / 3.0);
    }
    return probes;
}

// True iff no point of the far side sees the root within `world`. Probes
// triangle interiors plus a strip hugging the chord: an over-greedy chord
// leaves a visible sliver against itself, which the strip probes catch.
bool far_side_fully_hidden(const SimplePolygon& world, const Segment2& root,
                           const SimplePolygon& far, const Segment2& chord) {
    for (const Point2& q : interior_probes(far))
        if (is_weakly_visible(world, root, q)) return false;

    Point2 dir = chord.b - chord.a;
    Point2 nrm{-dir.y(), dir.x()};
    nrm /= nrm.norm();
    const double eps = 1e-7 * std::max(1.0, world.scale());
    for (int k = 1; k < 32; ++k) {
        Point2 base = chord.at(k / 32.0);
        for (double side : {1.0, -1.0}) {
            Point2 q = base + side * eps * nrm;
            if (!far.contains_point(q) || far.on_boundary(q)) continue;
            if (is_weakly_visible(world, root, q)) return false;
            break;  // the chord borders far on exactly one side
        }
    }
    return true;
}

// Ensures the root endpoints are vertices of the polygon cycle so that the
// root is a union of boundary edges.
RootedPolygon with_root_vertices(const RootedPolygon& R) {
    const auto& P = R.polygon;
    const double snap = P.boundary_tol();
    std::vector<Point2> cyc;
    const int n = P.size();
    for (int i = 0; i < n; ++i) {
        const Point2& u = P.vertices()[i];
        const Point2& w = P.vertices()[(i + 1) % n];
        cyc.push_back(u);
        std::vector<std::pair<double, Point2>> ins;
        for (const Point2& c : {R.root.a, R.root.b}) {
            if ((u - c).lpNorm<Eigen::Infinity>() <= snap ||
                (w - c).lpNorm<Eigen::Infinity>() <= snap)
                continue;
            Point2 d = w - u;
            double t = (c - u).dot(d) / d.squaredNorm();
            if (t <= 0.0 || t >= 1.0) continue;
            if ((c - (u + t * d)).norm() <= snap) ins.emplace_back(t, c);
        }
        std::sort(ins.begin(), ins.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [t, c] : ins) cyc.push_back(c);
    }
    RootedPolygon out;
    out.polygon = SimplePolygon::from_clean_vertices(std::move(cyc));
    out.root = R.root;

    if (!out.polygon.on_boundary(R.root.a) || !out.polygon.on_boundary(R.root.b))
        throw GeomError("rooted polygon: root endpoints not on the boundary");
    for (int k = 0; k <= 32; ++k) {
        Point2 q = R.root.at(k / 32.0);
        if (!out.polygon.contains_point(q))
            throw GeomError("rooted polygon: root not contained in the polygon");
    }
    return out;
}

}  // namespace

WeakVisibilityResult weak_visibility_region(const RootedPolygon& R0) {
    RootedPolygon R = with_root_vertices(R0);
    const SimplePolygon& world = R.polygon;  // visibility always tested here
    std::vector<Segment2> cands = window_candidates(world, R.root);

    WeakVisibilityResult res;
    res.region = world;

    while (true) {
        double best_area = -1.0;
        std::optional<std::pair<SimplePolygon, SimplePolygon>> best_split;  // (root side, pocket)
        std::optional<Segment2> best_chord;

        for (const auto& c : cands) {
            if (!res.region.on_boundary(c.a) || !res.region.on_boundary(c.b)) continue;
            if (!res.region.contains_segment(c)) continue;
            // a chord overlapping the root segment cannot separate it
            if (orient2d(R.root.a, R.root.b, c.a) == 0 &&
                orient2d(R.root.a, R.root.b, c.b) == 0) {
                Point2 dir = R.root.b - R.root.a;
                double len2 = dir.squaredNorm();
                double t1 = (c.a - R.root.a).dot(dir) / len2;
                double t2 = (c.b - R.root.a).dot(dir) / len2;
                if (std::max(0.0, std::min(t1, t2)) <
                    std::min(1.0, std::max(t1, t2)) - kParamTol)
                    continue;
            }
            if (!chord_has_interior(res.region, c)) continue;

            std::pair<SimplePolygon, SimplePolygon> parts;
            try {
                parts = split_by_chord(res.region, c);
            } catch (const GeomError&) {
                continue;
            }
            // identify the side carrying the root
            double ov1 = boundary_overlap_length(parts.first, R.root);
            double ov2 = boundary_overlap_length(parts.second, R.root);
            if (std::max(ov1, ov2) < 0.999 || std::min(ov1, ov2) > 1e-9) continue;
            SimplePolygon& root_side = ov1 > ov2 ? parts.first : parts.second;
            SimplePolygon& far_side = ov1 > ov2 ? parts.second : parts.first;
            if (far_side.area() <= best_area) continue;
            if (!far_side_fully_hidden(world, R.root, far_side, c)) continue;

            best_area = far_side.area();
            best_split = {root_side, far_side};
            best_chord = c;
        }

        if (!best_split) break;
        Segment2 window = chord_portion_on(best_split->second, *best_chord);
        res.pockets.push_back({best_split->second, window});
        res.region = best_split->first;
    }
    return res;
}

namespace {

BodyFrame make_frame(const SimplePolygon& region, const Segment2& root) {
    BodyFrame f;
    Point2 dir = root.b - root.a;
    double len = dir.norm();
    f.c = dir.x() / len;
    f.s = dir.y() / len;
    f.origin = root.a;
    // flip if the region sits below the root line
    double worst = 0.0;
    bool below = false;
    for (const auto& v : region.vertices()) {
        double y = f.to_frame(v).y();
        if (std::abs(y) > worst) {
            worst = std::abs(y);
            below = y < 0.0;
        }
    }
    if (below) {
        f.c = -f.c;
        f.s = -f.s;
    }
    return f;
}

}  // namespace

BodyTree level_decomposition(const RootedPolygon& R, int max_levels) {
    BodyTree tree;
    tree.source = R;
    const double sliver_cut = 1e-12 * R.polygon.area();

    struct Job {
        RootedPolygon rp;
        int level;
        int parent;
    };
    std::deque<Job> queue;
    queue.push_back({R, 1, -1});

    while (!queue.empty()) {
        Job job = queue.front();
        queue.pop_front();
        if (job.level > max_levels) {
            tree.truncated = true;
            break;
        }
        WeakVisibilityResult w = weak_visibility_region(job.rp);
        Body body;
        body.region = w.region;
        body.root = job.rp.root;
        body.level = job.level;
        body.parent = job.parent;
        body.frame = make_frame(w.region, job.rp.root);
        tree.bodies.push_back(std::move(body));
        int self = static_cast<int>(tree.bodies.size()) - 1;
        for (auto& p : w.pockets) {
            if (p.pocket.area() < sliver_cut) {
                ++tree.merged_slivers;
                continue;
            }
            queue.push_back({RootedPolygon{p.pocket, p.window}, job.level + 1, self});
        }
    }
    // BFS order: levels are already non-decreasing and parents precede children
    return tree;
}

int locate_body(const BodyTree& tree, const Point2& p) {
    for (std::size_t i = 0; i < tree.bodies.size(); ++i)
        if (tree.bodies[i].region.contains_point(p)) return static_cast<int>(i);
    return -1;
}

BaseSegmentInfo base_segment(const BodyTree& tree, const Segment2& s) {
    if (!tree.source.polygon.contains_segment(s))
        throw GeomError("base_segment: segment not contained in the source polygon");

    // split s at every body-boundary crossing, classify piece midpoints
    std::vector<double> ts{0.0, 1.0};
    for (const auto& b : tree.bodies) {
        std::vector<double> bt = boundary_intersection_params(b.region, s);
        ts.insert(ts.end(), bt.begin(), bt.end());
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end(),
                         [](double a, double b) { return b - a <= 1e-12; }),
             ts.end());

    struct Piece {
        double lo, hi;
        int body;
    };
    std::vector<Piece> pieces;
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
        double mid = 0.5 * (ts[i] + ts[i + 1]);
        int b = locate_body(tree, s.at(mid));
        if (b < 0) throw StructuralError("base_segment: piece midpoint outside every body");
        if (!pieces.empty() && pieces.back().body == b)
            pieces.back().hi = ts[i + 1];
        else
            pieces.push_back({ts[i], ts[i + 1], b});
    }
    if (pieces.empty()) {  // degenerate segment
        int b = locate_body(tree, s.a);
        if (b < 0) throw StructuralError("base_segment: point outside every body");
        return {b, {s.a, s.a, true}, tree.bodies[b].level};
    }

    int k = 1 << 30;
    for (const auto& p : pieces) k = std::min(k, tree.bodies[p.body].level);

    int base_body = -1;
    double base_lo = 2.0, base_hi = -1.0;
    int high_count = 0;
    for (const auto& p : pieces) {
        int lvl = tree.bodies[p.body].level;
        if (lvl != k && lvl != k + 1)
            throw StructuralError("base_segment: segment meets a level outside {k, k+1}");
        if (lvl == k) {
            if (base_body >= 0 && base_body != p.body)
                throw StructuralError("base_segment: base level split across bodies");
            base_body = p.body;
            base_lo = std::min(base_lo, p.lo);
            base_hi = std::max(base_hi, p.hi);
        } else {
            ++high_count;
        }
    }
    if (base_body < 0) throw StructuralError("base_segment: no base piece");
    if (high_count > 2)
        throw StructuralError("base_segment: more than two pieces above the base level");
    for (const auto& p : pieces) {
        if (tree.bodies[p.body].level == k + 1 && tree.bodies[p.body].parent != base_body)
            throw StructuralError("base_segment: upper piece not attached to the base body");
    }
    // base pieces must be contiguous
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        if (pieces[i].body == base_body && pieces[i + 1].body != base_body) {
            for (std::size_t j = i + 1; j < pieces.size(); ++j)
                if (pieces[j].body == base_body)
                    throw StructuralError("base_segment: base level not a single subsegment");
        }
    }

    return {base_body, {s.at(base_lo), s.at(base_hi), true}, k};
}

std::string body_tree_to_json(const BodyTree& tree) {
    nlohmann::json j;
    j["truncated"] = tree.truncated;
    j["merged_slivers"] = tree.merged_slivers;
    j["bodies"] = nlohmann::json::array();
    for (const auto& b : tree.bodies) {
        nlohmann::json jb;
        jb["level"] = b.level;
        jb["parent"] = b.parent;
        jb["root"] = {{b.root.a.x(), b.root.a.y()}, {b.root.b.x(), b.root.b.y()}};
        jb["vertices"] = nlohmann::json::array();
        for (const auto& v : b.region.vertices()) jb["vertices"].push_back({v.x(), v.y()});
        j["bodies"].push_back(jb);
    }
    return j.dump();
}

}  // namespace beeridx
