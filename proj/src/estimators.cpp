#include "beeridx/estimators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <thread>

#include <json.hpp>

namespace beeridx {

namespace {

constexpr double kZ95 = 1.959963984540054;

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

Estimate wilson_estimate(long long hits, long long samples, std::uint64_t seed,
                         double elapsed_ms) {
    Estimate e;
    e.hits = hits;
    e.samples = samples;
    e.seed = seed;
    e.elapsed_ms = elapsed_ms;
    if (samples <= 0) return e;
    double n = static_cast<double>(samples);
    double p = static_cast<double>(hits) / n;
    double z2 = kZ95 * kZ95;
    double denom = n + z2;
    double center = (hits + z2 / 2.0) / denom;
    double half = kZ95 * std::sqrt(p * (1.0 - p) * n + z2 / 4.0) / denom;
    e.value = p;
    e.ci_low = std::max(0.0, center - half);
    e.ci_high = std::min(1.0, center + half);
    return e;
}

long long count_hits(long long samples, int threads, std::uint64_t seed,
                     const std::function<bool(long long, Rng&)>& indicator) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    threads = static_cast<int>(std::min<long long>(threads, std::max<long long>(1, samples)));

    std::vector<long long> counts(threads, 0);
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        long long lo = samples * t / threads;
        long long hi = samples * (t + 1) / threads;
        pool.emplace_back([&counts, &indicator, seed, t, lo, hi]() {
            long long c = 0;
            for (long long i = lo; i < hi; ++i) {
                Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(i));
                if (indicator(i, rng)) ++c;
            }
            counts[t] = c;
        });
    }
    for (auto& th : pool) th.join();
    long long total = 0;
    for (long long c : counts) total += c;
    return total;
}

namespace {

long long run_batches(long long samples, int threads, std::uint64_t seed,
                      const std::function<bool(long long, Rng&)>& indicator) {
    return count_hits(samples, threads, seed, indicator);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

}  // namespace

Estimate estimate_beer_index(const SimplePolygon& P, long long samples, std::uint64_t seed,
                             int threads) {
    Timer timer;
    Triangulation tri = triangulate(P);
    long long hits = run_batches(samples, threads, seed, [&](long long, Rng& rng) {
        Point2 a = sample_uniform(P, tri, rng);
        Point2 b = sample_uniform(P, tri, rng);
        return P.contains_segment({a, b, true});
    });
    return wilson_estimate(hits, samples, seed, timer.ms());
}

Estimate estimate_triangle_index(const SimplePolygon& P, long long samples, std::uint64_t seed,
                                 int threads) {
    Timer timer;
    Triangulation tri = triangulate(P);
    long long hits = run_batches(samples, threads, seed, [&](long long, Rng& rng) {
        Point2 a = sample_uniform(P, tri, rng);
        Point2 b = sample_uniform(P, tri, rng);
        Point2 c = sample_uniform(P, tri, rng);
        // P is simply connected: a triangle lies inside iff its boundary does
        return P.contains_segment({a, b, true}) && P.contains_segment({b, c, true}) &&
               P.contains_segment({c, a, true});
    });
    return wilson_estimate(hits, samples, seed, timer.ms());
}

Estimate estimate_beer_index_cone(const ConeSet& cone, long long samples, std::uint64_t seed,
                                  int threads) {
    Timer timer;
    long long hits = run_batches(samples, threads, seed, [&](long long, Rng& rng) {
        Eigen::Vector3d a = cone.sample(rng);
        Eigen::Vector3d b = cone.sample(rng);
        return cone.contains_segment(a, b);
    });
    return wilson_estimate(hits, samples, seed, timer.ms());
}

Estimate estimate_triangle_index_cone(const ConeSet& cone, long long samples,
                                      std::uint64_t seed, int threads) {
    Timer timer;
    long long hits = run_batches(samples, threads, seed, [&](long long, Rng& rng) {
        Eigen::Vector3d a = cone.sample(rng);
        Eigen::Vector3d b = cone.sample(rng);
        Eigen::Vector3d c = cone.sample(rng);
        return cone.contains_triangle(a, b, c);
    });
    return wilson_estimate(hits, samples, seed, timer.ms());
}

PointGrid::PointGrid(const std::vector<PointD>& pts, int d) : d_(d) {
    m_ = std::max(1, static_cast<int>(std::floor(
                         std::pow(static_cast<double>(std::max<std::size_t>(pts.size(), 1)),
                                  1.0 / d))));
    int total = 1;
    for (int i = 0; i < d_; ++i) total *= m_;
    buckets_.resize(total);
    for (std::size_t i = 0; i < pts.size(); ++i)
        buckets_[cell_of(pts[i])].push_back(static_cast<int>(i));
}

int PointGrid::cell_of(const PointD& p) const {
    int idx = 0;
    for (int i = 0; i < d_; ++i) {
        int c = static_cast<int>(p(i) * m_);
        c = std::clamp(c, 0, m_ - 1);
        idx = idx * m_ + c;
    }
    return idx;
}

void PointGrid::candidates(const PointD& lo, const PointD& hi, std::vector<int>& out) const {
    out.clear();
    std::vector<int> clo(d_), chi(d_);
    for (int i = 0; i < d_; ++i) {
        clo[i] = std::clamp(static_cast<int>(lo(i) * m_), 0, m_ - 1);
        chi[i] = std::clamp(static_cast<int>(hi(i) * m_), 0, m_ - 1);
    }
    std::vector<int> cur = clo;
    while (true) {
        int idx = 0;
        for (int i = 0; i < d_; ++i) idx = idx * m_ + cur[i];
        const auto& b = buckets_[idx];
        out.insert(out.end(), b.begin(), b.end());
        int i = d_ - 1;
        while (i >= 0) {
            if (++cur[i] <= chi[i]) break;
            cur[i] = clo[i];
            --i;
        }
        if (i < 0) break;
    }
}

namespace {

// Exact containment of q in the closed convex hull of the first k+1 points of
// `tuple`. For k < d this demands exact affine membership, which almost
// surely fails for random punctures; the common cases get cheap exact tests.
bool hull_prefix_contains(const std::vector<PointD>& tuple, int k, const PointD& q) {
    const int d = static_cast<int>(q.size());
    if (k == d) {
        SimplexTuple T;
        T.pts.assign(tuple.begin(), tuple.begin() + k + 1);
        try {
            return point_in_simplex(q, T, true);
        } catch (const GeomError&) {
            return false;  // degenerate simplex: measure-zero hull, a.s. misses q
        }
    }
    if (k == 1) {
        // q on the closed segment: exact collinearity in every coordinate pair
        PointD u = tuple[1] - tuple[0];
        PointD w = q - tuple[0];
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j)
                if (u(i) * w(j) - u(j) * w(i) != 0.0) return false;
        double t = u.dot(w);
        return t >= 0.0 && t <= u.squaredNorm();
    }
    if (k == 2 && d == 3) {
        Eigen::Vector3d a = tuple[0], b = tuple[1], c = tuple[2];
        Eigen::Vector3d n = (b - a).cross(c - a);
        Eigen::Vector3d w = Eigen::Vector3d(q) - a;
        if (n.dot(w) != 0.0) return false;
        double n2 = n.squaredNorm();
        if (n2 == 0.0) return false;
        // barycentric via cross ratios: w = l1 (b-a) + l2 (c-a)
        double l1 = w.cross(c - a).dot(n) / n2;
        double l2 = (b - a).cross(w).dot(n) / n2;
        return l1 >= 0.0 && l2 >= 0.0 && l1 + l2 <= 1.0;
    }
    // general lower-dimensional flat: least-squares residual must vanish
    Eigen::MatrixXd M(d, k);
    for (int j = 0; j < k; ++j) M.col(j) = tuple[j + 1] - tuple[0];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd rhs = q - tuple[0];
    Eigen::VectorXd coef = svd.solve(rhs);
    if ((M * coef - rhs).lpNorm<Eigen::Infinity>() != 0.0) return false;
    double sum = coef.sum();
    if (sum > 1.0) return false;
    for (int j = 0; j < k; ++j)
        if (coef(j) < 0.0) return false;
    return true;
}

struct BoxSampler {
    const PuncturedBox& B;
    const PointGrid* grid;

    std::vector<PointD> tuple(int count, Rng& rng) const {
        std::vector<PointD> t;
        t.reserve(count);
        for (int i = 0; i < count; ++i) {
            PointD p(B.d);
            for (int j = 0; j < B.d; ++j) p(j) = rng.uniform();
            t.push_back(std::move(p));
        }
        return t;
    }

    // true iff the hull of the first k+1 tuple points avoids every puncture
    bool prefix_hull_free(const std::vector<PointD>& t, int k,
                          std::vector<int>& scratch) const {
        PointD lo = t[0], hi = t[0];
        for (int i = 1; i <= k; ++i) {
            lo = lo.cwiseMin(t[i]);
            hi = hi.cwiseMax(t[i]);
        }
        if (grid) {
            grid->candidates(lo, hi, scratch);
            for (int idx : scratch)
                if (hull_prefix_contains(t, k, B.points[idx])) return false;
            return true;
        }
        for (const auto& p : B.points) {
            bool inside_box = true;
            for (int j = 0; j < B.d; ++j)
                if (p(j) < lo(j) || p(j) > hi(j)) {
                    inside_box = false;
                    break;
                }
            if (inside_box && hull_prefix_contains(t, k, p)) return false;
        }
        return true;
    }
};

}  // namespace

Estimate estimate_k_index_box(const PuncturedBox& B, int k, long long samples,
                              std::uint64_t seed, int threads, bool use_grid) {
    if (k < 1 || k > B.d) throw GeomError("estimate_k_index_box: need 1 <= k <= d");
    Timer timer;
    PointGrid grid(B.points, B.d);
    BoxSampler sampler{B, use_grid ? &grid : nullptr};
    long long hits = run_batches(samples, threads, seed, [&](long long, Rng& rng) {
        std::vector<int> scratch;
        std::vector<PointD> t = sampler.tuple(k + 1, rng);
        return sampler.prefix_hull_free(t, k, scratch);
    });
    return wilson_estimate(hits, samples, seed, timer.ms());
}

std::vector<Estimate> estimate_k_chain_box(const PuncturedBox& B, long long samples,
                                           std::uint64_t seed, int threads) {
    Timer timer;
    PointGrid grid(B.points, B.d);
    BoxSampler sampler{B, &grid};
    const int d = B.d;

    std::vector<long long> hits(d, 0);
    // per-k counters must merge additively across batches: run one batch pass
    // per k on shared per-index tuples
    for (int k = 1; k <= d; ++k) {
        hits[k - 1] = run_batches(samples, threads, seed, [&, k](long long, Rng& rng) {
            std::vector<int> scratch;
            std::vector<PointD> t = sampler.tuple(d + 1, rng);
            return sampler.prefix_hull_free(t, k, scratch);
        });
    }
    std::vector<Estimate> out;
    for (int k = 1; k <= d; ++k)
        out.push_back(wilson_estimate(hits[k - 1], samples, seed, timer.ms()));
    return out;
}

namespace {

bool triangle_inside(const SimplePolygon& P, const Point2& a, const Point2& b,
                     const Point2& c, int interior_probes, Rng* rng) {
    if (!P.contains_segment({a, b, true}) || !P.contains_segment({b, c, true}) ||
        !P.contains_segment({c, a, true}))
        return false;
    if (rng) {
        for (int i = 0; i < interior_probes; ++i) {
            double u = rng->uniform(), v = rng->uniform();
            if (u + v > 1.0) {
                u = 1.0 - u;
                v = 1.0 - v;
            }
            if (!P.contains_point(a + u * (b - a) + v * (c - a))) return false;
        }
    }
    return true;
}

double tri_area(const Point2& a, const Point2& b, const Point2& c) {
    return 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

}  // namespace

ConvexityRatioBound estimate_convexity_ratio(const SimplePolygon& P, int effort,
                                             std::uint64_t seed, bool try_rectangle) {
    ConvexityRatioBound out;
    Rng rng(seed);
    const auto& v = P.vertices();
    const int n = P.size();

    // vertex triples, largest areas first, first valid wins
    struct Cand {
        double area;
        int i, j, k;
    };
    std::vector<Cand> cands;
    cands.reserve(n * (n - 1) * (n - 2) / 6);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) cands.push_back({tri_area(v[i], v[j], v[k]), i, j, k});
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.area > b.area; });

    std::array<Point2, 3> best{};
    double best_area = 0.0;
    for (const auto& c : cands) {
        if (c.area <= best_area) break;
        if (triangle_inside(P, v[c.i], v[c.j], v[c.k], 32, &rng)) {
            best = {v[c.i], v[c.j], v[c.k]};
            best_area = c.area;
            break;
        }
    }

    // hill climbing from sampled interior triples
    Triangulation tri = triangulate(P);
    int restarts = 8 * std::max(1, effort);
    for (int r = 0; r < restarts; ++r) {
        std::array<Point2, 3> t{sample_uniform(P, tri, rng), sample_uniform(P, tri, rng),
                                sample_uniform(P, tri, rng)};
        if (!triangle_inside(P, t[0], t[1], t[2], 4, &rng)) continue;
        double area = tri_area(t[0], t[1], t[2]);
        double step = 0.25 * P.scale();
        while (step > 1e-4 * P.scale()) {
            bool improved = false;
            for (int m = 0; m < 3; ++m) {
                for (int dir = 0; dir < 8; ++dir) {
                    double ang = dir * M_PI / 4.0;
                    Point2 cand = t[m] + step * Point2(std::cos(ang), std::sin(ang));
                    std::array<Point2, 3> t2 = t;
                    t2[m] = cand;
                    double a2 = tri_area(t2[0], t2[1], t2[2]);
                    if (a2 > area && P.contains_point(cand) &&
                        triangle_inside(P, t2[0], t2[1], t2[2], 4, &rng)) {
                        t = t2;
                        area = a2;
                        improved = true;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (area > best_area && triangle_inside(P, t[0], t[1], t[2], 32, &rng)) {
            best_area = area;
            best = t;
        }
    }

    out.witness = best;
    out.witness_area = best_area;
    out.lower = best_area / P.area();

    if (try_rectangle) {
        Point2 lo = P.bbox_min(), hi = P.bbox_max();
        std::array<Point2, 4> corners{Point2{lo.x(), lo.y()}, Point2{hi.x(), lo.y()},
                                      Point2{hi.x(), hi.y()}, Point2{lo.x(), hi.y()}};
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
            ok = P.contains_segment({corners[i], corners[(i + 1) % 4], true});
        if (ok) {
            double rect_ratio = (hi - lo).prod() / P.area();
            if (rect_ratio > out.lower) {
                out.lower = rect_ratio;
                out.rectangle_witness = true;
            }
        }
    }
    out.upper = 1.0;
    return out;
}

std::vector<InequalityLine> inequality_report_polygon(const Estimate& beer, double c_lower,
                                                      double c_upper) {
    std::vector<InequalityLine> lines;
    // b >= c^2 (witness-certified lower bound on c)
    lines.push_back({"beer_ge_c_squared", beer.ci_high, c_lower * c_lower, false,
                     beer.ci_high >= c_lower * c_lower});
    // b <= 180 c (proof-chain constant: 2 * 90)
    lines.push_back(
        {"beer_le_180c", beer.ci_low, 180.0 * c_upper, true, beer.ci_low <= 180.0 * c_upper});
    return lines;
}

double theorem4_bound(int d, double c_upper) {
    return std::pow(2.0, d - 2) * factorial(d + 1) * c_upper;
}

std::vector<InequalityLine> inequality_report_box(const Estimate& bd, const PuncturedBox& B) {
    std::vector<InequalityLine> lines;
    const int d = B.d;
    const double eps = std::pow(static_cast<double>(d), d) / B.r;

    double t4 = theorem4_bound(d, eps);
    lines.push_back({"bd_le_theorem4", bd.ci_low, t4, true, bd.ci_low <= t4});

    double n = static_cast<double>(B.points.size());
    double lem18 = 1.0 / (2.0 * n);
    lines.push_back({"bd_ge_half_inv_n", bd.ci_high, lem18, false, bd.ci_high >= lem18});

    double gamma = 1.0 / (8.0 * B.vc_bound * std::pow(static_cast<double>(d), d));
    double t5 = gamma * eps / std::log2(1.0 / eps);
    lines.push_back({"bd_ge_theorem5_chain", bd.ci_high, t5, false, bd.ci_high >= t5});
    return lines;
}

std::string estimate_to_json(const Estimate& e, const std::string& quantity) {
    nlohmann::json j;
    j["quantity"] = quantity;
    j["estimate"] = e.value;
    j["ci95"] = {e.ci_low, e.ci_high};
    j["hits"] = e.hits;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    j["elapsed_ms"] = e.elapsed_ms;
    return j.dump();
}

}  // namespace beeridx
