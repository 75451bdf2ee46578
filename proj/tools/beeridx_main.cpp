// beeridx: construct instances, estimate convexity indices, decompose rooted
// polygons, and verify the structural bounds. One subcommand per run; exit 0
// on success, 1 on verification failure, 2 on usage errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "beeridx/boxes.hpp"
#include "beeridx/constructions.hpp"
#include "beeridx/cover.hpp"
#include "beeridx/estimators.hpp"
#include "beeridx/visibility.hpp"

using namespace beeridx;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text << "\n";
}

nlohmann::json run_header(std::uint64_t seed) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["seed"] = seed;
    return j;
}

bool json_has_root(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    return j.contains("root");
}

// Deterministic interior diagonal for inputs that are plain polygons: sample
// interior points and extend a chord along promising directions until one
// splits the polygon.
Segment2 pick_diagonal(const SimplePolygon& P, std::uint64_t seed) {
    Triangulation tri = triangulate(P);
    Rng rng(seed ^ 0xd1a60u);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Point2 a = sample_uniform(P, tri, rng);
        Point2 b = sample_uniform(P, tri, rng);
        if ((b - a).norm() < 1e-9 * P.scale()) continue;
        if (!P.contains_segment({a, b, true})) continue;
        Segment2 d = extend_to_diagonal(P, {a, b, true});
        try {
            split_by_diagonal(P, d);
            return d;
        } catch (const GeomError&) {
            continue;
        }
    }
    throw std::runtime_error("could not find an interior diagonal");
}

struct VerifySummary {
    long long violations = 0;
    nlohmann::json report;
};

VerifySummary verify_cover_cmd(const std::string& in_text, double gamma, long long pairs,
                               std::uint64_t seed) {
    VerifySummary out;
    out.report = run_header(seed);
    out.report["gamma"] = gamma;
    out.report["pairs"] = pairs;
    out.report["halves"] = nlohmann::json::array();

    std::vector<RootedPolygon> fixtures;
    if (json_has_root(in_text)) {
        fixtures.push_back(rooted_from_json(in_text));
    } else {
        SimplePolygon P = polygon_from_json(in_text);
        Segment2 d = pick_diagonal(P, seed);
        out.report["diagonal"] = {{d.a.x(), d.a.y()}, {d.b.x(), d.b.y()}};
        auto [h1, h2] = split_by_diagonal(P, d);
        fixtures.push_back(h1);
        fixtures.push_back(h2);
    }
    for (const auto& R : fixtures) {
        BodyTree tree = level_decomposition(R);
        double K = R.polygon.area();
        CoverReport rep = verify_cover(R, tree, gamma, K, pairs, seed);
        nlohmann::json jr;
        jr["K"] = K;
        jr["sampled"] = rep.sampled;
        jr["checked"] = rep.checked;
        jr["violations"] = rep.violations;
        jr["max_cover_area_ratio"] = rep.max_cover_area_ratio;
        jr["bodies"] = tree.bodies.size();
        jr["truncated"] = tree.truncated;
        out.report["halves"].push_back(jr);
        out.violations += rep.violations + (tree.truncated ? 1 : 0);
    }
    return out;
}

VerifySummary verify_crossing_cmd(const std::string& in_text, int points, long long samples,
                                  std::uint64_t seed) {
    VerifySummary out;
    out.report = run_header(seed);
    SimplePolygon P = polygon_from_json(in_text);
    Segment2 d = pick_diagonal(P, seed);
    // rotate the diagonal onto the x-axis
    Point2 u = (d.b - d.a) / d.length();
    std::vector<Point2> verts;
    for (const auto& v : P.vertices()) {
        Point2 q = v - d.a;
        verts.emplace_back(u.x() * q.x() + u.y() * q.y(), -u.y() * q.x() + u.x() * q.y());
    }
    SimplePolygon S = SimplePolygon::from_vertices(verts);
    Segment2 ell{{0, 0}, {d.length(), 0}, true};
    double K = S.area();
    out.report["K"] = K;
    out.report["bound"] = 3.0 * K;
    out.report["checks"] = nlohmann::json::array();

    Triangulation tri = triangulate(S);
    Rng rng(seed);
    for (int i = 0; i < points; ++i) {
        Point2 A = sample_uniform(S, tri, rng);
        CrossingReport rep = crossing_region_check(S, ell, A, K, samples, seed + 101 * i);
        nlohmann::json jc;
        jc["A"] = {A.x(), A.y()};
        jc["mc_area"] = rep.mc_area;
        jc["sigma"] = rep.sigma;
        jc["ok"] = rep.ok;
        out.report["checks"].push_back(jc);
        if (!rep.ok) ++out.violations;
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beer index of convexity and convexity-ratio toolkit"};
    app.require_subcommand(1);

    std::string in_path, out_path, config_path, target;
    int n = 8, d = 2, r = 16, k = 1, points = 10, effort = 1, threads = 0, max_levels = 64;
    int max_retries = 5;
    double delta = 1e-4, gamma = 0.5186;
    long long samples = 100000, pairs = 10000, tuples = 10000, trials = 1000;
    std::uint64_t seed = 1;
    std::string format = "json";

    auto* construct = app.add_subcommand("construct", "generate an instance");
    construct->add_option("target", target, "comb | box | spiral")->required();
    construct->add_option("--n", n, "comb spikes / spiral turns");
    construct->add_option("--delta", delta, "comb sliver height");
    construct->add_option("--d", d, "box dimension");
    construct->add_option("--r", r, "box net parameter");
    construct->add_option("--seed", seed, "rng seed");
    construct->add_option("--max-retries", max_retries, "net resampling budget");
    construct->add_option("-o,--out", out_path, "output file");

    auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimation");
    estimate->add_option("target", target, "beer | kindex | cratio")->required();
    estimate->add_option("--in", in_path, "input instance json")->required();
    estimate->add_option("--samples", samples);
    estimate->add_option("--seed", seed);
    estimate->add_option("--threads", threads);
    estimate->add_option("--k", k, "index order for kindex");
    estimate->add_option("--effort", effort, "search effort for cratio");
    estimate->add_flag("--lift-cone", "estimate on the cone over the input polygon");
    estimate->add_option("-o,--out", out_path);

    auto* decompose = app.add_subcommand("decompose", "window decomposition of a rooted polygon");
    decompose->add_option("--in", in_path)->required();
    decompose->add_option("--max-levels", max_levels);
    decompose->add_option("-o,--out", out_path);

    auto* verify = app.add_subcommand("verify", "structural verification harnesses");
    verify->add_option("target", target, "cover | crossing | boxes | net | lemma18 | bodytree")
        ->required();
    verify->add_option("--in", in_path);
    verify->add_option("--gamma", gamma);
    verify->add_option("--pairs", pairs);
    verify->add_option("--samples", samples);
    verify->add_option("--tuples", tuples);
    verify->add_option("--trials", trials);
    verify->add_option("--points", points);
    verify->add_option("--d", d);
    verify->add_option("--r", r);
    verify->add_option("--seed", seed);
    verify->add_option("-o,--out", out_path);

    auto* report = app.add_subcommand("report", "inequality report for an instance");
    report->add_option("--in", in_path)->required();
    report->add_option("--samples", samples);
    report->add_option("--seed", seed);
    report->add_option("--threads", threads);
    report->add_option("--k", k);
    report->add_option("-o,--out", out_path);

    auto* sweep = app.add_subcommand("sweep", "run a batch of estimates from a config");
    sweep->add_option("--config", config_path)->required();
    sweep->add_option("-o,--out", out_path);
    sweep->add_option("--format", format, "csv (default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (construct->parsed()) {
            if (target == "comb") {
                write_output(polygon_to_json(comb_polygon(n, delta)), out_path);
            } else if (target == "box") {
                PuncturedBox B = punctured_box_net(d, r, seed, max_retries);
                write_output(punctured_box_to_json(B), out_path);
            } else if (target == "spiral") {
                write_output(rooted_to_json(spiral_polygon(n)), out_path);
            } else {
                std::cerr << "unknown construct target '" << target
                          << "' (expected comb, box, or spiral)\n";
                return 2;
            }
            return 0;
        }

        if (estimate->parsed()) {
            std::string text = read_file(in_path);
            nlohmann::json jin = nlohmann::json::parse(text);
            nlohmann::json jout;
            if (target == "beer") {
                SimplePolygon P = polygon_from_json(text);
                if (estimate->count("--lift-cone")) {
                    ConeSet cone(P);
                    Estimate e = estimate_beer_index_cone(cone, samples, seed, threads);
                    jout = nlohmann::json::parse(estimate_to_json(e, "beer_index_cone"));
                } else {
                    Estimate e = estimate_beer_index(P, samples, seed, threads);
                    jout = nlohmann::json::parse(estimate_to_json(e, "beer_index"));
                }
            } else if (target == "kindex") {
                if (jin.contains("points")) {
                    PuncturedBox B = punctured_box_from_json(text);
                    Estimate e = estimate_k_index_box(B, k, samples, seed, threads);
                    jout = nlohmann::json::parse(estimate_to_json(e, "k_index"));
                    jout["k"] = k;
                } else {
                    SimplePolygon P = polygon_from_json(text);
                    Estimate e = k == 1 ? estimate_beer_index(P, samples, seed, threads)
                                        : estimate_triangle_index(P, samples, seed, threads);
                    jout = nlohmann::json::parse(estimate_to_json(e, "k_index"));
                    jout["k"] = k;
                }
            } else if (target == "cratio") {
                SimplePolygon P = polygon_from_json(text);
                ConvexityRatioBound cr = estimate_convexity_ratio(P, effort, seed);
                jout = run_header(seed);
                jout["quantity"] = "convexity_ratio";
                jout["lower"] = cr.lower;
                jout["upper"] = cr.upper;
                jout["witness"] = {{cr.witness[0].x(), cr.witness[0].y()},
                                   {cr.witness[1].x(), cr.witness[1].y()},
                                   {cr.witness[2].x(), cr.witness[2].y()}};
                jout["witness_area"] = cr.witness_area;
                jout["rectangle_witness"] = cr.rectangle_witness;
            } else {
                std::cerr << "unknown estimate target '" << target << "'\n";
                return 2;
            }
            jout["version"] = kVersion;
            write_output(jout.dump(), out_path);
            return 0;
        }

        if (decompose->parsed()) {
            RootedPolygon R = rooted_from_json(read_file(in_path));
            BodyTree tree = level_decomposition(R, max_levels);
            write_output(body_tree_to_json(tree), out_path);
            return tree.truncated ? 1 : 0;
        }

        if (verify->parsed()) {
            VerifySummary s;
            if (target == "cover") {
                s = verify_cover_cmd(read_file(in_path), gamma, pairs, seed);
            } else if (target == "crossing") {
                s = verify_crossing_cmd(read_file(in_path), points, samples, seed);
            } else if (target == "boxes") {
                auto member = [dd = d](const PointD& p) {
                    for (int i = 0; i < p.size(); ++i)
                        if (p(i) < 0.0 || p(i) > 1.0) return false;
                    return true;
                };
                auto sampler = [dd = d](Rng& rng) {
                    PointD p(dd);
                    for (int i = 0; i < dd; ++i) p(i) = rng.uniform();
                    return p;
                };
                BoxReport rep = verify_box_containment(member, sampler, 1.0, 1.0, d, tuples, seed);
                s.report = run_header(seed);
                s.report["checked"] = rep.checked;
                s.report["hull_in_count"] = rep.hull_in_count;
                s.report["projection_failures"] = rep.projection_failures;
                s.report["containment_failures"] = rep.containment_failures;
                s.report["max_obs1_rel_error"] = rep.max_obs1_rel_error;
                s.violations = rep.projection_failures + rep.containment_failures;
            } else if (target == "net") {
                PuncturedBox B = punctured_box_from_json(read_file(in_path));
                NetReport rep = verify_net(B, static_cast<int>(trials), seed);
                s.report = run_header(seed);
                s.report["trials"] = rep.trials;
                s.report["stabbed"] = rep.stabbed;
                s.report["violations"] = rep.violations;
                s.violations = rep.violations;
            } else if (target == "lemma18") {
                Rng rng(seed);
                s.report = run_header(seed);
                s.report["configs"] = nlohmann::json::array();
                for (int c = 0; c < points; ++c) {
                    int m = 1 + static_cast<int>(rng.below(8));
                    Point2 apex{rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.95)};
                    std::vector<Point2> N;
                    for (int i = 0; i < m; ++i)
                        N.emplace_back(rng.uniform(0.02, 0.98), rng.uniform(0.02, 0.98));
                    std::vector<SimplePolygon> cells;
                    try {
                        cells = hyperplane_partition_2d(apex, N);
                    } catch (const GeomError&) {
                        --c;
                        continue;
                    }
                    double sum = 0, sum2 = 0;
                    for (const auto& cell : cells) {
                        sum += cell.area();
                        sum2 += cell.area() * cell.area();
                    }
                    bool ok = std::abs(sum - 1.0) <= 1e-9 && sum2 >= 1.0 / (2.0 * m) - 1e-12;
                    nlohmann::json jc;
                    jc["n"] = m;
                    jc["area_sum"] = sum;
                    jc["sum_sq"] = sum2;
                    jc["jensen_bound"] = 1.0 / (2.0 * m);
                    jc["ok"] = ok;
                    s.report["configs"].push_back(jc);
                    if (!ok) ++s.violations;
                }
            } else if (target == "bodytree") {
                RootedPolygon R = rooted_from_json(read_file(in_path));
                BodyTree tree = level_decomposition(R);
                Triangulation tri = triangulate(R.polygon);
                Rng rng(seed);
                long long bad_partition = 0, bad_star = 0, bad_segments = 0;
                int tested = 0;
                while (tested < points) {
                    Point2 p = sample_uniform(R.polygon, tri, rng);
                    bool near = false;
                    for (const auto& b : tree.bodies)
                        if (b.region.distance_to_boundary(p) < 1e-9) near = true;
                    if (near) continue;
                    ++tested;
                    int owners = 0;
                    for (const auto& b : tree.bodies)
                        if (b.region.contains_point(p)) ++owners;
                    if (owners != 1) ++bad_partition;
                }
                for (const auto& b : tree.bodies) {
                    Triangulation bt = triangulate(b.region);
                    for (int i = 0; i < 100; ++i) {
                        Point2 p = sample_uniform(b.region, bt, rng);
                        if (!is_weakly_visible(R.polygon, b.root, p)) ++bad_star;
                    }
                }
                long long done = 0;
                while (done < pairs) {
                    Point2 a = sample_uniform(R.polygon, tri, rng);
                    Point2 b = sample_uniform(R.polygon, tri, rng);
                    if (!R.polygon.contains_segment({a, b, true})) continue;
                    ++done;
                    try {
                        base_segment(tree, {a, b, true});
                    } catch (const StructuralError&) {
                        ++bad_segments;
                    }
                }
                s.report = run_header(seed);
                s.report["bodies"] = tree.bodies.size();
                s.report["bad_partition"] = bad_partition;
                s.report["bad_star"] = bad_star;
                s.report["bad_segments"] = bad_segments;
                s.violations = bad_partition + bad_star + bad_segments;
            } else {
                std::cerr << "unknown verify target '" << target << "'\n";
                return 2;
            }
            s.report["violations_total"] = s.violations;
            write_output(s.report.dump(), out_path);
            return s.violations > 0 ? 1 : 0;
        }

        if (report->parsed()) {
            std::string text = read_file(in_path);
            nlohmann::json jin = nlohmann::json::parse(text);
            nlohmann::json jout = run_header(seed);
            std::vector<InequalityLine> lines;
            if (jin.contains("points")) {
                PuncturedBox B = punctured_box_from_json(text);
                Estimate e = estimate_k_index_box(B, B.d, samples, seed, threads);
                jout["b_d"] = nlohmann::json::parse(estimate_to_json(e, "k_index"));
                lines = inequality_report_box(e, B);
            } else {
                SimplePolygon P = polygon_from_json(text);
                Estimate e = estimate_beer_index(P, samples, seed, threads);
                ConvexityRatioBound cr = estimate_convexity_ratio(P, 1, seed);
                jout["beer"] = nlohmann::json::parse(estimate_to_json(e, "beer_index"));
                jout["c_lower"] = cr.lower;
                jout["c_upper"] = cr.upper;
                lines = inequality_report_polygon(e, cr.lower, cr.upper);
            }
            jout["inequalities"] = nlohmann::json::array();
            bool all = true;
            for (const auto& l : lines) {
                nlohmann::json jl;
                jl["name"] = l.name;
                jl["lhs"] = l.lhs;
                jl["rhs"] = l.rhs;
                jl["relation"] = l.is_upper ? "<=" : ">=";
                jl["pass"] = l.pass;
                jout["inequalities"].push_back(jl);
                all = all && l.pass;
            }
            write_output(jout.dump(), out_path);
            return all ? 0 : 1;
        }

        if (sweep->parsed()) {
            nlohmann::json cfg = nlohmann::json::parse(read_file(config_path));
            std::ostringstream csv;
            csv << "instance,quantity,estimate,ci_low,ci_high,samples,seed,bound,bound_pass,status\n";
            bool any_fail = false;
            for (const auto& run : cfg.value("runs", nlohmann::json::array())) {
                std::string instance = "?", quantity = run.value("quantity", "beer");
                std::string status = "ok";
                double bound = 0.0;
                bool bound_pass = true;
                Estimate e;
                std::uint64_t rseed = run.at("seed").get<std::uint64_t>();
                long long rsamples = run.value("samples", 100000LL);
                try {
                    const auto& c = run.at("construct");
                    std::string kind = c.at("kind").get<std::string>();
                    if (kind == "comb") {
                        int cn = c.at("n").get<int>();
                        double cd = c.value("delta", 1e-4);
                        instance = "comb_" + std::to_string(cn);
                        SimplePolygon P = comb_polygon(cn, cd);
                        e = estimate_beer_index(P, rsamples, rseed, threads);
                        bound = 1.0 / cn;  // expected scale, informational
                        bound_pass = e.value * cn > 0.9 && e.value * cn < 1.1;
                    } else if (kind == "box") {
                        int cd = c.value("d", 2);
                        int cr = c.at("r").get<int>();
                        instance = "box_d" + std::to_string(cd) + "_r" + std::to_string(cr);
                        PuncturedBox B = punctured_box_net(cd, cr, rseed);
                        e = estimate_k_index_box(B, cd, rsamples, rseed, threads);
                        bound = 1.0 / (2.0 * static_cast<double>(B.points.size()));
                        bound_pass = e.ci_high >= bound;
                    } else {
                        throw std::runtime_error("unknown construct kind " + kind);
                    }
                } catch (const std::exception& ex) {
                    status = std::string("error: ") + ex.what();
                    any_fail = true;
                }
                csv << instance << ',' << quantity << ',' << e.value << ',' << e.ci_low << ','
                    << e.ci_high << ',' << e.samples << ',' << rseed << ',' << bound << ','
                    << (bound_pass ? "1" : "0") << ',' << status << "\n";
                if (!bound_pass) any_fail = true;
            }
            write_output(csv.str(), out_path);
            return any_fail ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
