#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "beeridx/constructions.hpp"
#include "beeridx/polygon.hpp"

namespace {

struct CmdResult {
    int code;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    std::string cmd = std::string(BEERIDX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t got = fread(buf, 1, sizeof buf, p)) out.append(buf, got);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
}

std::string tmp_path(const std::string& name) {
    return std::string("/tmp/beeridx_test_") + name;
}

}  // namespace

TEST_CASE("construct comb writes the expected polygon") {
    std::string path = tmp_path("comb8.json");
    auto r = run_cli("construct comb --n 8 --delta 1e-4 -o " + path);
    CHECK(r.code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto P = beeridx::polygon_from_json(ss.str());
    CHECK(P.size() == 31);  // 4n-1
}

TEST_CASE("constructed json round-trips bit-exactly through the CLI") {
    std::string path = tmp_path("comb5.json");
    REQUIRE(run_cli("construct comb --n 5 --delta 1e-3 -o " + path).code == 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    auto P = beeridx::polygon_from_json(ss.str());
    auto direct = beeridx::comb_polygon(5, 1e-3);
    REQUIRE(P.size() == direct.size());
    for (int i = 0; i < P.size(); ++i) {
        CHECK(P.vertices()[i].x() == direct.vertices()[i].x());
        CHECK(P.vertices()[i].y() == direct.vertices()[i].y());
    }
}

TEST_CASE("estimate beer on a comb") {
    std::string path = tmp_path("comb8b.json");
    REQUIRE(run_cli("construct comb --n 8 --delta 1e-4 -o " + path).code == 0);
    auto r = run_cli("estimate beer --in " + path + " --samples 50000 --seed 7");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"quantity\":\"beer_index\"") != std::string::npos);
    double v = std::stod(r.out.substr(r.out.find("\"estimate\":") + 11));
    CHECK(v * 8 > 0.85);
    CHECK(v * 8 < 1.15);
}

TEST_CASE("verify cover exits zero with no violations") {
    std::string path = tmp_path("comb4.json");
    REQUIRE(run_cli("construct comb --n 4 --delta 1e-3 -o " + path).code == 0);
    auto r = run_cli("verify cover --in " + path + " --gamma 0.5186 --pairs 400 --seed 7");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"violations_total\":0") != std::string::npos);
}

TEST_CASE("verify net on a constructed box") {
    std::string path = tmp_path("box.json");
    REQUIRE(run_cli("construct box --d 2 --r 8 --seed 5 -o " + path).code == 0);
    auto r = run_cli("verify net --in " + path + " --trials 100 --seed 9");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"violations\":0") != std::string::npos);
}

TEST_CASE("verify lemma18 runs clean") {
    auto r = run_cli("verify lemma18 --points 20 --seed 3");
    CHECK(r.code == 0);
}

TEST_CASE("decompose a spiral") {
    std::string path = tmp_path("spiral.json");
    REQUIRE(run_cli("construct spiral --n 2 -o " + path).code == 0);
    auto r = run_cli("decompose --in " + path);
    CHECK(r.code == 0);
    CHECK(r.out.find("\"bodies\"") != std::string::npos);
    CHECK(r.out.find("\"truncated\":false") != std::string::npos);
}

TEST_CASE("report evaluates the polygon inequalities") {
    std::string path = tmp_path("comb4r.json");
    REQUIRE(run_cli("construct comb --n 4 --delta 1e-3 -o " + path).code == 0);
    auto r = run_cli("report --in " + path + " --samples 20000 --seed 11");
    CHECK(r.code == 0);
    CHECK(r.out.find("beer_ge_c_squared") != std::string::npos);
    CHECK(r.out.find("beer_le_180c") != std::string::npos);
}

TEST_CASE("sweep over a config emits csv rows") {
    std::string cfg = tmp_path("sweep.json");
    {
        std::ofstream out(cfg);
        out << R"({"runs":[
            {"construct":{"kind":"comb","n":4,"delta":1e-4},"quantity":"beer","samples":20000,"seed":7},
            {"construct":{"kind":"comb","n":8,"delta":1e-4},"quantity":"beer","samples":20000,"seed":8}
        ]})";
    }
    auto r = run_cli("sweep --config " + cfg);
    CHECK(r.code == 0);
    CHECK(r.out.find("instance,quantity") != std::string::npos);
    CHECK(r.out.find("comb_4") != std::string::npos);
    CHECK(r.out.find("comb_8") != std::string::npos);
}

TEST_CASE("sweep over punctured boxes checks the lower bound") {
    std::string cfg = tmp_path("sweep_box.json");
    {
        std::ofstream out(cfg);
        out << R"({"runs":[
            {"construct":{"kind":"box","d":2,"r":8},"quantity":"kindex","samples":30000,"seed":5}
        ]})";
    }
    auto r = run_cli("sweep --config " + cfg);
    CHECK(r.code == 0);
    CHECK(r.out.find("box_d2_r8") != std::string::npos);
    // bound column = 1/(2|N|) and the pass flag set
    CHECK(r.out.find(",1,ok") != std::string::npos);
}

TEST_CASE("empty sweep config yields only the header") {
    std::string cfg = tmp_path("sweep_empty.json");
    {
        std::ofstream out(cfg);
        out << R"({"runs":[]})";
    }
    auto r = run_cli("sweep --config " + cfg);
    CHECK(r.code == 0);
    CHECK(r.out.find("instance,quantity") != std::string::npos);
    CHECK(r.out.find("comb") == std::string::npos);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("estimate beer").code == 2);              // missing --in
    CHECK(run_cli("construct nonsense").code == 2);         // unknown target
    CHECK(run_cli("estimate beer --in /nope.json").code == 2);
}
