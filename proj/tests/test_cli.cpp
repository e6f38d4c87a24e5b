#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "thickpave/cli.hpp"
#include "thickpave/io.hpp"

using namespace thickpave;

namespace {

std::string data_file(const std::string& name) {
    return std::string(THICKPAVE_DATA_DIR) + "/" + name;
}

std::string temp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Extracts the text after "<label> = " on its own line.
std::string line_value(const std::string& text, const std::string& label) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        auto at = line.find(label + " = ");
        if (at == 0) return line.substr(label.size() + 3);
    }
    return {};
}

} // namespace

TEST_CASE("lie prints the swing derivatives") {
    auto r = run_cli({"lie", data_file("swing1.sys")});
    REQUIRE(r.code == 0);

    Declarations d{{"x1", "x2"}, {"p1", "p2", "p3"}};
    std::mt19937_64 rng(701);
    Expr la = parse_expr(line_value(r.out, "A.La"), d);
    Expr lb = parse_expr(line_value(r.out, "A.Lb"), d);
    CHECK(tpt::extensionally_equal(
        la, parse_expr("2*(x1 + p2)*x2 + 2*(x2 + p3)*(p1 - sin(x1))", d), 2, 3, rng));
    CHECK(tpt::extensionally_equal(
        lb, parse_expr("2*(x1 + p2)*x2 + 2*(x2 + p3)*(p1 - sin(x1) - x2)", d), 2, 3, rng));
}

TEST_CASE("lie reports both leaves of swing2") {
    auto r = run_cli({"lie", data_file("swing2.sys")});
    REQUIRE(r.code == 0);
    Declarations d{{"x1", "x2"}, {"p1", "p2", "p3"}};
    std::mt19937_64 rng(702);
    Expr la2 = parse_expr(line_value(r.out, "A2.La"), d);
    Expr lb2 = parse_expr(line_value(r.out, "A2.Lb"), d);
    CHECK(tpt::extensionally_equal(la2, parse_expr("p1 - sin(x1)", d), 2, 3, rng));
    CHECK(tpt::extensionally_equal(lb2, parse_expr("p1 - sin(x1) - x2", d), 2, 3, rng));
}

TEST_CASE("pave writes a paving and reports an empty inner approximation") {
    std::string out_json = temp_path("swing1.json");
    std::string out_svg = temp_path("swing1.svg");
    auto r = run_cli({"pave", data_file("swing1.sys"), "--out", out_json, "--svg", out_svg,
                      "--epsilon", "0.2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("inner approximation empty: yes") != std::string::npos);

    Paving p = read_paving(slurp(out_json));
    CHECK(p.count(BoxClass::IN) == 0);
    CHECK(p.count(BoxClass::PEN) > 0);
    CHECK(slurp(out_svg).find("<svg") != std::string::npos);

    std::remove(out_json.c_str());
    std::remove(out_svg.c_str());
}

TEST_CASE("pave is deterministic across worker counts") {
    std::string one = temp_path("workers1.json");
    std::string eight = temp_path("workers8.json");
    auto r1 = run_cli({"pave", data_file("swing1.sys"), "--out", one, "--epsilon", "0.2",
                       "--workers", "1"});
    auto r8 = run_cli({"pave", data_file("swing1.sys"), "--out", eight, "--epsilon", "0.2",
                       "--workers", "8"});
    REQUIRE(r1.code == 0);
    REQUIRE(r8.code == 0);
    CHECK(slurp(one) == slurp(eight));
    std::remove(one.c_str());
    std::remove(eight.c_str());
}

TEST_CASE("check accepts a sound paving and rejects a corrupted one") {
    std::string out_json = temp_path("check.json");
    auto paved = run_cli({"pave", data_file("swing1.sys"), "--out", out_json, "--epsilon",
                          "0.1"});
    REQUIRE(paved.code == 0);

    auto ok = run_cli({"check", data_file("swing1.sys"), "--paving", out_json, "--samples",
                       "400", "--seed", "11"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("0 violations") != std::string::npos);

    // Relabeling every non-OUT box as OUT must trip the oracle.
    Paving p = read_paving(slurp(out_json));
    for (auto& e : p.entries) e.cls = BoxClass::OUT;
    p.meta.counts = {0, 0, static_cast<std::uint64_t>(p.entries.size()), 0};
    std::string corrupted = temp_path("corrupted.json");
    std::ofstream(corrupted, std::ios::binary) << write_paving(p);

    auto bad = run_cli({"check", data_file("swing1.sys"), "--paving", corrupted, "--samples",
                        "400", "--seed", "11"});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("violation") != std::string::npos);

    std::remove(out_json.c_str());
    std::remove(corrupted.c_str());
}

TEST_CASE("failures map to the documented exit codes") {
    auto missing = run_cli({"pave", "no_such_file.sys", "--out", temp_path("x.json")});
    CHECK(missing.code == 1);
    CHECK(!missing.err.empty());

    std::string bad_sys = temp_path("bad.sys");
    std::ofstream(bad_sys) << "state x1 x2\nfield a : ( x2 )\n";
    auto bad = run_cli({"lie", bad_sys});
    CHECK(bad.code == 1);
    CHECK(!bad.err.empty());
    std::remove(bad_sys.c_str());

    auto unknown = run_cli({"frobnicate"});
    CHECK(unknown.code == 1);

    auto no_out = run_cli({"pave", data_file("swing1.sys")});
    CHECK(no_out.code == 1);

    std::string out_json = temp_path("budget.json");
    auto spent = run_cli({"pave", data_file("swing1.sys"), "--out", out_json,
                          "--box-budget", "50"});
    CHECK(spent.code == 3);
    std::remove(out_json.c_str());

    auto neg_eps = run_cli({"pave", data_file("swing1.sys"), "--out", out_json,
                            "--epsilon", "-0.5"});
    CHECK(neg_eps.code == 1);
}

TEST_CASE("help is not an error") {
    auto r = run_cli({"--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("pave") != std::string::npos);
}
