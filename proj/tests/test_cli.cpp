#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <string>
#include <sys/wait.h>

#include "doctest.h"

#include "ebmod/problemfile.hpp"
#include "ebmod/report.hpp"

using namespace ebmod;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("EBMOD_CLI");
    REQUIRE_MESSAGE(p != nullptr, "EBMOD_CLI not set");
    return p;
}

std::string data(const std::string& name) {
    const char* p = std::getenv("EBMOD_DATA");
    REQUIRE_MESSAGE(p != nullptr, "EBMOD_DATA not set");
    return std::string(p) + "/" + name;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("problem files round-trip through emit/parse") {
    for (const char* name :
         {"two_points.json", "axes.json", "max_quad_affine.json", "box.json",
          "circle_weighted.json", "circle_unit.json", "halfplane_table.json"}) {
        const ProblemFile a = parse_problem_file(data(name));
        const ProblemFile b = parse_problem(emit_problem(a).dump());
        CHECK(emit_problem(a) == emit_problem(b));
    }
}

TEST_CASE("problem file diagnostics name the offending field") {
    CHECK_THROWS_WITH_AS(parse_problem_file(data("bad_version.json")),
                         doctest::Contains("schema_version"), InputError);
    CHECK_THROWS_WITH_AS(parse_problem_file(data("bad_field.json")),
                         doctest::Contains("pieces[0]/b"), InputError);
    CHECK_THROWS_AS(parse_problem("{not json"), InputError);
    CHECK_THROWS_WITH_AS(parse_problem(R"({"schema_version":1,"kind":"zoo"})"),
                         doctest::Contains("kind"), InputError);
}

TEST_CASE("report float formatting") {
    CHECK(format_real(2.0 * std::acos(-1.0)) == "6.28318530718");
    CHECK(format_real(1.0) == "1");
    CHECK(format_real(0.5) == "0.5");
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("endset command") {
    auto r = run("endset " + data("two_points.json") + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1.41421356237") != std::string::npos);

    r = run("endset " + data("origin.json") + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"finite\": false") != std::string::npos);

    r = run("endset " + data("axes.json") + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.707106781187") != std::string::npos);

    r = run("endset " + data("disk_slab.json") + " --gauge 0,1 --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"end_set_member\": true") != std::string::npos);
}

TEST_CASE("minnorm command") {
    const auto r = run("minnorm " + data("axes.json") + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.707106781187") != std::string::npos);
}

TEST_CASE("analyze command") {
    const auto r = run("analyze " + data("max_quad_affine.json") + " --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1.41421356237") != std::string::npos);  // upper
    CHECK(r.out.find("\"lower_tight\": true") != std::string::npos);

    const auto stu = run("analyze " + data("stu_war.json") + " --json");
    CHECK(stu.exit_code == 0);
    CHECK(stu.out.find("\"provenance\": \"fixture\"") != std::string::npos);

    // curve tables project through the discretized halfspace family and
    // report the exact residual at a projected point
    const auto tab = run("analyze " + data("halfplane_table.json") + " --json");
    CHECK(tab.exit_code == 0);
    CHECK(tab.out.find("discretized") != std::string::npos);
}

TEST_CASE("linsys command") {
    const auto r = run("linsys " + data("box.json") + " --probe lp --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("0.707106781187") != std::string::npos);
    CHECK(r.out.find("no-counterexample") != std::string::npos);

    const auto cw =
        run("linsys " + data("circle_weighted.json") + " --probe lp --json");
    CHECK(cw.exit_code == 0);
    CHECK(cw.out.find("6.28318530718") != std::string::npos);
    CHECK(cw.out.find("\"verdict\": \"counterexample\"") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
    const std::string cmd =
        "analyze " + data("circle_unit.json") + " --seed 5 --json";
    const auto a = run(cmd);
    const auto b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    const auto v1 = run("verify-paper --json");
    const auto v2 = run("verify-paper --json");
    CHECK(v1.exit_code == 0);
    CHECK(v1.out == v2.out);
}

TEST_CASE("seed falls back to EBMOD_SEED") {
    const std::string file = data("max_quad_affine.json");
    const auto flagged = run("analyze " + file + " --seed 9 --json");
    const std::string cmd = "env EBMOD_SEED=9 " + cli_path() + " analyze " +
                            file + " --json 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        out.append(buf.data(), n);
    pclose(pipe);
    CHECK(out == flagged.out);
}

TEST_CASE("error exit codes") {
    CHECK(run("analyze /nonexistent.json").exit_code == 1);
    CHECK(run("analyze " + data("bad_version.json")).exit_code == 1);
    CHECK(run("endset " + data("bad_field.json")).exit_code == 1);
    CHECK(run("verify-paper --perturb --json").exit_code == 3);
}
