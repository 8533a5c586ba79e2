#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qpole/cli.hpp"
#include "qpole/error.hpp"
#include "qpole/io.hpp"
#include "support/golden.hpp"

using namespace qpole;
using namespace qpole::testing;
namespace g = qpole::testing::golden;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const char* name) { return (fs::path(QPOLE_DATA_DIR) / name).string(); }

// Scratch directory unique to this test binary.
fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("qpole-cli-test-" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_temp(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
}

QMatrix matrix_at(const io::Json& report, const char* key) { return io::parse_matrix(report.at(key)); }

}  // namespace

TEST_CASE("companion report") {
    const auto r = run({"companion", data("example_system.json")});
    REQUIRE(r.code == cli::kSuccess);
    const auto j = io::parse_text(r.out);
    CHECK(j.at("command") == "companion");
    CHECK(j.at("label") == "two-state quaternionic pair");
    CHECK(j.at("input_digest").get<std::string>().rfind("sha256:", 0) == 0);
    CHECK(max_abs_diff(matrix_at(j, "T_inv"), g::kTInv) < 1e-12);
    CHECK(max_abs_diff(matrix_at(j, "T"), g::kT) < 1e-12);
    CHECK(max_abs_diff(matrix_at(j, "A_c"), g::kAc) < 1e-12);
    CHECK(io::parse_polynomial(j.at("a")) == g::kCompanionPoly);
    CHECK(j.at("rounded").at("a").size() == 3);
}

TEST_CASE("companion failures") {
    CHECK(run({"companion", data("uncontrollable_system.json")}).code == cli::kUncontrollable);
    const auto bad = write_temp("bad.json", R"({"A": [[[1, 0, 0]]], "B": [[1, 0, 0, 0]]})");
    const auto r = run({"companion", bad});
    CHECK(r.code == cli::kParseError);
    CHECK_FALSE(r.err.empty());
    CHECK(run({"companion", (scratch() / "missing.json").string()}).code == cli::kParseError);
    CHECK(run({"companion", write_temp("garbage.json", "{not json")}).code == cli::kParseError);
    CHECK(run({"frobnicate"}).code == cli::kParseError);
}

TEST_CASE("place with real poles") {
    const auto r = run({"place", data("example_system.json"), data("target_real.json")});
    REQUIRE(r.code == cli::kSuccess);
    const auto j = io::parse_text(r.out);
    CHECK(j.at("method") == "matching");
    CHECK(j.at("matched") == true);
    CHECK(j.at("stable") == true);
    CHECK(max_abs_diff(io::parse_gain(j), g::kGainRealPair) < 1e-12);
    CHECK(max_abs_diff(matrix_at(j, "A_cl"), g::kClosedLoopRealPair) < 1e-12);

    const auto sphere = run({"place", data("example_system.json"), data("target_complex_pair.json"), "--method",
                             "ackermann"});
    REQUIRE(sphere.code == cli::kSuccess);
    const auto js = io::parse_text(sphere.out);
    CHECK(max_abs_diff(io::parse_gain(js), g::kGainSphere) < 1e-10);
    CHECK(js.at("achieved").at(0).at("multiplicity") == 2);
}

TEST_CASE("place with quaternion roots") {
    const auto r = run({"place", data("example_system.json"), data("target_quaternion_roots.json")});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(max_abs_diff(io::parse_gain(io::parse_text(r.out)), g::kGainQuaternionic) < 1e-12);

    CHECK(run({"place", data("example_system.json"), data("target_quaternion_roots.json"), "--method", "ackermann"})
              .code == cli::kScopeViolation);

    const auto forced = run({"place", data("example_system.json"), data("target_quaternion_roots.json"), "--method",
                             "ackermann", "--allow-nonreal"});
    CHECK(forced.code == cli::kVerificationFailed);
    const auto j = io::parse_text(forced.out);
    CHECK(j.at("matched") == false);
    CHECK(j.at("stable") == true);
    CHECK_FALSE(j.at("warnings").empty());
}

TEST_CASE("place input validation") {
    const auto sys = data("example_system.json");
    CHECK(run({"place", sys, R"({"real_poles": [-1]})"}).code == cli::kParseError);
    CHECK(run({"place", sys, R"({"real_poles": [-1, -2], "polynomial": [[2,0,0,0],[3,0,0,0],[1,0,0,0]]})"}).code ==
          cli::kParseError);
    CHECK(run({"place", sys, R"({"quaternion_roots": [[-1,1,0,0], [-1,0,1,0]]})"}).code == cli::kParseError);
    CHECK(run({"place", sys, R"({"polynomial": [[2,0,0,0],[3,0,0,0],[1,0,0,0]]})"}).code == cli::kSuccess);
    CHECK(run({"place", sys, data("target_real.json"), "--method", "pole-zero"}).code == cli::kParseError);
}

TEST_CASE("place honours the stability margin") {
    CHECK(run({"place", data("example_system.json"), data("target_real.json"), "--margin", "0.5"}).code ==
          cli::kSuccess);
    CHECK(run({"place", data("example_system.json"), data("target_real.json"), "--margin", "1.5"}).code ==
          cli::kVerificationFailed);
}

TEST_CASE("spectrum of matrices") {
    const auto loop = write_temp("loop.json", io::dump_canonical(io::Json{{"matrix", io::to_json(g::kClosedLoopRealPair)}}));
    const auto r = run({"spectrum", loop});
    REQUIRE(r.code == cli::kSuccess);
    const auto j = io::parse_text(r.out);
    CHECK(j.at("stable") == true);
    REQUIRE(j.at("spectrum").size() == 2);
    CHECK(j.at("spectrum").at(0).at("re").get<double>() == doctest::Approx(-2.0));
    CHECK(j.at("spectrum").at(1).at("re").get<double>() == doctest::Approx(-1.0));

    const auto zero = write_temp("zero.json", "[[[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,0,0]]]");
    const auto sphere = write_temp("sphere.json", io::dump_canonical(io::to_json(g::kClosedLoopSphere)));
    const auto both = run({"spectrum", zero, sphere, data("example_system.json")});
    REQUIRE(both.code == cli::kSuccess);
    const auto arr = io::parse_text(both.out);
    REQUIRE(arr.size() == 3);
    CHECK(arr.at(0).at("spectrum").at(0).at("multiplicity") == 2);
    CHECK(arr.at(0).at("stable") == false);
    CHECK(arr.at(1).at("spectrum").at(0).at("multiplicity") == 2);
    CHECK(arr.at(1).at("spectrum").at(0).at("im").get<double>() == doctest::Approx(1.0));
    CHECK(arr.at(2).at("n") == 2);
}

TEST_CASE("verify round trip through a saved report") {
    const auto report = (scratch() / "report.json").string();
    REQUIRE(run({"place", data("example_system.json"), data("target_quaternion_roots.json"), "-o", report}).code ==
            cli::kSuccess);
    CHECK(run({"verify", data("example_system.json"), report, data("target_quaternion_roots.json")}).code ==
          cli::kSuccess);
    CHECK(run({"verify", data("example_system.json"), report, data("target_real.json")}).code ==
          cli::kVerificationFailed);
    const auto inline_gain = run({"verify", data("example_system.json"),
                                  R"({"K": [[2.5,1,0,2.5],[-1.5,1,0,-1.5]]})", R"({"real_poles": [-2, -1]})"});
    CHECK(inline_gain.code == cli::kSuccess);
    CHECK(io::parse_text(inline_gain.out).at("method") == "verify");
}

TEST_CASE("simulate writes CSV") {
    const auto gain = write_temp("gain.json", R"({"K": [[2.5,1,0,2.5],[-1.5,1,0,-1.5]]})");
    const auto r = run({"simulate", data("example_system.json"), "--gain", gain, "--x0", "[[1,0,0,0],[0,0,0,1]]",
                        "--dt", "0.01", "--horizon", "5"});
    REQUIRE(r.code == cli::kSuccess);
    std::istringstream is(r.out);
    std::string line, last;
    std::getline(is, line);
    CHECK(line == "t,x1_w,x1_x,x1_y,x1_z,x2_w,x2_x,x2_y,x2_z,norm");
    int rows = 0;
    while (std::getline(is, line)) {
        last = line;
        ++rows;
    }
    CHECK(rows == 501);
    const double final_norm = std::stod(last.substr(last.rfind(',') + 1));
    CHECK(final_norm == doctest::Approx(0.01888127552647851).epsilon(1e-6));

    const auto zero = run({"simulate", data("example_system.json"), "--x0", "[[0,0,0,0],[0,0,0,0]]", "--horizon", "1"});
    CHECK(zero.code == cli::kSuccess);

    const auto unstable = write_temp("unstable.json", R"({"A": [[[1e200,0,0,0]]], "B": [[1,0,0,0]]})");
    CHECK(run({"simulate", unstable, "--x0", "[[1,0,0,0]]", "--dt", "1", "--horizon", "10"}).code == cli::kDiverged);
}

TEST_CASE("tolerances from the environment") {
    ::setenv("QPOLE_MATCH_TOL", "not-a-number", 1);
    CHECK(run({"companion", data("example_system.json")}).code == cli::kParseError);
    ::setenv("QPOLE_MATCH_TOL", "1e-3", 1);
    CHECK(io::options_from_environment().match_tol == 1e-3);
    ::unsetenv("QPOLE_MATCH_TOL");
}

TEST_CASE("canonical serialization round trips byte for byte") {
    const auto r = run({"place", data("example_system.json"), data("target_quaternion_roots.json")});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(io::dump_canonical(io::parse_text(r.out)) == r.out);

    const auto sys_text = io::read_file(data("example_system.json"));
    const auto sys = io::parse_system(io::parse_text(sys_text));
    const std::string once = io::dump_canonical(io::to_json(sys));
    const std::string twice = io::dump_canonical(io::to_json(io::parse_system(io::parse_text(once))));
    CHECK(once == twice);
    CHECK(io::dump_canonical(io::Json{{"x", -0.0}}).find("-0") == std::string::npos);
}

TEST_CASE("quaternion parsing") {
    CHECK(io::parse_quaternion(io::parse_text("[1, 2, 3, 4]")) == Quaternion{1, 2, 3, 4});
    CHECK_THROWS_AS(io::parse_quaternion(io::parse_text("[1, 2, 3]")), ParseError);
    CHECK_THROWS_AS(io::parse_quaternion(io::parse_text("[1, 2, 3, \"x\"]")), ParseError);
    CHECK_THROWS_AS(io::parse_quaternion(io::parse_text("{\"w\": 1}")), ParseError);
    CHECK_THROWS_AS(io::parse_quaternion(io::parse_text("[1, 2, 3, 1e999]")), ParseError);
}

TEST_CASE("digest depends on content and order") {
    const auto a = io::digest({"one", "two"});
    CHECK(a == io::digest({"one", "two"}));
    CHECK(a != io::digest({"two", "one"}));
    CHECK(a != io::digest({"onet", "wo"}));
    CHECK(a.size() == 7 + 64);
}
