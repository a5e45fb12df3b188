#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "hypolymin/document.hpp"

#ifndef HYPOLYMIN_CLI_PATH
#error "HYPOLYMIN_CLI_PATH must point at the hypolymin binary"
#endif

namespace fs = std::filesystem;

namespace {

const double kPi = 3.14159265358979323846;

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("hypolymin_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

// Runs the installed binary through the shell so quoting and redirection
// behave like an interactive invocation. env_prefix may set variables for
// the child, e.g. "HYPOLYMIN_TOL=1e-7".
CliResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    fs::path out_file = scratch_dir() / ("out_" + std::to_string(counter) + ".txt");
    fs::path err_file = scratch_dir() / ("err_" + std::to_string(counter) + ".txt");
    ++counter;

    std::string cmd;
    if (!env_prefix.empty()) cmd += env_prefix + " ";
    cmd += "\"";
    cmd += HYPOLYMIN_CLI_PATH;
    cmd += "\" " + args + " >" + out_file.string() + " 2>" + err_file.string();

    int raw = std::system(cmd.c_str());
    CliResult r;
    if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

// Pulls the number following "key=" on its own summary line.
double extract_value(const std::string& out, const std::string& key) {
    std::istringstream ss(out);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(key + "=", 0) == 0) return std::stod(line.substr(key.size() + 1));
    }
    FAIL("missing summary line ", key, "=");
    return 0.0;
}

std::string reg3_angles() { return "\"2*pi/3,2*pi/3,2*pi/3\""; }

} // namespace

TEST_CASE("construct prints the closed form summary") {
    CliResult r = run_cli("construct --center cusp --angles " + reg3_angles());
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "n=3\n"));
    CHECK(contains(r.out, "critical=yes\n"));
    CHECK(contains(r.out, "level=-3"));
    CHECK(extract_value(r.out, "perimeter") == doctest::Approx(3.295836866004329).epsilon(1e-15));
    CHECK(extract_value(r.out, "residual") <= 1e-9);
    CHECK(extract_value(r.out, "tangency_spread") <= 1e-9);
}

TEST_CASE("construct document output is parseable and byte stable") {
    fs::path a = scratch_dir() / "doc_a.json";
    fs::path b = scratch_dir() / "doc_b.json";
    CliResult ra = run_cli("construct --center geodesic:1.0 --angles \"pi/2,pi/2,pi/2\" --out " +
                           a.string());
    CliResult rb = run_cli("construct --center geodesic:1.0 --angles \"pi/2,pi/2,pi/2\" --out " +
                           b.string());
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(ra.out == rb.out);

    std::string bytes_a = slurp(a);
    std::string bytes_b = slurp(b);
    REQUIRE(!bytes_a.empty());
    CHECK(bytes_a == bytes_b);

    hypolymin::PolygonDocument doc = hypolymin::document_from_json(bytes_a);
    CHECK(doc.angles.size() == 3);
    CHECK(doc.perimeter == doctest::Approx(5.4047583671755293).epsilon(1e-12));
    CHECK(doc.critical);
    REQUIRE(doc.level.has_value());
    CHECK(*doc.level == doctest::Approx(4.3398450654963501).epsilon(1e-9));
}

TEST_CASE("pi tokens match their decimal expansions exactly") {
    std::ostringstream dec;
    dec << std::setprecision(17) << 2.0 * kPi / 3.0;
    std::string decimal = dec.str();

    fs::path a = scratch_dir() / "tok.json";
    fs::path b = scratch_dir() / "dec.json";
    CliResult ra =
        run_cli("construct --center cusp --angles " + reg3_angles() + " --out " + a.string());
    CliResult rb = run_cli("construct --center cusp --angles \"" + decimal + "," + decimal + "," +
                           decimal + "\" --out " + b.string());
    REQUIRE(ra.code == 0);
    REQUIRE(rb.code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(ra.out == rb.out);
}

TEST_CASE("construct writes an svg picture") {
    fs::path p = scratch_dir() / "pic.svg";
    CliResult r = run_cli("construct --center cone:0.9 --angles \"0.8,1.3,2.1,1.7\" --svg " +
                          p.string());
    REQUIRE(r.code == 0);
    std::string svg = slurp(p);
    REQUIRE(!svg.empty());
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(contains(svg, "</svg>"));
}

TEST_CASE("optimize converges from every start and agrees with construct") {
    CliResult r =
        run_cli("optimize --center cusp --angles " + reg3_angles() + " --starts 3 --seed 5");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "starts=3 converged=3 failed=0\n"));
    CHECK(extract_value(r.out, "perimeter_spread") <= 1e-6);
    CHECK(extract_value(r.out, "perimeter") == doctest::Approx(3.295836866004329).epsilon(1e-8));
    CHECK(contains(r.out, "critical=yes\n"));
}

TEST_CASE("optimize respects the residual tolerance variable") {
    CliResult r = run_cli("optimize --center cusp --angles " + reg3_angles() +
                              " --starts 2 --seed 3",
                          "HYPOLYMIN_TOL=1e-7");
    REQUIRE(r.code == 0);
    CHECK(contains(r.out, "starts=2 converged=2 failed=0\n"));

    CliResult bad = run_cli("optimize --center cusp --angles " + reg3_angles(),
                            "HYPOLYMIN_TOL=abc");
    CHECK(bad.code == 64);
    CHECK(contains(bad.err, "HYPOLYMIN_TOL"));
}

TEST_CASE("spine prints the edge count and length bound") {
    CliResult r = run_cli("spine --genus 2 --punctures 1");
    REQUIRE(r.code == 0);
    CHECK(r.out == "edges=9 bound=9.887510598\n");

    CliResult s = run_cli("spine --genus 0 --punctures 3");
    REQUIRE(s.code == 0);
    CHECK(s.out == "edges=3 bound=3.295836866\n");
}

TEST_CASE("usage problems exit 64") {
    CHECK(run_cli("").code == 64);
    CHECK(run_cli("frobnicate").code == 64);
    CHECK(run_cli("construct --center cusp").code == 64);

    CliResult bad_center = run_cli("construct --center orbifold:2 --angles " + reg3_angles());
    CHECK(bad_center.code == 64);
    CHECK(contains(bad_center.err, "usage error"));

    CliResult bad_angle = run_cli("construct --center cusp --angles \"2*tau/3\"");
    CHECK(bad_angle.code == 64);
    CHECK(contains(bad_angle.err, "usage error"));
}

TEST_CASE("infeasible inputs exit 2") {
    CliResult tight = run_cli("construct --center cone:6 --angles "
                              "\"2*pi/3,2*pi/3,2*pi/3,2*pi/3,2*pi/3\"");
    CHECK(tight.code == 2);
    CHECK(contains(tight.err, "error"));

    CliResult range = run_cli("construct --center cone:7 --angles " + reg3_angles());
    CHECK(range.code == 2);

    CliResult sphere = run_cli("spine --genus 0 --punctures 0");
    CHECK(sphere.code == 2);
}

TEST_CASE("help exits cleanly") {
    CliResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "construct"));
    CHECK(contains(r.out, "HYPOLYMIN_TOL"));
}
