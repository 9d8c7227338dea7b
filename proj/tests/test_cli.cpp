#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "isothermic/cli.hpp"
#include "isothermic/io.hpp"

using namespace isothermic;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path workdir() {
    const fs::path dir = fs::temp_directory_path() / "isothermic_test_cli";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("curve and darboux subcommands") {
    const auto dir = workdir();
    const std::string curve = (dir / "c.json").string();
    const std::string layer = (dir / "layer.json").string();
    auto r = run({"curve", "--family", "circle", "--radius", "1", "--grid", "0:6.283185:629", "--out", curve});
    REQUIRE(r.code == cli::kOk);
    const auto c = io::curve_from_json(io::read_json(curve));
    CHECK(c.size() == 629);
    CHECK(c.dim() == 2);

    r = run({"darboux", "--in", curve, "--mu", "-2", "--init", "2,0", "--out", layer, "--report"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("fitted mu -2") != std::string::npos);
    const auto l = io::curve_from_json(io::read_json(layer));
    for (int k = 0; k < l.size(); k += 50) CHECK(l.point(k).norm() == doctest::Approx(2.0).epsilon(1e-6));

    r = run({"darboux", "--in", curve, "--mu", "-2", "--init", "2,0", "--route", "riccati", "--report"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("route riccati") != std::string::npos);
}

TEST_CASE("verify exit codes") {
    const auto dir = workdir();
    const std::string surface = (dir / "s.json").string();
    REQUIRE(run({"surface", "build", "--fixture", "cylinder-patch", "--out", surface}).code == cli::kOk);

    auto r = run({"verify", "--surface", surface, "--suite", "surface"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("0 failed") != std::string::npos);

    r = run({"verify", "--surface", surface, "--suite", "surface", "--tol-override", "surface.isothermic=1e-30"});
    CHECK(r.code == cli::kVerificationFailed);
    CHECK(r.out.find("FAIL") != std::string::npos);
    CHECK(r.out.find("surface.isothermic") != std::string::npos);

    r = run({"verify", "--surface", surface, "--suite", "surface", "--tol-override", "no.such.check=1"});
    CHECK(r.code == cli::kUsageError);

    r = run({"verify", "--surface", (dir / "missing.json").string(), "--suite", "surface"});
    CHECK(r.code == cli::kUsageError);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("usage errors") {
    auto r = run({"frobnicate"});
    CHECK(r.code == cli::kUsageError);
    CHECK(r.err.find("Usage") != std::string::npos);

    CHECK(run({}).code == cli::kUsageError);
    CHECK(run({"darboux", "--mu", "-2"}).code == cli::kUsageError);
    CHECK(run({"curve", "--family", "circle", "--grid", "0:1"}).code == cli::kUsageError);

    const auto dir = workdir();
    const std::string broken = (dir / "broken.json").string();
    std::ofstream(broken) << "{\"n\": 2, \"grid\": ";
    CHECK(run({"dual", "--in", broken}).code == cli::kUsageError);
}

TEST_CASE("cmc and export") {
    auto r = run({"cmc", "--fixture", "cmc-cylinder"});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("mean curvature -0.5") != std::string::npos);

    const auto dir = workdir();
    const std::string surface = (dir / "layered.json").string();
    const std::string mesh = (dir / "layered.obj").string();
    REQUIRE(run({"surface", "build", "--fixture", "layered", "--grid", "0:2:101", "--out", surface}).code == cli::kOk);
    REQUIRE(run({"export", "--in", surface, "--format", "obj", "--out", mesh}).code == cli::kOk);
    std::ifstream in(mesh);
    int vertices = 0;
    int faces = 0;
    for (std::string line; std::getline(in, line);) {
        vertices += line.rfind("v ", 0) == 0;
        faces += line.rfind("f ", 0) == 0;
    }
    CHECK(vertices == 303);
    CHECK(faces == 200);
}
