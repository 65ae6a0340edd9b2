#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "fluor/image.hpp"
#include "fluor/reduction.hpp"
#include "fluor/text_io.hpp"
#include "support.hpp"

using namespace fluor;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(FLUOR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("reduce") {
    const auto dir = test::temp_dir("cli_reduce");
    REQUIRE(run("reduce --material identity --basis xyzu --method ours --out " + q(dir)) == 0);
    const ReducedMatrix r = read_reduced_matrix(dir / "identity_xyzu_ours.txt");
    CHECK(r.matrix().rows() == 4);
    CHECK((r.matrix() - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(fs::exists(dir / "identity_xyzu_ours_db.png"));

    REQUIRE(run("reduce --material identity --method naive --rgb --out " + q(dir)) == 0);
    const ReducedMatrix n = read_reduced_matrix(dir / "identity_xyz_naive.txt");
    const Eigen::MatrixXd off = n.matrix() - Eigen::MatrixXd(n.matrix().diagonal().asDiagonal());
    CHECK(off.cwiseAbs().maxCoeff() > 0.01);
    CHECK(fs::exists(dir / "identity_xyz_naive_rgb.txt"));

    const std::string first = text_io::read_file(dir / "identity_xyz_naive.txt");
    const std::string first_png = text_io::read_file(dir / "identity_xyz_naive_db.png");
    REQUIRE(run("reduce --material identity --method naive --rgb --out " + q(dir)) == 0);
    CHECK(text_io::read_file(dir / "identity_xyz_naive.txt") == first);
    CHECK(text_io::read_file(dir / "identity_xyz_naive_db.png") == first_png);
    CHECK(first.find("# config {") != std::string::npos);
}

TEST_CASE("exit codes") {
    const auto dir = test::temp_dir("cli_errors");
    CHECK(run("reduce --material identity --basis rgb --out " + q(dir)) == 2);
    CHECK(run("reduce --out " + q(dir)) == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("reduce --material no-such-material --out " + q(dir)) == 3);
    CHECK(run("reduce --material identity --grid 800:300:1 --out " + q(dir)) == 2);
    CHECK(run("render --scene " + q(dir / "missing.scene") + " --out " + q(dir)) == 3);
    CHECK(run("--help") == 0);
}

TEST_CASE("one-bounce render equals the patch report") {
    const auto dir = test::temp_dir("cli_patch");
    const fs::path scene = fs::path(FLUOR_SCENES) / "patch.scene";
    REQUIRE(run("render --scene " + q(scene) + " --method ours --basis xyzu --out " + q(dir)) == 0);
    REQUIRE(run("patch --material syn-herpioye --illuminant D65 --basis xyzu --out " + q(dir)) == 0);
    const auto report = nlohmann::json::parse(text_io::read_file(dir / "patch_xyzu.json"));
    const auto& entry = report["materials"]["syn-herpioye"]["D65"];
    const Eigen::Vector3d patch(entry["ours"]["xyz"][0], entry["ours"]["xyz"][1], entry["ours"]["xyz"][2]);
    const Eigen::Vector3d ref(entry["reference"][0], entry["reference"][1], entry["reference"][2]);
    CHECK(report["config"]["command"] == "patch");

    const Image img = read_raster(dir / "render_ours_xyzu.raster");
    const Image oracle = read_raster(dir / "reference.raster");
    CHECK(img.width() == 8);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            CHECK((img.pixel(x, y) - patch).cwiseAbs().maxCoeff() <= 1e-6 * patch.maxCoeff());
            CHECK((oracle.pixel(x, y) - ref).cwiseAbs().maxCoeff() <= 1e-6 * ref.maxCoeff());
        }
    }
}

TEST_CASE("identity swipe follows the colour matching functions") {
    const auto dir = test::temp_dir("cli_swipe");
    REQUIRE(run("swipe --material identity --range 400:700:50 --out " + q(dir)) == 0);
    const auto report = nlohmann::json::parse(text_io::read_file(dir / "swipe_xyz.json"));
    const auto& m = report["materials"]["identity"];
    REQUIRE(m["reference"].size() == 7);
    // The ours row reproduces the reference strip; CIE y peaks near 555 nm.
    for (std::size_t i = 0; i < 7; ++i) {
        for (std::size_t c = 0; c < 3; ++c) {
            CHECK(std::abs(m["ours"]["xyz"][i][c].get<double>() - m["reference"][i][c].get<double>()) < 1e-9);
        }
    }
    CHECK(m["reference"][3][1].get<double>() > 0.9);
    CHECK(m["reference"][0][1].get<double>() < 0.05);
}

TEST_CASE("eval and validate") {
    const auto dir = test::temp_dir("cli_eval");
    REQUIRE(run("eval --material identity syn-herpioye syn-uvyellow --illuminant D65 A Gauss350 --out " + q(dir)) == 0);
    const auto report = nlohmann::json::parse(text_io::read_file(dir / "eval_report.json"));
    CHECK(report["config"]["command"] == "eval");
    CHECK(fs::exists(dir / "eval_table.txt"));

    REQUIRE(run("validate --material " + q(test::fixture("noisy_measured.csv")) + " --out " + q(dir)) == 0);
    CHECK(fs::exists(dir / "validate_report.json"));
    CHECK(run("validate --material " + q(test::fixture("noisy_measured.csv")) +
              " --max-anti-stokes 0 --out " + q(dir)) == 2);
}
