#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fluor/colorimetry.hpp"
#include "fluor/error.hpp"
#include "fluor/materials.hpp"
#include "fluor/reduction.hpp"
#include "fluor/text_io.hpp"
#include "fluor/transport.hpp"
#include "support.hpp"

using namespace fluor;

TEST_CASE("measured file with negative cells is clamped, not rejected") {
    const auto g = WavelengthGrid::canonical();
    const FluorescentMaterial m = load_donaldson(test::fixture("noisy_measured.csv"), g);
    CHECK(m.clamped_entries == 3);
    CHECK(m.name == "noisy_measured");
    CHECK(m.provenance == Provenance::measured);
    CHECK(m.p.entries().minCoeff() >= 0.0);
    CHECK(m.p.grid_in() == g);

    const ValidationReport r = validate(m);
    CHECK(r.clamped_entries == 3);
    CHECK(r.anti_stokes_fraction > 0.0);
    CHECK(r.anti_stokes_fraction < 0.1);
    CHECK(r.non_negative);
    const auto j = r.to_json();
    CHECK(j.at("clamped_entries") == 3);
}

TEST_CASE("unit diagonal file reduces to the identity") {
    const auto g = WavelengthGrid::canonical();
    const FluorescentMaterial m = load_donaldson(test::fixture("unit_diagonal.csv"), g);
    CHECK(m.clamped_entries == 0);
    for (const char* name : {"xyz", "xyzu", "seven"}) {
        const BasisSet b = make_basis(name, g);
        const Eigen::MatrixXd r = reduce_ours(m.p, b).matrix();
        CHECK((r - Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("save then load is the identity on entries") {
    const auto g = WavelengthGrid::canonical();
    const auto dir = test::temp_dir("materials");
    for (const auto& m : synthetic_library(g)) {
        save_donaldson(dir / (m.name + ".csv"), m);
        const FluorescentMaterial back = load_donaldson(dir / (m.name + ".csv"), g);
        CHECK(back.p.entries() == m.p.entries());
        CHECK(back.name == m.name);
    }
}

TEST_CASE("synthetic construction") {
    const auto g = WavelengthGrid::canonical();
    const Spectrum albedo = Spectrum::constant(g, 0.4);
    SUBCASE("zero strength is a plain diagonal") {
        const auto m = synth_fluorescent("d", {350, 30, 550, 40, 0.0}, albedo);
        Eigen::MatrixXd off = m.p.entries();
        CHECK(off.diagonal() == albedo.values());
        off.diagonal().setZero();
        CHECK(off.cwiseAbs().maxCoeff() == 0.0);
        // Reduced transport equals component-wise albedo in every basis.
        for (const char* name : {"xyz", "xyzu", "seven"}) {
            const BasisSet b = make_basis(name, g);
            const Eigen::MatrixXd r = reduce_ours(m.p, b).matrix();
            CHECK((r - 0.4 * Eigen::MatrixXd::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    SUBCASE("bump-only material respects the Stokes mask") {
        const auto m = synth_fluorescent("b", {400, 30, 520, 40, 0.01}, Spectrum::zeros(g));
        const auto& p = m.p.entries();
        for (Eigen::Index o = 0; o < p.rows(); ++o) {
            for (Eigen::Index i = o; i < p.cols(); ++i) {
                CHECK(p(o, i) == 0.0);
            }
        }
        CHECK(p.maxCoeff() > 0.0);
        CHECK(validate(m).anti_stokes_fraction == 0.0);
    }
    SUBCASE("invalid parameters") {
        CHECK_THROWS_AS(synth_fluorescent("x", {500, 30, 450, 40, 0.01}, albedo), ValidationError);
        CHECK_THROWS_AS(synth_fluorescent("x", {400, 30, 450, 40, -1.0}, albedo), ValidationError);
        CHECK_THROWS_AS(synth_fluorescent("x", {400, 30, 450, 40, 0.01}, Spectrum::constant(g, -0.1)),
                        ValidationError);
    }
}

TEST_CASE("efficiency parameterisation") {
    // A bump of efficiency e reradiates a fraction e of a delta at absorb_mu
    // up to the emission tail cut off below 420 nm (4 sigma, ~3e-5).
    const auto g = WavelengthGrid::canonical();
    const double e = 0.3;
    const auto m = synth_fluorescent("e", {420, 25, 560, 35, strength_for_efficiency(e, 35)}, Spectrum::zeros(g));
    const Spectrum out = m.p.apply(delta_spectrum(420.0, g));
    CHECK(quadrature_integrate(out) == doctest::Approx(e).epsilon(1e-4));
}

TEST_CASE("UV-absorbing material: a fourth channel captures more luminance") {
    const auto g = WavelengthGrid::canonical();
    const auto m = synth_fluorescent("uv", {350, 30, 550, 40, strength_for_efficiency(0.5, 40)},
                                     Spectrum::constant(g, 0.5));
    const Spectrum light = load_illuminant("Gauss350", g).spectrum;
    const Eigen::Vector3d xyz = render_patch_reduced({m, light}, make_basis("xyz", g), Method::ours);
    const Eigen::Vector3d xyzu = render_patch_reduced({m, light}, make_basis("xyzu", g), Method::ours);
    const Eigen::Vector3d oracle = render_patch_spectral({m, light}, make_basis("xyz", g));
    CHECK(xyzu.y() > xyz.y());
    CHECK(std::abs(xyzu.y() - oracle.y()) < std::abs(xyz.y() - oracle.y()));
}

TEST_CASE("identity and plain materials") {
    const auto g = WavelengthGrid::canonical();
    const ValidationReport r = validate(identity_material(g));
    CHECK(r.anti_stokes_fraction == 0.0);
    CHECK(r.max_row_integral == doctest::Approx(1.0));
    CHECK(find_material("white", g).p.entries().diagonal().maxCoeff() == 0.8);
    CHECK(find_material("grey", g).p.entries().diagonal().minCoeff() == 0.5);
    CHECK(find_material("syn-lime", g).name == "syn-lime");
    CHECK_THROWS_AS(find_material("no-such-material", g), IoError);
}

TEST_CASE("synthetic library") {
    const auto g = WavelengthGrid::canonical();
    const auto lib = synthetic_library(g);
    CHECK(lib.size() >= 12);
    int uv_absorbers = 0;
    for (const auto& m : lib) {
        CAPTURE(m.name);
        CHECK(m.provenance == Provenance::synthetic);
        CHECK(m.p.entries().minCoeff() >= 0.0);
        const ValidationReport r = validate(m);
        CHECK(r.anti_stokes_fraction == 0.0);
        CHECK(r.max_row_integral <= 1.0);  // no energy gain
        // Fluorescent: some off-diagonal mass.
        Eigen::MatrixXd off = m.p.entries();
        off.diagonal().setZero();
        CHECK(off.maxCoeff() > 0.0);
        // Output under a 350 nm delta shows reradiation into the visible.
        if (quadrature_integrate(m.p.apply(delta_spectrum(350.0, g))) > 0.05) {
            ++uv_absorbers;
        }
    }
    CHECK(uv_absorbers >= 3);
}

TEST_CASE("validate does not mutate the material") {
    test::Gen gen(31);
    const auto g = WavelengthGrid::parse("300:800:5");
    const FluorescentMaterial m{"random", gen.donaldson(g)};
    const Eigen::MatrixXd before = m.p.entries();
    (void)validate(m);
    CHECK(m.p.entries() == before);
}

TEST_CASE("manifest loading skips the inconsistent IXCAXORA sample") {
    const auto dir = test::temp_dir("manifest");
    const auto g = WavelengthGrid::canonical();
    std::filesystem::copy_file(test::fixture("noisy_measured.csv"), dir / "a.csv");
    std::filesystem::copy_file(test::fixture("unit_diagonal.csv"), dir / "b.csv");
    text_io::write_file(dir / "manifest.txt", "# measured set\nSAMPLEA a.csv\nIXCAXORA b.csv\nSAMPLEB,b.csv\n");
    const auto entries = read_manifest(dir / "manifest.txt");
    CHECK(entries.size() == 3);
    const auto loaded = load_manifest(dir / "manifest.txt", g);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].name == "SAMPLEA");
    CHECK(loaded[1].name == "SAMPLEB");
    text_io::write_file(dir / "broken.txt", "ONLYNAME\n");
    CHECK_THROWS(read_manifest(dir / "broken.txt"));
    CHECK_THROWS_AS(load_donaldson(dir / "missing.csv", g), IoError);
}
