#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fluor/bspline.hpp"
#include "fluor/donaldson.hpp"
#include "fluor/error.hpp"
#include "fluor/grid.hpp"
#include "fluor/spectrum.hpp"
#include "fluor/text_io.hpp"
#include "support.hpp"

using namespace fluor;

TEST_CASE("canonical grid") {
    const auto g = WavelengthGrid::canonical();
    CHECK(g.size() == 501);
    CHECK(g.lambda_min() == 300.0);
    CHECK(g.lambda_max() == 800.0);
    CHECK(g.step() == 1.0);
    CHECK(WavelengthGrid::parse("300:800:1") == g);
    CHECK(g.index_of(555.0) == 255);
    CHECK(g.index_of(555.5) == WavelengthGrid::npos);
    CHECK(g.index_of(801.0) == WavelengthGrid::npos);
}

TEST_CASE("trapezoid weights integrate constants and lines exactly") {
    for (const char* spec : {"300:800:1", "380:780:5", "300:800:0.5", "400:700:10"}) {
        const auto g = WavelengthGrid::parse(spec);
        const Eigen::VectorXd w = g.weights();
        CHECK(w.sum() == doctest::Approx(g.lambda_max() - g.lambda_min()).epsilon(1e-14));
        CHECK(w[0] == doctest::Approx(g.step() / 2));
        const double line = w.dot(g.wavelengths());
        const double exact = (g.lambda_max() * g.lambda_max() - g.lambda_min() * g.lambda_min()) / 2;
        CHECK(line == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("grid parse rejects malformed input") {
    CHECK_THROWS_AS(WavelengthGrid::parse("300:800"), ValidationError);
    CHECK_THROWS_AS(WavelengthGrid::parse("800:300:1"), ValidationError);
    CHECK_THROWS_AS(WavelengthGrid::parse("300:800:0"), ValidationError);
    CHECK_THROWS_AS(WavelengthGrid::parse("300:800:3"), ValidationError);
    CHECK_THROWS_AS(WavelengthGrid::parse("a:b:c"), ValidationError);
    CHECK_THROWS_AS(WavelengthGrid(300.0, 1.0, 1), ValidationError);
}

TEST_CASE("resample onto the same grid is an identical copy") {
    test::Gen gen(1);
    const auto g = WavelengthGrid::canonical();
    const Spectrum s(g, gen.spectrum(g));
    const Spectrum r = resample(s, g);
    CHECK(r.values() == s.values());
}

TEST_CASE("resample interpolates linearly and zero-extends") {
    const WavelengthGrid src(400.0, 10.0, 31);  // 400..700
    Eigen::VectorXd v(31);
    for (int i = 0; i < 31; ++i) {
        v[i] = std::sin(0.3 * i) + 2.0;
    }
    const Spectrum s(src, v);
    const auto dst = WavelengthGrid::parse("300:800:1");
    const Spectrum r = resample(s, dst);
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const double l = dst[i];
        double expected = 0.0;
        if (l >= 400.0 && l <= 700.0) {
            const double t = (l - 400.0) / 10.0;
            const auto k = std::min(static_cast<int>(t), 29);
            const double f = t - k;
            expected = (1 - f) * v[k] + f * v[k + 1];
        }
        CHECK(r[i] == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("resample between disjoint grids fails") {
    const Spectrum s = Spectrum::constant(WavelengthGrid::parse("300:400:1"), 1.0);
    CHECK_THROWS_AS(resample(s, WavelengthGrid::parse("500:800:1")), ValidationError);
}

TEST_CASE("Gaussian quadrature matches the truncated analytic integral") {
    const auto g = WavelengthGrid::canonical();
    for (const double mu : {450.0, 550.0, 350.0}) {
        for (const double sigma : {10.0, 30.0, 50.0}) {
            const double q = quadrature_integrate(gaussian_spectrum(mu, sigma, g));
            const double a = (300.0 - mu) / (sigma * std::numbers::sqrt2);
            const double b = (800.0 - mu) / (sigma * std::numbers::sqrt2);
            const double exact = sigma * std::sqrt(std::numbers::pi / 2.0) * (std::erf(b) - std::erf(a));
            // Leading Euler-Maclaurin term of the trapezoid rule (h = 1).
            auto slope = [&](double l) {
                return -(l - mu) / (sigma * sigma) * std::exp(-0.5 * std::pow((l - mu) / sigma, 2));
            };
            const double trapezoid = exact + (slope(800.0) - slope(300.0)) / 12.0;
            CHECK(q == doctest::Approx(trapezoid).epsilon(1e-7));
        }
    }
    // Well inside the grid the truncation is negligible.
    const double full = quadrature_integrate(gaussian_spectrum(550.0, 30.0, g));
    CHECK(full == doctest::Approx(30.0 * std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("delta spectrum integrates to one at every grid wavelength") {
    for (const char* spec : {"300:800:1", "380:780:5"}) {
        const auto g = WavelengthGrid::parse(spec);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const Spectrum d = delta_spectrum(g[i], g);
            CHECK(quadrature_integrate(d) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK((d.values().array() != 0.0).count() == 1);
        }
    }
    CHECK_THROWS_AS(delta_spectrum(550.5, WavelengthGrid::canonical()), ValidationError);
}

TEST_CASE("spectrum values must be finite and sized to the grid") {
    const auto g = WavelengthGrid::parse("400:410:1");
    CHECK_THROWS_AS(Spectrum(g, Eigen::VectorXd::Zero(3)), ValidationError);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(11);
    v[2] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Spectrum(g, v), ValidationError);
}

TEST_CASE("spectrum csv round trip is exact") {
    test::Gen gen(2);
    const auto g = WavelengthGrid::parse("300:800:0.5");
    const Spectrum s(g, gen.spectrum(g));
    const auto path = test::temp_dir("spectrum") / "s.csv";
    write_spectrum_csv(path, s);
    const Spectrum r = read_spectrum_csv(path);
    CHECK(r.grid() == g);
    CHECK(r.values() == s.values());
}

TEST_CASE("spectrum csv rejects non-monotone wavelengths") {
    const auto path = test::temp_dir("spectrum_bad") / "bad.csv";
    text_io::write_file(path, "wavelength_nm,value\n400,1\n410,2\n405,3\n");
    CHECK_THROWS_AS(read_spectrum_csv(path), IoError);
    CHECK_THROWS_AS(read_spectrum_csv(path.parent_path() / "missing.csv"), IoError);
}

TEST_CASE("format_double round-trips") {
    test::Gen gen(3);
    for (int i = 0; i < 2000; ++i) {
        const double x = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.integer(-300, 300));
        CHECK(text_io::parse_double(text_io::format_double(x)).value() == x);
    }
    CHECK_FALSE(text_io::parse_double("1.5x").has_value());
    CHECK_FALSE(text_io::parse_double("").has_value());
}

TEST_CASE("Donaldson identity and diagonal act as plain reflectance") {
    test::Gen gen(4);
    const auto g = WavelengthGrid::canonical();
    const Spectrum e(g, gen.spectrum(g));
    CHECK(DonaldsonMatrix::identity(g).apply(e).values() == e.values());
    const Spectrum half = Spectrum::constant(g, 0.5);
    CHECK(DonaldsonMatrix::diagonal(half).apply(e).values() == 0.5 * e.values());
}

TEST_CASE("Donaldson csv round trip is bit-identical") {
    test::Gen gen(5);
    const auto g = WavelengthGrid::parse("300:800:5");
    const DonaldsonMatrix p = gen.donaldson(g);
    const auto path = test::temp_dir("donaldson") / "p.csv";
    write_donaldson_csv(path, p);
    const DonaldsonMatrix r = read_donaldson_csv(path);
    CHECK(r.grid_in() == g);
    CHECK(r.grid_out() == g);
    CHECK(r.entries() == p.entries());
}

TEST_CASE("Donaldson reader rejects malformed files") {
    const auto dir = test::temp_dir("donaldson_bad");
    text_io::write_file(dir / "order.csv", "x,400,420,410\n400,1,0,0\n410,0,1,0\n420,0,0,1\n");
    CHECK_THROWS_AS(read_donaldson_csv(dir / "order.csv"), IoError);
    text_io::write_file(dir / "cells.csv", "x,400,410\n400,1,0\n410,0\n");
    CHECK_THROWS_AS(read_donaldson_csv(dir / "cells.csv"), IoError);
    text_io::write_file(dir / "value.csv", "x,400,410\n400,1,zz\n410,0,1\n");
    CHECK_THROWS_AS(read_donaldson_csv(dir / "value.csv"), IoError);
}

TEST_CASE("resampling keeps a unit diagonal an identity") {
    const auto coarse = WavelengthGrid::parse("300:800:10");
    const DonaldsonMatrix p = resample(DonaldsonMatrix::identity(coarse), WavelengthGrid::canonical());
    const auto n = static_cast<Eigen::Index>(WavelengthGrid::canonical().size());
    CHECK((p.entries() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("resampling preserves reradiated energy of smooth off-diagonal mass") {
    // A smooth Stokes bump carries the same total output on a finer grid.
    const auto coarse = WavelengthGrid::parse("300:800:5");
    const auto fine = WavelengthGrid::canonical();
    test::Gen gen(6);
    const DonaldsonMatrix p = gen.donaldson(coarse);
    const DonaldsonMatrix q = resample(p, fine);
    const Spectrum e_c = gaussian_spectrum(450.0, 40.0, coarse);
    const Spectrum e_f = gaussian_spectrum(450.0, 40.0, fine);
    Eigen::MatrixXd off_c = p.entries();
    off_c.diagonal().setZero();
    Eigen::MatrixXd off_f = q.entries();
    off_f.diagonal().setZero();
    const double out_c = coarse.weights().dot(off_c * e_c.values());
    const double out_f = fine.weights().dot(off_f * e_f.values());
    CHECK(out_f == doctest::Approx(out_c).epsilon(2e-2));
}

TEST_CASE("B-spline basis is a non-negative partition of unity") {
    test::Gen gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int degree = gen.integer(1, 3);
        std::vector<double> knots(static_cast<std::size_t>(degree + 1), 300.0);
        const int interior = gen.integer(0, 4);
        std::vector<double> inner;
        for (int i = 0; i < interior; ++i) {
            inner.push_back(gen.uniform(310.0, 790.0));
        }
        std::sort(inner.begin(), inner.end());
        knots.insert(knots.end(), inner.begin(), inner.end());
        knots.insert(knots.end(), static_cast<std::size_t>(degree + 1), 800.0);
        for (int k = 0; k < 40; ++k) {
            const double t = k == 0 ? 800.0 : gen.uniform(300.0, 800.0);
            const auto b = bspline_basis_at(t, knots, degree);
            CHECK(b.size() == knots.size() - static_cast<std::size_t>(degree) - 1);
            double sum = 0.0;
            for (const double x : b) {
                CHECK(x >= 0.0);
                sum += x;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("clamped quadratic first function has the closed form") {
    const std::vector<double> knots{300, 300, 300, 650, 725, 800, 800, 800};
    for (const double t : {300.0, 350.0, 400.0, 500.0, 649.0}) {
        const double expected = std::pow((650.0 - t) / 350.0, 2);
        CHECK(bspline_basis_at(t, knots, 2)[0] == doctest::Approx(expected).epsilon(1e-14));
    }
    CHECK(bspline_basis_at(700.0, knots, 2)[0] == 0.0);
}
