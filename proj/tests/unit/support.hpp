#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Core>

#include "fluor/donaldson.hpp"
#include "fluor/grid.hpp"

namespace fluor::test {

inline std::filesystem::path fixture(const std::string& name) {
    return std::filesystem::path(FLUOR_TEST_FIXTURES) / name;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("fluor_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Deterministic generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    Eigen::VectorXd vector(Eigen::Index n, double lo = -1.0, double hi = 1.0) {
        Eigen::VectorXd v(n);
        for (auto& x : v) {
            x = uniform(lo, hi);
        }
        return v;
    }

    /// Smooth positive spectrum: a few random Gaussian bumps on a floor.
    Eigen::VectorXd spectrum(const WavelengthGrid& grid) {
        Eigen::VectorXd v = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), uniform(0.0, 0.2));
        const int bumps = integer(1, 4);
        for (int b = 0; b < bumps; ++b) {
            const double mu = uniform(320.0, 780.0);
            const double sigma = uniform(10.0, 80.0);
            const double h = uniform(0.1, 2.0);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double t = (grid[i] - mu) / sigma;
                v[static_cast<Eigen::Index>(i)] += h * std::exp(-0.5 * t * t);
            }
        }
        return v;
    }

    /// Non-negative Donaldson matrix with a diagonal albedo, Stokes-side
    /// reradiation and a little anti-Stokes noise.
    DonaldsonMatrix donaldson(const WavelengthGrid& grid) {
        const auto n = static_cast<Eigen::Index>(grid.size());
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        const double a_mu = uniform(320.0, 550.0), a_s = uniform(15.0, 60.0);
        const double e_mu = a_mu + uniform(30.0, 200.0), e_s = uniform(15.0, 60.0);
        const double strength = uniform(0.0, 0.01);
        for (Eigen::Index o = 0; o < n; ++o) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const double li = grid[static_cast<std::size_t>(i)];
                const double lo = grid[static_cast<std::size_t>(o)];
                const double bump = strength * std::exp(-0.5 * std::pow((li - a_mu) / a_s, 2)) *
                                    std::exp(-0.5 * std::pow((lo - e_mu) / e_s, 2));
                p(o, i) = lo > li ? bump : 1e-4 * bump * uniform(0.0, 1.0);
            }
            p(o, o) = uniform(0.05, 0.95);
        }
        return DonaldsonMatrix(grid, p);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

}  // namespace fluor::test
