#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "fluor/grid.hpp"

namespace fluor {

/// A function of wavelength sampled on a WavelengthGrid.
class Spectrum {
public:
    Spectrum(WavelengthGrid grid, Eigen::VectorXd values);

    static Spectrum zeros(const WavelengthGrid& grid);
    static Spectrum constant(const WavelengthGrid& grid, double value);

    const WavelengthGrid& grid() const { return grid_; }
    const Eigen::VectorXd& values() const { return values_; }
    std::size_t size() const { return grid_.size(); }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }

    /// Value at an arbitrary wavelength (linear interpolation, zero outside).
    double at(double lambda) const;

    bool is_non_negative() const;

private:
    WavelengthGrid grid_;
    Eigen::VectorXd values_;
};

/// Linear interpolation inside the source support, zero outside. Resampling
/// onto the source grid itself returns an identical copy.
Spectrum resample(const Spectrum& spectrum, const WavelengthGrid& target);

/// exp(-(l - mu)^2 / (2 sigma^2)); peak 1 at mu.
Spectrum gaussian_spectrum(double mu, double sigma, const WavelengthGrid& grid);

/// Discrete delta at an on-grid wavelength; integrates to exactly one under
/// quadrature_integrate (value 1/w_i, i.e. 1/step away from the grid ends).
Spectrum delta_spectrum(double lambda0, const WavelengthGrid& grid);

/// Trapezoid rule on the spectrum's grid.
double quadrature_integrate(const Spectrum& spectrum);

/// Two-column `wavelength_nm,value` text. A header line is optional.
Spectrum read_spectrum_csv(const std::filesystem::path& path);
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum);

}  // namespace fluor
