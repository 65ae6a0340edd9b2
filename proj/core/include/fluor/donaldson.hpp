#pragma once

#include <cstddef>
#include <filesystem>

#include <Eigen/Core>

#include "fluor/grid.hpp"
#include "fluor/spectrum.hpp"

namespace fluor {

/// Reradiation (Donaldson) matrix, stored N_out x N_in: row o is the outgoing
/// wavelength, column i the incident one. Entries are per-bin transfer
/// factors, so one bounce is the plain product L_out = P * L_in and the
/// non-fluorescent reflectance sits on the diagonal unscaled.
class DonaldsonMatrix {
public:
    DonaldsonMatrix(WavelengthGrid grid_in, WavelengthGrid grid_out, Eigen::MatrixXd entries);

    /// Square matrix on one grid.
    DonaldsonMatrix(const WavelengthGrid& grid, Eigen::MatrixXd entries);

    /// Discrete identity: a perfect white non-fluorescent reflector.
    static DonaldsonMatrix identity(const WavelengthGrid& grid);

    /// Non-fluorescent material with the given reflectance on the diagonal.
    static DonaldsonMatrix diagonal(const Spectrum& albedo);

    const WavelengthGrid& grid_in() const { return grid_in_; }
    const WavelengthGrid& grid_out() const { return grid_out_; }
    const Eigen::MatrixXd& entries() const { return entries_; }

    bool is_square_on(const WavelengthGrid& grid) const {
        return grid_in_ == grid && grid_out_ == grid;
    }

    /// Dense one-bounce transfer of an incident spectrum.
    Spectrum apply(const Spectrum& incident) const;

    /// Sets negative entries to zero and returns how many were clamped.
    std::size_t clamp_negative();

private:
    WavelengthGrid grid_in_;
    WavelengthGrid grid_out_;
    Eigen::MatrixXd entries_;
};

/// Resamples both axes. The diagonal is treated as a reflectance and
/// interpolated as such; off-diagonal entries are interpreted as a density
/// per nanometre of incident wavelength and rescaled to the target step.
DonaldsonMatrix resample(const DonaldsonMatrix& matrix, const WavelengthGrid& target);

/// Text layout: the first row holds the incident wavelength axis (after an
/// unused corner cell), the first column the outgoing axis, the body P.
DonaldsonMatrix read_donaldson_csv(const std::filesystem::path& path);
void write_donaldson_csv(const std::filesystem::path& path, const DonaldsonMatrix& matrix);

}  // namespace fluor
