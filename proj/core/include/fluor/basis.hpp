#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fluor/grid.hpp"
#include "fluor/spectrum.hpp"

namespace fluor {

/// K sensitivity functions sampled on a grid together with their dual basis
/// and the transfer matrix taking reduced coefficients to the sensor space.
///
/// Downsampling is `downsampling().transpose() * f`, where the trapezoid
/// weights are already folded into `downsampling()` (= W S). The dual satisfies
/// `downsampling().transpose() * dual() == I_K`, so up/down round trips are
/// exact on coefficient vectors.
class BasisSet {
public:
    BasisSet(std::string name, WavelengthGrid grid, Eigen::MatrixXd sensitivities,
             std::vector<std::string> labels, Eigen::MatrixXd transfer);

    const std::string& name() const { return name_; }
    const WavelengthGrid& grid() const { return grid_; }
    Eigen::Index size() const { return sensitivities_.cols(); }
    const std::vector<std::string>& labels() const { return labels_; }

    /// N x K, raw sensitivity functions.
    const Eigen::MatrixXd& sensitivities() const { return sensitivities_; }
    /// N x K, quadrature-weighted sensitivities.
    const Eigen::MatrixXd& downsampling() const { return weighted_; }
    /// N x K dual functions.
    const Eigen::MatrixXd& dual() const { return dual_; }

    /// Transfer matrix as used for the final projection (3xK for xyz/xyzu, the
    /// 4x7 band-merging matrix for the seven-band set).
    const Eigen::MatrixXd& transfer() const { return transfer_; }
    /// First three rows of transfer(): reduced coefficients to CIE XYZ.
    Eigen::MatrixXd xyz_projection() const { return transfer_.topRows(3); }

    /// Max-abs deviation of (W S)^T S~ from the identity.
    double dual_residual() const;

private:
    std::string name_;
    WavelengthGrid grid_;
    Eigen::MatrixXd sensitivities_;
    Eigen::MatrixXd weighted_;
    Eigen::MatrixXd dual_;
    std::vector<std::string> labels_;
    Eigen::MatrixXd transfer_;
};

/// Dual basis S (S^T S)^-1 through a Cholesky solve of the K x K Gram matrix.
/// Throws ValidationError("degenerate basis") when the Gram condition number
/// exceeds 1e12.
Eigen::MatrixXd compute_dual(const Eigen::MatrixXd& sensitivities);

/// Same under the inner product with quadrature weights: S (S^T W S)^-1.
Eigen::MatrixXd compute_dual(const Eigen::MatrixXd& sensitivities, const Eigen::VectorXd& weights);

struct SmoothstepParams {
    double mu;
    double sigma;
};

/// 3x^2 - 2x^3 with x = ((lambda - mu) / sigma + 1) / 2 clipped to [0, 1].
double smoothstep(double lambda, SmoothstepParams p);

inline constexpr SmoothstepParams kXModeSeparator{500.0, 2.0};
inline constexpr SmoothstepParams kYSplit{570.0, 60.0};
inline constexpr SmoothstepParams kXSplit{590.0, 60.0};

/// Clamped degree-2 knot vector of the 5-element UV partition of unity.
std::vector<double> default_uv_knots();

/// All elements of the degree-2 partition of unity, N x (knots - 3).
Eigen::MatrixXd uv_partition_of_unity(const WavelengthGrid& grid,
                                      const std::vector<double>& knots = default_uv_knots());

/// First partition-of-unity element. Throws unless it is monotonically
/// non-increasing and above 0.5 below 400 nm.
Spectrum build_uv_band(const WavelengthGrid& grid,
                       const std::vector<double>& knots = default_uv_knots());

/// Columns of a `wavelength,c1,c2,...` table resampled to grid (zero outside).
Eigen::MatrixXd read_basis_table(const std::filesystem::path& path, const WavelengthGrid& grid,
                                 Eigen::Index expected_columns);
void write_basis_table(const std::filesystem::path& path, const BasisSet& basis);

struct BasisOptions {
    std::filesystem::path cmf_file;  // empty: bundled CIE 2006 2-degree table
    std::vector<double> uv_knots = default_uv_knots();
};

BasisSet load_cmf_xyz(const WavelengthGrid& grid, const BasisOptions& options = {});
BasisSet build_xyzu(const WavelengthGrid& grid, const BasisOptions& options = {});
BasisSet build_seven_band(const WavelengthGrid& grid, const BasisOptions& options = {});

/// "xyz", "xyzu" or "seven".
BasisSet make_basis(const std::string& name, const WavelengthGrid& grid,
                    const BasisOptions& options = {});

}  // namespace fluor
