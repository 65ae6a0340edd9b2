#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fluor/basis.hpp"
#include "fluor/donaldson.hpp"
#include "fluor/spectrum.hpp"

namespace fluor {

/// Reduced radiance or throughput coefficients in a named basis.
struct ColorVector {
    Eigen::VectorXd c;
    std::string basis;
};

/// K_out x K_in matrix acting on reduced radiance vectors.
class ReducedMatrix {
public:
    ReducedMatrix(Eigen::MatrixXd matrix, std::string basis_in, std::string basis_out);

    const Eigen::MatrixXd& matrix() const { return matrix_; }
    Eigen::Index k_in() const { return matrix_.cols(); }
    Eigen::Index k_out() const { return matrix_.rows(); }
    const std::string& basis_in() const { return basis_in_; }
    const std::string& basis_out() const { return basis_out_; }

    /// Space tag of the output side: XYZ, XYZU, SEVEN or RGB.
    std::string space() const;

    ColorVector apply(const ColorVector& incident) const;

private:
    Eigen::MatrixXd matrix_;
    std::string basis_in_;
    std::string basis_out_;
};

/// c_k = integral of f * s_k.
ColorVector downsample(const Spectrum& f, const BasisSet& basis);

/// Linear combination of the dual functions.
Spectrum upsample(const ColorVector& c, const BasisSet& basis);

/// S^T P S~ with the quadrature weights carried by S^T.
ReducedMatrix reduce_ours(const DonaldsonMatrix& p, const BasisSet& basis);

enum class NaiveNorm { l1, l2 };

NaiveNorm parse_naive_norm(const std::string& text);
std::string to_string(NaiveNorm norm);

/// Normalised-CMF reduction S_bar^T P S_bar, s_bar_k = s_k / ||s_k||.
ReducedMatrix reduce_naive(const DonaldsonMatrix& p, const BasisSet& basis,
                           NaiveNorm norm = NaiveNorm::l2);

/// M R M^-1 for a 3x3 reduced matrix, e.g. XYZ to linear RGB.
ReducedMatrix conjugate_reduced(const ReducedMatrix& r, const Eigen::Matrix3d& m,
                                const std::string& target_basis = "rgb");

/// T x R7: 4 x 7 connection matrix used when a seven-band path reaches the light.
ReducedMatrix reduce_7_to_4(const ReducedMatrix& r7, const Eigen::MatrixXd& transfer);

/// First line `space=K_in,K_out,basis_in,basis_out`, then optional `#`
/// metadata lines, then K_out rows of K_in comma-separated values written in
/// shortest round-trip form.
void write_reduced_matrix(const std::filesystem::path& path, const ReducedMatrix& r,
                          const std::vector<std::string>& metadata = {});
ReducedMatrix read_reduced_matrix(const std::filesystem::path& path);

}  // namespace fluor
