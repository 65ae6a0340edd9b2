#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fluor/basis.hpp"
#include "fluor/grid.hpp"
#include "fluor/spectrum.hpp"

namespace fluor {

struct Illuminant {
    std::string name;
    Spectrum spectrum;
};

/// Table columns used for evaluation: A, E, D60, D65, FL1, FL2, HP5.
const std::vector<std::string>& standard_illuminant_names();

/// One of the standard names, Gauss350 / Gauss450 (sigma 50 nm), or a path to
/// a two-column spectrum file. Tables are zero-extended to the grid.
Illuminant load_illuminant(const std::string& name_or_path, const WavelengthGrid& grid);

/// IEC 61966-2-1 XYZ (D65, Y = 1 white) to linear sRGB.
const Eigen::Matrix3d& xyz_to_linear_srgb_matrix();

/// Linear sRGB, unclamped.
Eigen::Vector3d xyz_to_linear_srgb(const Eigen::Vector3d& xyz);

/// Display encoding: clamp to [0, 1] then apply the sRGB transfer curve.
Eigen::Vector3d encode_srgb(const Eigen::Vector3d& linear_rgb);

/// Linear matrix followed by display encoding.
Eigen::Vector3d xyz_to_srgb(const Eigen::Vector3d& xyz);

/// CIE 1976 L*a*b* relative to `white`.
Eigen::Vector3d xyz_to_lab(const Eigen::Vector3d& xyz, const Eigen::Vector3d& white);

/// CIEDE2000 with kL = kC = kH = 1.
double delta_e_2000_lab(const Eigen::Vector3d& lab1, const Eigen::Vector3d& lab2);

/// CIEDE2000 between two XYZ colours; throws unless white has Y > 0.
double delta_e_2000(const Eigen::Vector3d& xyz1, const Eigen::Vector3d& xyz2,
                    const Eigen::Vector3d& white);

}  // namespace fluor
