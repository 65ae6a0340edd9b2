#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "fluor/basis.hpp"
#include "fluor/materials.hpp"
#include "fluor/reduction.hpp"
#include "fluor/spectrum.hpp"

namespace fluor {

enum class Method { ours, naive };

Method parse_method(const std::string& text);
std::string to_string(Method method);

/// A single Lambertian patch under uniform hemispherical illumination of unit
/// irradiance, so one bounce is c_out = R c_in and the dense counterpart is
/// L_out = P E.
struct PatchScene {
    const FluorescentMaterial& material;
    const Spectrum& illuminant;
};

/// Dense bispectral reference: XYZ of P E.
Eigen::Vector3d render_patch_spectral(const PatchScene& scene, const BasisSet& xyz);

/// XYZ of T (R down[E]) for the chosen reduction.
Eigen::Vector3d render_patch_reduced(const PatchScene& scene, const BasisSet& basis, Method method,
                                     NaiveNorm norm = NaiveNorm::l2);

/// Same with a precomputed reduced matrix in `basis`.
Eigen::Vector3d render_patch_reduced(const ReducedMatrix& r, const Spectrum& illuminant,
                                     const BasisSet& basis);

/// Wavelengths lambda_min, lambda_min + step, ..., lambda_max.
std::vector<double> swipe_wavelengths(double lambda_min, double lambda_max, double step);

/// One-bounce patch colours under a delta illuminant swept across `lambdas`.
std::vector<Eigen::Vector3d> monochromatic_swipe_spectral(const FluorescentMaterial& material,
                                                          const BasisSet& xyz,
                                                          const std::vector<double>& lambdas);

std::vector<Eigen::Vector3d> monochromatic_swipe_reduced(const FluorescentMaterial& material,
                                                         const BasisSet& basis, Method method,
                                                         const std::vector<double>& lambdas,
                                                         NaiveNorm norm = NaiveNorm::l2);

ReducedMatrix reduce(const DonaldsonMatrix& p, const BasisSet& basis, Method method,
                     NaiveNorm norm = NaiveNorm::l2);

}  // namespace fluor
