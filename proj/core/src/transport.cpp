#include "fluor/transport.hpp"

#include <cmath>

#include "fluor/error.hpp"

namespace fluor {

Method parse_method(const std::string& text) {
    if (text == "ours") {
        return Method::ours;
    }
    if (text == "naive") {
        return Method::naive;
    }
    throw ValidationError("unknown method '" + text + "' (expected ours or naive)");
}

std::string to_string(Method method) { return method == Method::ours ? "ours" : "naive"; }

ReducedMatrix reduce(const DonaldsonMatrix& p, const BasisSet& basis, Method method,
                     NaiveNorm norm) {
    return method == Method::ours ? reduce_ours(p, basis) : reduce_naive(p, basis, norm);
}

Eigen::Vector3d render_patch_spectral(const PatchScene& scene, const BasisSet& xyz) {
    if (xyz.size() != 3) {
        throw ValidationError("the spectral reference projects with a 3-function XYZ basis");
    }
    const Spectrum incident = resample(scene.illuminant, scene.material.p.grid_in());
    const Spectrum out = scene.material.p.apply(incident);
    return downsample(out, xyz).c;
}

Eigen::Vector3d render_patch_reduced(const ReducedMatrix& r, const Spectrum& illuminant,
                                     const BasisSet& basis) {
    const ColorVector c_in = downsample(illuminant, basis);
    return basis.xyz_projection() * r.apply(c_in).c;
}

Eigen::Vector3d render_patch_reduced(const PatchScene& scene, const BasisSet& basis, Method method,
                                     NaiveNorm norm) {
    return render_patch_reduced(reduce(scene.material.p, basis, method, norm), scene.illuminant,
                                basis);
}

std::vector<double> swipe_wavelengths(double lambda_min, double lambda_max, double step) {
    if (!(step > 0.0) || lambda_max < lambda_min) {
        throw ValidationError("invalid swipe range");
    }
    std::vector<double> lambdas;
    const auto n = static_cast<std::size_t>(std::floor((lambda_max - lambda_min) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
        lambdas.push_back(lambda_min + step * static_cast<double>(i));
    }
    return lambdas;
}

std::vector<Eigen::Vector3d> monochromatic_swipe_spectral(const FluorescentMaterial& material,
                                                          const BasisSet& xyz,
                                                          const std::vector<double>& lambdas) {
    std::vector<Eigen::Vector3d> strip;
    strip.reserve(lambdas.size());
    for (const double l : lambdas) {
        const Spectrum delta = delta_spectrum(l, material.p.grid_in());
        strip.push_back(render_patch_spectral({material, delta}, xyz));
    }
    return strip;
}

std::vector<Eigen::Vector3d> monochromatic_swipe_reduced(const FluorescentMaterial& material,
                                                         const BasisSet& basis, Method method,
                                                         const std::vector<double>& lambdas,
                                                         NaiveNorm norm) {
    const ReducedMatrix r = reduce(material.p, basis, method, norm);
    std::vector<Eigen::Vector3d> strip;
    strip.reserve(lambdas.size());
    for (const double l : lambdas) {
        strip.push_back(render_patch_reduced(r, delta_spectrum(l, basis.grid()), basis));
    }
    return strip;
}

}  // namespace fluor
