#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "fluor/basis.hpp"
#include "fluor/image.hpp"
#include "fluor/materials.hpp"
#include "fluor/reduction.hpp"
#include "fluor/spectrum.hpp"
#include "fluor/transport.hpp"

namespace fluor {

/// Parallelogram origin + a*u + b*v, a, b in [0, 1]. The front side faces
/// along u x v. Material "emitter" marks an emissive quad.
struct Quad {
    Eigen::Vector3d origin;
    Eigen::Vector3d u;
    Eigen::Vector3d v;
    std::string material;
    int subdivisions = 4;

    Eigen::Vector3d normal() const { return u.cross(v).normalized(); }
    bool is_emitter() const { return material == "emitter"; }
};

struct Camera {
    Eigen::Vector3d eye{0.5, 0.5, 2.2};
    Eigen::Vector3d target{0.5, 0.5, 0.0};
    double fov_degrees = 40.0;  // vertical
    int width = 64;
    int height = 64;
};

/// Lambertian quads lit by emissive quads and optionally a uniform sky.
/// Interreflections use no visibility tests, so scenes should be convex
/// (e.g. the inside of a box) and quads must not straddle each other's planes.
struct ProbeScene {
    std::vector<Quad> quads;
    std::string emitter = "D65";  // illuminant name or spectrum file
    std::string sky;              // empty: black background
    Camera camera;
    int bounces = 3;
    int samples_per_pixel = 1;
};

/// Line-based format:
///   emitter <illuminant>
///   sky <illuminant>
///   quad ox oy oz ux uy uz vx vy vz <material> [subdivisions]
///   camera ex ey ez tx ty tz fov [width height]
///   bounces <n>
///   spp <n>
ProbeScene parse_scene(const std::string& text, const std::string& source = "scene");
ProbeScene read_scene(const std::filesystem::path& path);
std::string scene_to_text(const ProbeScene& scene);

/// Unit box open towards the camera with an emissive ceiling, two fluorescent
/// quads meeting in a crease (floor and back wall) and white side walls.
ProbeScene default_probe_scene(const std::string& floor = "syn-herpioye",
                               const std::string& back = "syn-uvyellow");

/// A single floor quad under a uniform sky: the probe-scene analogue of a patch.
ProbeScene patch_probe_scene(const std::string& material, const std::string& sky);

/// Spectra and materials referenced by a scene, resolved on one grid.
struct SceneAssets {
    Spectrum emitter;
    std::optional<Spectrum> sky;
    std::map<std::string, FluorescentMaterial> materials;
};
SceneAssets load_scene_assets(const ProbeScene& scene, const WavelengthGrid& grid);

struct RenderOptions {
    Method method = Method::ours;
    NaiveNorm norm = NaiveNorm::l2;
    std::uint64_t seed = 0;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Forward transport: reduced radiance leaves the emitters, is multiplied by
/// each element's reduced matrix per bounce and finally gathered through the
/// pixel's surface. Image channels are the basis coefficients.
Image light_trace(const ProbeScene& scene, const SceneAssets& assets, const BasisSet& basis,
                  const RenderOptions& options = {});

/// Camera-first transport over the same path set: throughput matrices start
/// as the identity at the sensor, are multiplied by reduced matrices at each
/// vertex and applied to the light's coefficients at every light connection.
Image adjoint_trace(const ProbeScene& scene, const SceneAssets& assets, const BasisSet& basis,
                    const RenderOptions& options = {});

/// Classic renderer with component-wise albedo per material name (default 1).
Image lambertian_trace(const ProbeScene& scene, const SceneAssets& assets, const BasisSet& basis,
                       const std::map<std::string, Eigen::VectorXd>& albedo = {},
                       const RenderOptions& options = {});

/// Dense spectral reference with full Donaldson matrices; returns XYZ.
Image render_probe_spectral(const ProbeScene& scene, const SceneAssets& assets,
                            const BasisSet& xyz, const RenderOptions& options = {});

/// Per-pixel material label ("emitter", "sky", "background" or the material
/// name) at pixel centres, for region statistics.
std::vector<std::string> pixel_regions(const ProbeScene& scene);

}  // namespace fluor
