#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "commands.hpp"
#include "fluor/error.hpp"

namespace {

constexpr int kValidationFailure = 2;
constexpr int kIoFailure = 3;

}  // namespace

int main(int argc, char** argv) {
    using fluor::cli::RunConfig;
    CLI::App app{"fluor: reduced fluorescent transport in tristimulus and multi-band bases"};
    app.require_subcommand(1);
    RunConfig config;
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Debug logging");

    auto common = [&config](CLI::App* sub) {
        sub->add_option("--grid", config.grid, "Wavelength grid min:max:step")->capture_default_str();
        sub->add_option("--naive-norm", config.naive_norm, "CMF normalisation of the naive method")
            ->check(CLI::IsMember({"l1", "l2"}))
            ->capture_default_str();
        sub->add_option("--seed", config.seed, "Seed for pixel jitter")->capture_default_str();
        sub->add_option("--out", config.out, "Output directory")->capture_default_str();
        sub->add_option("--uv-knots", config.uv_knots, "Knot vector of the UV band (degree 2)")
            ->delimiter(',');
        sub->add_option("--cmf", config.cmf, "CMF table (wavelength,x,y,z) replacing the bundled one");
    };
    auto basis_list = [&config](CLI::App* sub, bool many) {
        auto* opt = sub->add_option("--basis", config.bases, "xyz, xyzu or seven")
                        ->check(CLI::IsMember({"xyz", "xyzu", "seven"}))
                        ->delimiter(',');
        if (!many) {
            opt->expected(1);
        }
    };
    auto method_list = [&config](CLI::App* sub, bool many) {
        auto* opt = sub->add_option("--method", config.methods, "ours or naive")
                        ->check(CLI::IsMember({"ours", "naive"}))
                        ->delimiter(',');
        if (!many) {
            opt->expected(1);
        }
    };

    auto* reduce = app.add_subcommand("reduce", "Reduce a Donaldson matrix; write matrix and dB image");
    common(reduce);
    basis_list(reduce, false);
    method_list(reduce, false);
    reduce->add_option("--material", config.materials, "identity, white, grey, syn-* or a file")->required();
    reduce->add_flag("--rgb", config.rgb, "Also write the XYZ matrix conjugated to linear sRGB");

    auto* patch = app.add_subcommand("patch", "One-bounce patch grid: methods x illuminants");
    common(patch);
    basis_list(patch, false);
    method_list(patch, true);
    patch->add_option("--material", config.materials, "Materials (default: identity and the synthetic set)");
    patch->add_option("--illuminant", config.illuminants, "Illuminants (default: A E D60 D65 FL1 FL2 HP5)");

    auto* swipe = app.add_subcommand("swipe", "Patch colours under a delta illuminant swept in wavelength");
    common(swipe);
    basis_list(swipe, false);
    method_list(swipe, true);
    swipe->add_option("--material", config.materials, "Materials")->required();
    swipe->add_option("--range", config.swipe_range, "min:max:step in nm")->capture_default_str();

    auto* render = app.add_subcommand("render", "Render the probe scene");
    common(render);
    basis_list(render, false);
    method_list(render, false);
    render->add_option("--scene", config.scene, "Scene file (default: built-in crease box)");
    render->add_option("--spp", config.spp, "Samples per pixel (overrides the scene)");
    render->add_option("--width", config.width, "Image width (overrides the scene)");
    render->add_option("--height", config.height, "Image height (overrides the scene)");
    render->add_option("--threads", config.threads, "Worker threads (0: all cores)");
    render->add_flag("--panels", config.panels, "Also write ours-XYZ / ours-XYZU / naive-XYZ / reference panels");

    auto* eval = app.add_subcommand("eval", "Delta E 2000 of each method against the spectral reference");
    common(eval);
    basis_list(eval, true);
    method_list(eval, true);
    eval->add_option("--material", config.materials, "Materials (default: identity and the synthetic set)");
    eval->add_option("--illuminant", config.illuminants, "Illuminants (default: A E D60 D65 FL1 FL2 HP5)");
    eval->add_option("--manifest", config.manifest, "Measured database manifest (name path per line)");

    auto* validate = app.add_subcommand("validate", "Anti-Stokes, energy gain and clamp report");
    common(validate);
    validate->add_option("--material", config.materials, "Materials (default: the synthetic set)");
    validate->add_option("--manifest", config.manifest, "Measured database manifest");
    validate->add_option("--max-anti-stokes", config.max_anti_stokes,
                         "Fail (exit 2) if a material's anti-Stokes fraction exceeds this");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kValidationFailure;
    }
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        if (reduce->parsed()) {
            config.command = "reduce";
            config.methods.resize(std::min<std::size_t>(config.methods.size(), 1));
            return fluor::cli::cmd_reduce(config);
        }
        if (patch->parsed()) {
            config.command = "patch";
            return fluor::cli::cmd_patch(config);
        }
        if (swipe->parsed()) {
            config.command = "swipe";
            return fluor::cli::cmd_swipe(config);
        }
        if (render->parsed()) {
            config.command = "render";
            config.methods.resize(std::min<std::size_t>(config.methods.size(), 1));
            return fluor::cli::cmd_render(config);
        }
        if (eval->parsed()) {
            config.command = "eval";
            if (!eval->count("--basis")) {
                config.bases = {"xyz", "xyzu"};
            }
            return fluor::cli::cmd_eval(config);
        }
        config.command = "validate";
        return fluor::cli::cmd_validate(config);
    } catch (const fluor::IoError& e) {
        spdlog::error("{}", e.what());
        return kIoFailure;
    } catch (const fluor::ValidationError& e) {
        spdlog::error("{}", e.what());
        return kValidationFailure;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
}
