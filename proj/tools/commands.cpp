#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fluor/basis.hpp"
#include "fluor/colorimetry.hpp"
#include "fluor/error.hpp"
#include "fluor/evaluate.hpp"
#include "fluor/image.hpp"
#include "fluor/materials.hpp"
#include "fluor/reduction.hpp"
#include "fluor/scene.hpp"
#include "fluor/text_io.hpp"
#include "fluor/transport.hpp"

namespace fs = std::filesystem;

namespace fluor::cli {

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j{{"command", command},     {"grid", grid},         {"basis", bases},
                     {"method", methods},      {"naive_norm", naive_norm}, {"seed", seed},
                     {"material", materials},  {"illuminant", illuminants}};
    if (!uv_knots.empty()) {
        j["uv_knots"] = uv_knots;
    }
    if (!cmf.empty()) {
        j["cmf"] = cmf;
    }
    if (command == "render") {
        j["scene"] = scene.empty() ? "builtin" : scene;
        j["spp"] = spp;
        j["width"] = width;
        j["height"] = height;
        j["panels"] = panels;
    }
    if (command == "swipe") {
        j["range"] = swipe_range;
    }
    if (command == "reduce") {
        j["rgb"] = rgb;
    }
    if (!manifest.empty()) {
        j["manifest"] = manifest;
    }
    if (max_anti_stokes >= 0.0) {
        j["max_anti_stokes"] = max_anti_stokes;
    }
    return j;
}

namespace {

constexpr int kValidationFailure = 2;
constexpr int kCell = 32;

struct Context {
    WavelengthGrid grid;
    BasisOptions options;
    NaiveNorm norm;
    std::string config_text;  // compact JSON embedded into artifacts
};

Context make_context(const RunConfig& config) {
    Context ctx{WavelengthGrid::parse(config.grid), {}, parse_naive_norm(config.naive_norm),
                config.to_json().dump()};
    ctx.options.cmf_file = config.cmf;
    if (!config.uv_knots.empty()) {
        ctx.options.uv_knots = config.uv_knots;
    }
    return ctx;
}

std::vector<std::string> metadata_lines(const Context& ctx) { return {"config " + ctx.config_text}; }

std::vector<std::pair<std::string, std::string>> png_text(const Context& ctx) {
    return {{"fluor-config", ctx.config_text}};
}

void write_json(const fs::path& path, nlohmann::json j, const Context& ctx) {
    j["config"] = nlohmann::json::parse(ctx.config_text);
    text_io::write_file(path, j.dump(2) + "\n");
    spdlog::info("wrote {}", path.string());
}

std::vector<FluorescentMaterial> materials_or_default(const RunConfig& config, const WavelengthGrid& grid,
                                                      bool with_identity) {
    std::vector<FluorescentMaterial> out;
    if (config.materials.empty()) {
        if (with_identity) {
            out.push_back(identity_material(grid));
        }
        for (auto& m : synthetic_library(grid)) {
            out.push_back(std::move(m));
        }
        return out;
    }
    for (const auto& name : config.materials) {
        out.push_back(find_material(name, grid));
    }
    return out;
}

std::vector<Illuminant> illuminants_or_default(const RunConfig& config, const WavelengthGrid& grid) {
    const auto& names = config.illuminants.empty() ? standard_illuminant_names() : config.illuminants;
    std::vector<Illuminant> out;
    for (const auto& n : names) {
        out.push_back(load_illuminant(n, grid));
    }
    return out;
}

std::vector<Method> methods_of(const RunConfig& config) {
    std::vector<Method> out;
    for (const auto& m : config.methods) {
        out.push_back(parse_method(m));
    }
    return out;
}

std::string safe_name(std::string s) {
    for (char& c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
            c = '_';
        }
    }
    return s;
}

nlohmann::json xyz_json(const Eigen::Vector3d& c) { return {c.x(), c.y(), c.z()}; }

// Blocks of `cell` x `cell` pixels, one per entry of `colors` (rows x cols), in XYZ.
void write_grid_png(const fs::path& path, const std::vector<std::vector<Eigen::Vector3d>>& colors,
                    const std::vector<double>& white_y_per_col, int cell_w, int cell_h,
                    const Context& ctx) {
    const int rows = static_cast<int>(colors.size());
    const int cols = rows > 0 ? static_cast<int>(colors.front().size()) : 0;
    Image img(std::max(1, cols * cell_w), std::max(1, rows * cell_h), 3);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const int r = y / cell_h;
            const int c = x / cell_w;
            const double wy = white_y_per_col[static_cast<std::size_t>(c)];
            img.set_pixel(x, y, colors[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] / wy);
        }
    }
    write_png(path, img.width(), img.height(), xyz_image_to_srgb8(img, 1.0), png_text(ctx));
    spdlog::info("wrote {}", path.string());
}

}  // namespace

int cmd_reduce(const RunConfig& config) {
    const Context ctx = make_context(config);
    const BasisSet basis = make_basis(config.bases.front(), ctx.grid, ctx.options);
    const Method method = parse_method(config.methods.front());
    const fs::path out = config.out;
    for (const auto& name : config.materials) {
        const FluorescentMaterial m = find_material(name, ctx.grid);
        const ReducedMatrix r = reduce(m.p, basis, method, ctx.norm);
        const std::string stem = fmt::format("{}_{}_{}", safe_name(m.name), basis.name(), to_string(method));
        auto meta = metadata_lines(ctx);
        meta.push_back("material " + m.name);
        write_reduced_matrix(out / (stem + ".txt"), r, meta);
        spdlog::info("wrote {}", (out / (stem + ".txt")).string());
        int w = 0, h = 0;
        const auto pixels = matrix_db_image(r.matrix(), kCell, -30.0, w, h);
        write_png(out / (stem + "_db.png"), w, h, pixels, png_text(ctx));
        spdlog::info("wrote {}", (out / (stem + "_db.png")).string());
        if (config.rgb) {
            if (basis.size() != 3) {
                throw ValidationError("--rgb needs the xyz basis");
            }
            const ReducedMatrix rgb = conjugate_reduced(r, xyz_to_linear_srgb_matrix());
            write_reduced_matrix(out / (stem + "_rgb.txt"), rgb, meta);
            spdlog::info("wrote {}", (out / (stem + "_rgb.txt")).string());
        }
    }
    return 0;
}

int cmd_patch(const RunConfig& config) {
    const Context ctx = make_context(config);
    const BasisSet basis = make_basis(config.bases.front(), ctx.grid, ctx.options);
    const BasisSet xyz = load_cmf_xyz(ctx.grid, ctx.options);
    const auto materials = materials_or_default(config, ctx.grid, true);
    const auto lights = illuminants_or_default(config, ctx.grid);
    const auto methods = methods_of(config);
    std::vector<double> white_y;
    std::vector<Eigen::Vector3d> whites;
    for (const auto& il : lights) {
        whites.push_back(downsample(il.spectrum, xyz).c);
        white_y.push_back(std::max(whites.back().y(), 1e-300));
    }
    nlohmann::json report;
    report["layout"] = "rows: reference then methods; columns: illuminants";
    report["illuminants"] = nlohmann::json::array();
    for (const auto& il : lights) {
        report["illuminants"].push_back(il.name);
    }
    for (const auto& m : materials) {
        std::vector<std::vector<Eigen::Vector3d>> grid(1 + methods.size());
        nlohmann::json jm;
        for (std::size_t i = 0; i < lights.size(); ++i) {
            const Eigen::Vector3d ref = render_patch_spectral({m, lights[i].spectrum}, xyz);
            grid[0].push_back(ref);
            jm[lights[i].name]["reference"] = xyz_json(ref);
            for (std::size_t k = 0; k < methods.size(); ++k) {
                const Eigen::Vector3d c = render_patch_reduced({m, lights[i].spectrum}, basis, methods[k], ctx.norm);
                grid[k + 1].push_back(c);
                jm[lights[i].name][to_string(methods[k])] = {{"xyz", xyz_json(c)},
                                                             {"delta_e", delta_e_2000(c, ref, whites[i])}};
            }
        }
        report["materials"][m.name] = jm;
        write_grid_png(fs::path(config.out) / fmt::format("patch_{}_{}.png", safe_name(m.name), basis.name()),
                       grid, white_y, kCell, kCell, ctx);
    }
    write_json(fs::path(config.out) / fmt::format("patch_{}.json", basis.name()), report, ctx);
    return 0;
}

int cmd_swipe(const RunConfig& config) {
    const Context ctx = make_context(config);
    const BasisSet basis = make_basis(config.bases.front(), ctx.grid, ctx.options);
    const BasisSet xyz = load_cmf_xyz(ctx.grid, ctx.options);
    const WavelengthGrid range = WavelengthGrid::parse(config.swipe_range);
    const auto lambdas = swipe_wavelengths(range.lambda_min(), range.lambda_max(), range.step());
    const auto methods = methods_of(config);
    nlohmann::json report;
    report["layout"] = "rows: reference then methods; columns: wavelengths";
    report["wavelengths"] = lambdas;
    for (const auto& name : config.materials) {
        const FluorescentMaterial m = find_material(name, ctx.grid);
        std::vector<std::vector<Eigen::Vector3d>> rows;
        rows.push_back(monochromatic_swipe_spectral(m, xyz, lambdas));
        double peak = 1e-300;
        for (const auto& c : rows.front()) {
            peak = std::max(peak, c.y());
        }
        nlohmann::json jm;
        jm["reference"] = nlohmann::json::array();
        for (const auto& c : rows.front()) {
            jm["reference"].push_back(xyz_json(c));
        }
        // Delta E against the reference, using an equal-energy white at the strip peak.
        const Eigen::Vector3d white = Eigen::Vector3d::Constant(peak);
        for (const auto method : methods) {
            rows.push_back(monochromatic_swipe_reduced(m, basis, method, lambdas, ctx.norm));
            auto& jr = jm[to_string(method)];
            for (std::size_t i = 0; i < lambdas.size(); ++i) {
                jr["xyz"].push_back(xyz_json(rows.back()[i]));
                jr["delta_e"].push_back(delta_e_2000(rows.back()[i], rows.front()[i], white));
            }
        }
        report["materials"][m.name] = jm;
        write_grid_png(fs::path(config.out) / fmt::format("swipe_{}_{}.png", safe_name(m.name), basis.name()),
                       rows, std::vector<double>(lambdas.size(), peak), 4, kCell, ctx);
    }
    write_json(fs::path(config.out) / fmt::format("swipe_{}.json", basis.name()), report, ctx);
    return 0;
}

namespace {

struct RegionStats {
    std::size_t pixels = 0;
    double sum = 0.0;
    double max = 0.0;
};

nlohmann::json region_report(const ProbeScene& scene, const Image& xyz, const Image& reference,
                             const Eigen::Vector3d& white) {
    const auto labels = pixel_regions(scene);
    std::map<std::string, RegionStats> stats;
    RegionStats all;
    for (int y = 0; y < xyz.height(); ++y) {
        for (int x = 0; x < xyz.width(); ++x) {
            const double de = delta_e_2000(xyz.pixel(x, y), reference.pixel(x, y), white);
            auto& s = stats[labels[static_cast<std::size_t>(y * xyz.width() + x)]];
            for (RegionStats* r : {&s, &all}) {
                ++r->pixels;
                r->sum += de;
                r->max = std::max(r->max, de);
            }
        }
    }
    nlohmann::json j;
    auto put = [](const RegionStats& s) {
        return nlohmann::json{{"pixels", s.pixels},
                              {"mean_delta_e", s.pixels ? s.sum / static_cast<double>(s.pixels) : 0.0},
                              {"max_delta_e", s.max}};
    };
    for (const auto& [name, s] : stats) {
        j["regions"][name] = put(s);
    }
    j["all"] = put(all);
    return j;
}

}  // namespace

int cmd_render(const RunConfig& config) {
    const Context ctx = make_context(config);
    ProbeScene scene = config.scene.empty() ? default_probe_scene() : read_scene(config.scene);
    if (config.spp > 0) {
        scene.samples_per_pixel = config.spp;
    }
    if (config.width > 0) {
        scene.camera.width = config.width;
    }
    if (config.height > 0) {
        scene.camera.height = config.height;
    }
    const SceneAssets assets = load_scene_assets(scene, ctx.grid);
    const BasisSet xyz = load_cmf_xyz(ctx.grid, ctx.options);
    const BasisSet basis = make_basis(config.bases.front(), ctx.grid, ctx.options);
    RenderOptions options;
    options.method = parse_method(config.methods.front());
    options.norm = ctx.norm;
    options.seed = config.seed;
    options.threads = config.threads;

    const fs::path out = config.out;
    const Eigen::Vector3d white = downsample(assets.emitter, xyz).c;
    if (!(white.y() > 0.0)) {
        throw ValidationError("the emitter has no luminance");
    }
    auto meta = metadata_lines(ctx);
    meta.push_back("scene " + nlohmann::json(scene_to_text(scene)).dump());

    const Image reference = render_probe_spectral(scene, assets, xyz, options);
    auto save = [&](const std::string& stem, const Image& img_xyz, std::vector<std::string> extra) {
        auto m = meta;
        m.insert(m.end(), extra.begin(), extra.end());
        write_raster(out / (stem + ".raster"), img_xyz, m);
        write_png(out / (stem + ".png"), img_xyz.width(), img_xyz.height(),
                  xyz_image_to_srgb8(img_xyz, white.y()), png_text(ctx));
        spdlog::info("wrote {}.png / .raster", (out / stem).string());
    };
    save("reference", reference, {"channels XYZ"});

    const Image coeffs = adjoint_trace(scene, assets, basis, options);
    const Image rendered = coeffs.transformed(basis.xyz_projection());
    const std::string stem = fmt::format("render_{}_{}", to_string(options.method), basis.name());
    write_raster(out / (stem + "_coefficients.raster"), coeffs, meta);
    save(stem, rendered, {"channels XYZ"});

    nlohmann::json report;
    report["white_xyz"] = xyz_json(white);
    report[stem] = region_report(scene, rendered, reference, white);

    if (config.panels) {
        struct Panel {
            std::string label;
            std::string basis;
            Method method;
        };
        const std::vector<Panel> panels{{"a", "xyz", Method::ours}, {"b", "xyzu", Method::ours},
                                        {"c", "xyz", Method::naive}};
        std::vector<Image> images;
        for (const auto& p : panels) {
            const BasisSet b = make_basis(p.basis, ctx.grid, ctx.options);
            RenderOptions o = options;
            o.method = p.method;
            images.push_back(adjoint_trace(scene, assets, b, o).transformed(b.xyz_projection()));
            report[fmt::format("panel_{}_{}_{}", p.label, to_string(p.method), p.basis)] =
                region_report(scene, images.back(), reference, white);
        }
        images.push_back(reference);
        const int w = scene.camera.width;
        Image strip(w * static_cast<int>(images.size()), scene.camera.height, 3);
        for (std::size_t i = 0; i < images.size(); ++i) {
            for (int y = 0; y < strip.height(); ++y) {
                for (int x = 0; x < w; ++x) {
                    strip.set_pixel(static_cast<int>(i) * w + x, y, images[i].pixel(x, y));
                }
            }
        }
        save("panels_a_b_c_r", strip, {"panels a=ours-xyz b=ours-xyzu c=naive-xyz r=reference"});
    }
    write_json(out / "render_report.json", report, ctx);
    return 0;
}

int cmd_eval(const RunConfig& config) {
    const Context ctx = make_context(config);
    const auto lights = illuminants_or_default(config, ctx.grid);
    std::vector<BasisSet> bases;
    for (const auto& b : config.bases) {
        bases.push_back(make_basis(b, ctx.grid, ctx.options));
    }
    const auto methods = methods_of(config);
    const fs::path out = config.out;
    int status = 0;

    const EvalReport report = evaluate(materials_or_default(config, ctx.grid, true), lights, bases,
                                       methods, ctx.norm);
    nlohmann::json j = report.to_json();
    const auto order = report.ordering_failures();
    // Tolerance of the UV check matches the +-0.5 used for measured-table reproduction.
    const auto uv = report.uv_failures(lights, 0.5);
    j["uv_failures"] = uv;
    for (const auto& f : order) {
        spdlog::error("ordering violated: ours is not better than naive for {}", f);
    }
    for (const auto& f : uv) {
        spdlog::error("xyzu worse than xyz for ours under {}", f);
    }
    if (!order.empty() || !uv.empty()) {
        status = kValidationFailure;
    }
    std::string table = report.to_table();

    if (!config.manifest.empty()) {
        const auto measured = load_manifest(config.manifest, ctx.grid);
        const EvalReport mreport = evaluate(measured, lights, bases, methods, ctx.norm);
        nlohmann::json jm = mreport.to_json();
        auto& cmp = jm["reference_comparison"] = nlohmann::json::array();
        for (const auto& c : compare_with_reference(mreport)) {
            cmp.push_back({{"basis", c.basis},
                           {"method", to_string(c.method)},
                           {"illuminant", c.illuminant},
                           {"expected", c.expected},
                           {"measured", c.measured},
                           {"within_tolerance", c.within_tolerance}});
            if (!c.within_tolerance) {
                spdlog::warn("measured set: {} {} {} = {:.2f}, published {:.2f}", c.basis,
                             to_string(c.method), c.illuminant, c.measured, c.expected);
            }
        }
        j["measured"] = jm;
        table += "\nmeasured database\n" + mreport.to_table();
    } else {
        j["measured"] = "skipped: no --manifest given";
    }
    write_json(out / "eval_report.json", j, ctx);
    text_io::write_file(out / "eval_table.txt", "# config " + ctx.config_text + "\n" + table);
    std::cout << table;
    return status;
}

int cmd_validate(const RunConfig& config) {
    const Context ctx = make_context(config);
    auto materials = materials_or_default(config, ctx.grid, false);
    if (!config.manifest.empty()) {
        for (auto& m : load_manifest(config.manifest, ctx.grid)) {
            materials.push_back(std::move(m));
        }
    }
    nlohmann::json j;
    j["materials"] = nlohmann::json::array();
    int status = 0;
    for (const auto& m : materials) {
        const ValidationReport r = validate(m);
        j["materials"].push_back(r.to_json());
        std::cout << fmt::format("{:<16} anti-stokes {:.3e}  max row integral {:.4f} at {} nm  clamped {}\n",
                                 r.name, r.anti_stokes_fraction, r.max_row_integral,
                                 r.max_row_integral_at, r.clamped_entries);
        if (config.max_anti_stokes >= 0.0 && r.anti_stokes_fraction > config.max_anti_stokes) {
            spdlog::error("{}: anti-Stokes fraction {:.3e} exceeds {}", r.name, r.anti_stokes_fraction,
                          config.max_anti_stokes);
            status = kValidationFailure;
        }
    }
    write_json(fs::path(config.out) / "validate_report.json", j, ctx);
    return status;
}

}  // namespace fluor::cli
