#include "fluor/materials.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

FluorescentMaterial load_donaldson(const std::filesystem::path& path, const WavelengthGrid& grid,
                                   std::string name) {
    DonaldsonMatrix raw = read_donaldson_csv(path);
    const std::size_t clamped = raw.clamp_negative();
    if (clamped > 0) {
        spdlog::warn("{}: clamped {} negative Donaldson entries to zero", path.string(), clamped);
    }
    if (name.empty()) {
        name = path.stem().string();
    }
    return {std::move(name), resample(raw, grid), Provenance::measured, clamped};
}

void save_donaldson(const std::filesystem::path& path, const FluorescentMaterial& material) {
    write_donaldson_csv(path, material.p);
}

FluorescentMaterial synth_fluorescent(std::string name, const SynthParams& params,
                                      const Spectrum& diag_albedo) {
    if (!(params.emit_mu > params.absorb_mu)) {
        throw ValidationError(fmt::format("{}: emission peak ({} nm) must lie above the absorption "
                                          "peak ({} nm)",
                                          name, params.emit_mu, params.absorb_mu));
    }
    if (!(params.strength >= 0.0)) {
        throw ValidationError(name + ": reradiation strength must be non-negative");
    }
    if (!diag_albedo.is_non_negative()) {
        throw ValidationError(name + ": albedo must be non-negative");
    }
    const auto& grid = diag_albedo.grid();
    const Eigen::VectorXd g_in = gaussian_spectrum(params.absorb_mu, params.absorb_sigma, grid).values();
    const Eigen::VectorXd g_out = gaussian_spectrum(params.emit_mu, params.emit_sigma, grid).values();
    Eigen::MatrixXd p = (params.strength * grid.step()) * g_out * g_in.transpose();
    // Reradiation only towards longer wavelengths; the diagonal holds the albedo.
    for (Eigen::Index i = 0; i < p.cols(); ++i) {
        p.col(i).head(i + 1).setZero();
    }
    p.diagonal() = diag_albedo.values();
    return {std::move(name), DonaldsonMatrix(grid, std::move(p)), Provenance::synthetic, 0};
}

double strength_for_efficiency(double efficiency, double emit_sigma) {
    return efficiency / (std::sqrt(2.0 * std::numbers::pi) * emit_sigma);
}

nlohmann::json ValidationReport::to_json() const {
    return {{"name", name},
            {"anti_stokes_fraction", anti_stokes_fraction},
            {"max_row_integral", max_row_integral},
            {"max_row_integral_at_nm", max_row_integral_at},
            {"clamped_entries", clamped_entries},
            {"non_negative", non_negative}};
}

ValidationReport validate(const FluorescentMaterial& material) {
    ValidationReport report;
    report.name = material.name;
    report.clamped_entries = material.clamped_entries;
    const auto& p = material.p.entries();
    const auto& gin = material.p.grid_in();
    const auto& gout = material.p.grid_out();
    report.non_negative = (p.array() >= 0.0).all();

    double total = 0.0;
    double anti = 0.0;
    for (Eigen::Index i = 0; i < p.cols(); ++i) {
        const double li = gin[static_cast<std::size_t>(i)];
        double column = 0.0;
        for (Eigen::Index o = 0; o < p.rows(); ++o) {
            const double v = p(o, i);
            column += v;
            if (gout[static_cast<std::size_t>(o)] < li) {
                anti += std::abs(v);
            }
            total += std::abs(v);
        }
        if (i == 0 || column > report.max_row_integral) {
            report.max_row_integral = column;
            report.max_row_integral_at = li;
        }
    }
    report.anti_stokes_fraction = total > 0.0 ? anti / total : 0.0;
    return report;
}

FluorescentMaterial identity_material(const WavelengthGrid& grid) {
    return {"identity", DonaldsonMatrix::identity(grid), Provenance::synthetic, 0};
}

Spectrum long_pass_albedo(const WavelengthGrid& grid, double edge, double width, double low,
                          double high) {
    const Eigen::ArrayXd x = (grid.wavelengths().array() - edge) / width;
    return Spectrum(grid, (low + (high - low) / (1.0 + (-x).exp())).matrix());
}

namespace {

struct LibraryEntry {
    const char* name;
    // Albedo: long-pass edge (nm), edge width, low and high reflectance,
    // optional short-wavelength lobe (centre, width, height; height 0 = none).
    double edge, width, low, high;
    double lobe_mu, lobe_sigma, lobe_height;
    SynthParams bump;  // strength holds the peak reradiated fraction
};

// Loosely modelled on the dye families of the Gonzalez-Fairchild set: yellow,
// orange and red daylight-fluorescent paints, magenta/pink, green, and
// optical brighteners absorbing in the UV.
constexpr LibraryEntry kLibrary[] = {
    {"syn-textyell", 505, 14, 0.06, 0.88, 0, 1, 0, {440, 32, 530, 22, 0.55}},
    {"syn-herpioye", 540, 14, 0.05, 0.90, 0, 1, 0, {465, 38, 570, 24, 0.60}},
    {"syn-herpiora", 575, 12, 0.05, 0.90, 0, 1, 0, {495, 42, 600, 22, 0.62}},
    {"syn-herpicer", 605, 12, 0.06, 0.88, 430, 25, 0.35, {540, 38, 625, 22, 0.58}},
    {"syn-herpimag", 600, 15, 0.08, 0.85, 440, 35, 0.55, {545, 35, 615, 25, 0.50}},
    {"syn-polgree", 560, -14, 0.06, 0.75, 0, 1, 0, {445, 35, 515, 22, 0.50}},
    {"syn-ixcrlale", 490, 12, 0.07, 0.86, 0, 1, 0, {420, 30, 505, 20, 0.45}},
    {"syn-cipalw10", 420, 10, 0.10, 0.86, 0, 1, 0, {350, 22, 440, 24, 0.65}},
    {"syn-ciba12", 415, 12, 0.12, 0.82, 0, 1, 0, {365, 25, 455, 28, 0.55}},
    {"syn-php8hp1c", 590, 14, 0.10, 0.86, 420, 30, 0.45, {520, 40, 605, 24, 0.48}},
    {"syn-uvyellow", 520, 14, 0.07, 0.86, 0, 1, 0, {375, 30, 545, 28, 0.55}},
    {"syn-uvorange", 565, 14, 0.06, 0.88, 0, 1, 0, {390, 35, 590, 25, 0.50}},
    {"syn-lime", 515, 12, 0.06, 0.80, 0, 1, 0, {430, 35, 525, 20, 0.40}},
    {"syn-coral", 595, 16, 0.15, 0.85, 0, 1, 0, {480, 45, 610, 28, 0.35}},
};

Spectrum library_albedo(const LibraryEntry& e, const WavelengthGrid& grid) {
    Eigen::VectorXd a;
    if (e.width > 0) {
        a = long_pass_albedo(grid, e.edge, e.width, e.low, e.high).values();
    } else {
        // Band-pass: rise below the edge, fall above it.
        const Spectrum rise = long_pass_albedo(grid, e.edge - 80.0, -e.width, e.low, e.high);
        const Spectrum fall = long_pass_albedo(grid, e.edge, e.width, e.low, e.high);
        a = rise.values().cwiseMin(fall.values());
    }
    if (e.lobe_height > 0) {
        a += e.lobe_height * gaussian_spectrum(e.lobe_mu, e.lobe_sigma, grid).values();
    }
    return Spectrum(grid, a.cwiseMin(0.95));
}

}  // namespace

std::vector<FluorescentMaterial> synthetic_library(const WavelengthGrid& grid) {
    std::vector<FluorescentMaterial> materials;
    materials.reserve(std::size(kLibrary));
    for (const auto& e : kLibrary) {
        SynthParams params = e.bump;
        params.strength = strength_for_efficiency(e.bump.strength, e.bump.emit_sigma);
        materials.push_back(synth_fluorescent(e.name, params, library_albedo(e, grid)));
    }
    return materials;
}

std::vector<std::pair<std::string, std::filesystem::path>> read_manifest(
    const std::filesystem::path& manifest) {
    std::vector<std::pair<std::string, std::filesystem::path>> entries;
    const auto base = manifest.parent_path();
    for (const auto& line : text_io::data_lines(text_io::read_file(manifest))) {
        auto sep = line.find(',');
        if (sep == std::string::npos) {
            sep = line.find_first_of(" \t");
        }
        if (sep == std::string::npos) {
            throw IoError(manifest.string() + ": manifest lines must be 'name path'");
        }
        std::string name(text_io::trim(std::string_view(line).substr(0, sep)));
        std::filesystem::path file(std::string(text_io::trim(std::string_view(line).substr(sep + 1))));
        if (file.is_relative()) {
            file = base / file;
        }
        entries.emplace_back(std::move(name), std::move(file));
    }
    return entries;
}

std::vector<FluorescentMaterial> load_manifest(const std::filesystem::path& manifest,
                                               const WavelengthGrid& grid) {
    std::vector<FluorescentMaterial> materials;
    for (const auto& [name, path] : read_manifest(manifest)) {
        if (name == "IXCAXORA") {
            spdlog::info("skipping IXCAXORA (inconsistent measurement)");
            continue;
        }
        materials.push_back(load_donaldson(path, grid, name));
    }
    if (materials.empty()) {
        throw ValidationError(manifest.string() + ": manifest lists no usable materials");
    }
    return materials;
}

FluorescentMaterial find_material(const std::string& name_or_path, const WavelengthGrid& grid) {
    if (name_or_path == "identity") {
        return identity_material(grid);
    }
    if (name_or_path == "white" || name_or_path == "grey") {
        const double albedo = name_or_path == "white" ? 0.8 : 0.5;
        return {name_or_path, DonaldsonMatrix::diagonal(Spectrum::constant(grid, albedo)),
                Provenance::synthetic, 0};
    }
    for (auto& m : synthetic_library(grid)) {
        if (m.name == name_or_path) {
            return std::move(m);
        }
    }
    if (std::filesystem::exists(name_or_path)) {
        return load_donaldson(name_or_path, grid);
    }
    throw IoError("unknown material '" + name_or_path +
                  "' (expected 'identity', 'white', 'grey', a syn-* library name, or a Donaldson file)");
}

}  // namespace fluor
