#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fluor/donaldson.hpp"
#include "fluor/grid.hpp"
#include "fluor/spectrum.hpp"

namespace fluor {

enum class Provenance { measured, synthetic };

struct FluorescentMaterial {
    std::string name;
    DonaldsonMatrix p;
    Provenance provenance = Provenance::synthetic;
    /// Negative entries set to zero at ingestion.
    std::size_t clamped_entries = 0;
};

/// Reads the Donaldson text format, clamps negative cells (counted and
/// logged), then resamples both axes onto `grid`.
FluorescentMaterial load_donaldson(const std::filesystem::path& path,
                                   const WavelengthGrid& grid = WavelengthGrid::canonical(),
                                   std::string name = {});
void save_donaldson(const std::filesystem::path& path, const FluorescentMaterial& material);

struct SynthParams {
    double absorb_mu;
    double absorb_sigma;
    double emit_mu;
    double emit_sigma;
    /// Reradiation density per nm of incident wavelength at the two peaks.
    double strength;
};

/// diag(albedo) plus a rank-one Gaussian reradiation bump restricted to
/// lambda_out > lambda_in. Requires emit_mu > absorb_mu and strength >= 0.
FluorescentMaterial synth_fluorescent(std::string name, const SynthParams& params,
                                      const Spectrum& diag_albedo);

/// strength giving a peak reradiated fraction `efficiency` at absorb_mu.
double strength_for_efficiency(double efficiency, double emit_sigma);

struct ValidationReport {
    std::string name;
    /// Share of total matrix mass with lambda_out < lambda_in.
    double anti_stokes_fraction = 0.0;
    /// Largest total output over lambda_out for a single incident wavelength.
    double max_row_integral = 0.0;
    double max_row_integral_at = 0.0;
    std::size_t clamped_entries = 0;
    bool non_negative = true;

    nlohmann::json to_json() const;
};

ValidationReport validate(const FluorescentMaterial& material);

FluorescentMaterial identity_material(const WavelengthGrid& grid);

/// Smooth step-like reflectance from `low` to `high` around `edge` nm.
Spectrum long_pass_albedo(const WavelengthGrid& grid, double edge, double width, double low,
                          double high);

/// Synthetic stand-ins for a measured fluorescent database: dyes and pigments
/// with Stokes-shifted Gaussian reradiation, including UV-absorbing brighteners.
std::vector<FluorescentMaterial> synthetic_library(const WavelengthGrid& grid);

/// Lines `name path` (or `name,path`); relative paths resolve against the
/// manifest's directory.
std::vector<std::pair<std::string, std::filesystem::path>> read_manifest(
    const std::filesystem::path& manifest);

/// Loads every manifest entry except materials known to be inconsistent
/// (IXCAXORA).
std::vector<FluorescentMaterial> load_manifest(const std::filesystem::path& manifest,
                                               const WavelengthGrid& grid);

/// "identity", "white" (0.8), "grey" (0.5), a synthetic library name, or a path to a Donaldson file.
FluorescentMaterial find_material(const std::string& name_or_path, const WavelengthGrid& grid);

}  // namespace fluor
