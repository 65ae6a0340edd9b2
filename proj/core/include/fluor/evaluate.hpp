#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "fluor/basis.hpp"
#include "fluor/colorimetry.hpp"
#include "fluor/materials.hpp"
#include "fluor/transport.hpp"

namespace fluor {

struct EvalEntry {
    std::string material;
    std::string illuminant;
    std::string basis;
    Method method = Method::ours;
    Eigen::Vector3d oracle_xyz;
    Eigen::Vector3d xyz;
    double delta_e = 0.0;
};

struct EvalReport {
    std::vector<EvalEntry> entries;
    std::vector<std::string> illuminants;
    std::vector<std::string> bases;
    std::vector<Method> methods;
    nlohmann::json metadata;

    /// Mean delta E over the materials of one (basis, method, illuminant) cell.
    double mean(const std::string& basis, Method method, const std::string& illuminant) const;

    /// Columns where mean(ours) >= mean(naive), as "basis/illuminant".
    std::vector<std::string> ordering_failures() const;

    /// Illuminants with energy below 400 nm where mean ours-XYZU exceeds mean
    /// ours-XYZ by more than `tolerance`. Needs both bases in the report.
    std::vector<std::string> uv_failures(const std::vector<Illuminant>& illuminants,
                                         double tolerance) const;

    nlohmann::json to_json() const;
    /// Aligned columns: one row per basis and method, one column per illuminant.
    std::string to_table() const;
};

/// Patch colour of every material under every illuminant, reduced in every
/// basis with every method, against the dense reference. Lab white is the
/// illuminant's own XYZ.
EvalReport evaluate(const std::vector<FluorescentMaterial>& materials,
                    const std::vector<Illuminant>& illuminants,
                    const std::vector<BasisSet>& bases, const std::vector<Method>& methods,
                    NaiveNorm norm = NaiveNorm::l2);

struct ReferenceComparison {
    std::string basis;
    Method method;
    std::string illuminant;
    double expected = 0.0;
    double measured = 0.0;
    bool within_tolerance = false;
};

/// Published per-illuminant averages over the measured database (XYZ and XYZU,
/// ours and naive) compared with a report computed on that database.
std::vector<ReferenceComparison> compare_with_reference(const EvalReport& report,
                                                        double tolerance = 0.5);

}  // namespace fluor
