#include "fluor/evaluate.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "fluor/error.hpp"
#include "fluor/reduction.hpp"

namespace fluor {

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

bool has_uv_energy(const Spectrum& s) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.grid()[i] < 400.0 && s[i] > 0.0) {
            return true;
        }
    }
    return false;
}

}  // namespace

double EvalReport::mean(const std::string& basis, Method method, const std::string& illuminant) const {
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& e : entries) {
        if (e.basis == basis && e.method == method && e.illuminant == illuminant) {
            sum += e.delta_e;
            ++count;
        }
    }
    if (count == 0) {
        throw ValidationError(fmt::format("no entries for {}/{}/{}", basis, to_string(method), illuminant));
    }
    return sum / static_cast<double>(count);
}

std::vector<std::string> EvalReport::ordering_failures() const {
    std::vector<std::string> failures;
    const bool both = std::count(methods.begin(), methods.end(), Method::ours) > 0 &&
                      std::count(methods.begin(), methods.end(), Method::naive) > 0;
    if (!both) {
        return failures;
    }
    for (const auto& b : bases) {
        for (const auto& il : illuminants) {
            if (!(mean(b, Method::ours, il) < mean(b, Method::naive, il))) {
                failures.push_back(b + "/" + il);
            }
        }
    }
    return failures;
}

std::vector<std::string> EvalReport::uv_failures(const std::vector<Illuminant>& lights,
                                                 double tolerance) const {
    std::vector<std::string> failures;
    const bool has_bases = std::count(bases.begin(), bases.end(), "xyz") > 0 &&
                           std::count(bases.begin(), bases.end(), "xyzu") > 0;
    if (!has_bases || std::count(methods.begin(), methods.end(), Method::ours) == 0) {
        return failures;
    }
    for (const auto& il : lights) {
        if (std::count(illuminants.begin(), illuminants.end(), il.name) == 0 ||
            !has_uv_energy(il.spectrum)) {
            continue;
        }
        if (mean("xyzu", Method::ours, il.name) > mean("xyz", Method::ours, il.name) + tolerance) {
            failures.push_back(il.name);
        }
    }
    return failures;
}

nlohmann::json EvalReport::to_json() const {
    nlohmann::json j;
    j["metadata"] = metadata;
    j["illuminants"] = illuminants;
    j["bases"] = bases;
    std::vector<std::string> method_names;
    for (const auto m : methods) {
        method_names.push_back(to_string(m));
    }
    j["methods"] = method_names;
    auto& rows = j["entries"] = nlohmann::json::array();
    for (const auto& e : entries) {
        rows.push_back({{"material", e.material},
                        {"illuminant", e.illuminant},
                        {"basis", e.basis},
                        {"method", to_string(e.method)},
                        {"oracle_xyz", {e.oracle_xyz.x(), e.oracle_xyz.y(), e.oracle_xyz.z()}},
                        {"xyz", {e.xyz.x(), e.xyz.y(), e.xyz.z()}},
                        {"delta_e", e.delta_e}});
    }
    auto& avg = j["averages"] = nlohmann::json::object();
    for (const auto& b : bases) {
        for (const auto m : methods) {
            auto& row = avg[b][to_string(m)] = nlohmann::json::object();
            for (const auto& il : illuminants) {
                row[il] = mean(b, m, il);
            }
        }
    }
    j["ordering_failures"] = ordering_failures();
    return j;
}

std::string EvalReport::to_table() const {
    std::vector<std::string> labels;
    std::vector<std::vector<std::string>> cells;
    for (const auto& b : bases) {
        for (const auto m : methods) {
            labels.push_back(fmt::format("{} {}", upper(b), m == Method::ours ? "Ours" : "Naive"));
            std::vector<std::string> row;
            for (const auto& il : illuminants) {
                row.push_back(fmt::format("{:.2f}", mean(b, m, il)));
            }
            cells.push_back(std::move(row));
        }
    }
    std::size_t label_w = 0;
    for (const auto& l : labels) {
        label_w = std::max(label_w, l.size());
    }
    std::vector<std::size_t> col_w;
    for (std::size_t c = 0; c < illuminants.size(); ++c) {
        std::size_t w = illuminants[c].size();
        for (const auto& row : cells) {
            w = std::max(w, row[c].size());
        }
        col_w.push_back(w);
    }
    std::string out = fmt::format("{:<{}}", "", label_w);
    for (std::size_t c = 0; c < illuminants.size(); ++c) {
        out += fmt::format("  {:>{}}", illuminants[c], col_w[c]);
    }
    out += '\n';
    for (std::size_t r = 0; r < labels.size(); ++r) {
        out += fmt::format("{:<{}}", labels[r], label_w);
        for (std::size_t c = 0; c < illuminants.size(); ++c) {
            out += fmt::format("  {:>{}}", cells[r][c], col_w[c]);
        }
        out += '\n';
    }
    return out;
}

EvalReport evaluate(const std::vector<FluorescentMaterial>& materials,
                    const std::vector<Illuminant>& illuminants, const std::vector<BasisSet>& bases,
                    const std::vector<Method>& methods, NaiveNorm norm) {
    if (materials.empty()) {
        throw ValidationError("evaluation needs at least one material");
    }
    if (illuminants.empty() || bases.empty() || methods.empty()) {
        throw ValidationError("evaluation needs illuminants, bases and methods");
    }
    const WavelengthGrid& grid = bases.front().grid();
    const BasisSet xyz = load_cmf_xyz(grid);
    EvalReport report;
    for (const auto& il : illuminants) {
        report.illuminants.push_back(il.name);
    }
    for (const auto& b : bases) {
        if (!(b.grid() == grid)) {
            throw ValidationError("all bases must share one wavelength grid");
        }
        report.bases.push_back(b.name());
    }
    report.methods = methods;
    report.metadata = {{"grid", grid.to_string()},
                       {"naive_norm", to_string(norm)},
                       {"materials", materials.size()},
                       {"white", "illuminant XYZ"}};

    for (const auto& material : materials) {
        std::vector<std::vector<ReducedMatrix>> reduced(bases.size());
        for (std::size_t b = 0; b < bases.size(); ++b) {
            for (const auto m : methods) {
                reduced[b].push_back(reduce(material.p, bases[b], m, norm));
            }
        }
        for (const auto& il : illuminants) {
            const Spectrum light = resample(il.spectrum, grid);
            const Eigen::Vector3d white = downsample(light, xyz).c;
            const Eigen::Vector3d oracle = render_patch_spectral({material, light}, xyz);
            for (std::size_t b = 0; b < bases.size(); ++b) {
                for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                    const Eigen::Vector3d c = render_patch_reduced(reduced[b][mi], light, bases[b]);
                    report.entries.push_back({material.name, il.name, bases[b].name(), methods[mi],
                                              oracle, c, delta_e_2000(c, oracle, white)});
                }
            }
        }
    }
    return report;
}

std::vector<ReferenceComparison> compare_with_reference(const EvalReport& report, double tolerance) {
    struct Row {
        const char* basis;
        Method method;
        std::array<double, 7> values;
    };
    static const std::array<Row, 4> kReference{{
        {"xyz", Method::naive, {10.11, 9.73, 12.77, 12.88, 14.92, 10.88, 10.57}},
        {"xyz", Method::ours, {3.92, 5.02, 3.88, 3.96, 1.14, 0.62, 2.48}},
        {"xyzu", Method::naive, {10.56, 11.20, 13.43, 13.40, 15.18, 11.51, 11.22}},
        {"xyzu", Method::ours, {3.86, 3.23, 3.36, 3.33, 1.04, 0.52, 2.43}},
    }};
    const auto& names = standard_illuminant_names();
    std::vector<ReferenceComparison> out;
    for (const auto& row : kReference) {
        if (std::count(report.bases.begin(), report.bases.end(), row.basis) == 0 ||
            std::count(report.methods.begin(), report.methods.end(), row.method) == 0) {
            continue;
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (std::count(report.illuminants.begin(), report.illuminants.end(), names[i]) == 0) {
                continue;
            }
            const double measured = report.mean(row.basis, row.method, names[i]);
            out.push_back({row.basis, row.method, names[i], row.values[i], measured,
                           std::abs(measured - row.values[i]) <= tolerance});
        }
    }
    return out;
}

}  // namespace fluor
