#include "fluor/colorimetry.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "fluor/data_paths.hpp"
#include "fluor/error.hpp"

namespace fluor {

namespace {

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double rad(double deg) { return deg * std::numbers::pi / 180.0; }

double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    return t > delta * delta * delta ? std::cbrt(t) : t / (3.0 * delta * delta) + 4.0 / 29.0;
}

double srgb_curve(double v) {
    return v <= 0.0031308 ? 12.92 * v : 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

}  // namespace

const std::vector<std::string>& standard_illuminant_names() {
    static const std::vector<std::string> names{"A", "E", "D60", "D65", "FL1", "FL2", "HP5"};
    return names;
}

Illuminant load_illuminant(const std::string& name_or_path, const WavelengthGrid& grid) {
    if (name_or_path == "Gauss350") {
        return {name_or_path, gaussian_spectrum(350.0, 50.0, grid)};
    }
    if (name_or_path == "Gauss450") {
        return {name_or_path, gaussian_spectrum(450.0, 50.0, grid)};
    }
    const auto& names = standard_illuminant_names();
    if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
        const auto path = illuminant_table_path(name_or_path);
        if (!std::filesystem::exists(path)) {
            throw IoError("missing illuminant table '" + path.string() + "' (set FLUOR_DATA_DIR)");
        }
        return {name_or_path, resample(read_spectrum_csv(path), grid)};
    }
    if (std::filesystem::exists(name_or_path)) {
        const Spectrum s = resample(read_spectrum_csv(name_or_path), grid);
        if (!s.is_non_negative()) {
            throw ValidationError("illuminant '" + name_or_path + "' has negative samples");
        }
        return {std::filesystem::path(name_or_path).stem().string(), s};
    }
    throw IoError("unknown illuminant '" + name_or_path +
                  "' (expected A, E, D60, D65, FL1, FL2, HP5, Gauss350, Gauss450 or a file)");
}

const Eigen::Matrix3d& xyz_to_linear_srgb_matrix() {
    static const Eigen::Matrix3d m = [] {
        Eigen::Matrix3d r;
        r << 3.2404542, -1.5371385, -0.4985314,
            -0.9692660, 1.8760108, 0.0415560,
            0.0556434, -0.2040259, 1.0572252;
        return r;
    }();
    return m;
}

Eigen::Vector3d xyz_to_linear_srgb(const Eigen::Vector3d& xyz) {
    return xyz_to_linear_srgb_matrix() * xyz;
}

Eigen::Vector3d encode_srgb(const Eigen::Vector3d& linear_rgb) {
    Eigen::Vector3d out;
    for (int i = 0; i < 3; ++i) {
        out[i] = srgb_curve(std::clamp(linear_rgb[i], 0.0, 1.0));
    }
    return out;
}

Eigen::Vector3d xyz_to_srgb(const Eigen::Vector3d& xyz) {
    return encode_srgb(xyz_to_linear_srgb(xyz));
}

Eigen::Vector3d xyz_to_lab(const Eigen::Vector3d& xyz, const Eigen::Vector3d& white) {
    const double fx = lab_f(xyz.x() / white.x());
    const double fy = lab_f(xyz.y() / white.y());
    const double fz = lab_f(xyz.z() / white.z());
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

double delta_e_2000_lab(const Eigen::Vector3d& lab1, const Eigen::Vector3d& lab2) {
    const double l1 = lab1[0], a1 = lab1[1], b1 = lab1[2];
    const double l2 = lab2[0], a2 = lab2[1], b2 = lab2[2];

    const double c1 = std::hypot(a1, b1);
    const double c2 = std::hypot(a2, b2);
    const double c_bar7 = std::pow(0.5 * (c1 + c2), 7.0);
    const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + 6103515625.0)));  // 25^7

    const double a1p = (1.0 + g) * a1;
    const double a2p = (1.0 + g) * a2;
    const double c1p = std::hypot(a1p, b1);
    const double c2p = std::hypot(a2p, b2);

    auto hue = [](double b, double ap) {
        if (b == 0.0 && ap == 0.0) {
            return 0.0;
        }
        const double h = deg(std::atan2(b, ap));
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue(b1, a1p);
    const double h2p = hue(b2, a2p);

    const double dlp = l2 - l1;
    const double dcp = c2p - c1p;
    double dhp = 0.0;
    if (c1p * c2p != 0.0) {
        dhp = h2p - h1p;
        if (dhp > 180.0) {
            dhp -= 360.0;
        } else if (dhp < -180.0) {
            dhp += 360.0;
        }
    }
    const double d_hue = 2.0 * std::sqrt(c1p * c2p) * std::sin(rad(dhp) / 2.0);

    const double lp_bar = 0.5 * (l1 + l2);
    const double cp_bar = 0.5 * (c1p + c2p);
    double hp_bar = h1p + h2p;
    if (c1p * c2p != 0.0) {
        if (std::abs(h1p - h2p) <= 180.0) {
            hp_bar *= 0.5;
        } else if (h1p + h2p < 360.0) {
            hp_bar = 0.5 * (hp_bar + 360.0);
        } else {
            hp_bar = 0.5 * (hp_bar - 360.0);
        }
    }

    const double t = 1.0 - 0.17 * std::cos(rad(hp_bar - 30.0)) + 0.24 * std::cos(rad(2.0 * hp_bar)) +
                     0.32 * std::cos(rad(3.0 * hp_bar + 6.0)) - 0.20 * std::cos(rad(4.0 * hp_bar - 63.0));
    const double d_theta = 30.0 * std::exp(-std::pow((hp_bar - 275.0) / 25.0, 2.0));
    const double cp_bar7 = std::pow(cp_bar, 7.0);
    const double rc = 2.0 * std::sqrt(cp_bar7 / (cp_bar7 + 6103515625.0));
    const double lm50 = (lp_bar - 50.0) * (lp_bar - 50.0);
    const double sl = 1.0 + 0.015 * lm50 / std::sqrt(20.0 + lm50);
    const double sc = 1.0 + 0.045 * cp_bar;
    const double sh = 1.0 + 0.015 * cp_bar * t;
    const double rt = -std::sin(rad(2.0 * d_theta)) * rc;

    const double tl = dlp / sl;
    const double tc = dcp / sc;
    const double th = d_hue / sh;
    return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

double delta_e_2000(const Eigen::Vector3d& xyz1, const Eigen::Vector3d& xyz2,
                    const Eigen::Vector3d& white) {
    if (!(white.y() > 0.0) || !(white.x() > 0.0) || !(white.z() > 0.0)) {
        throw ValidationError("white point must have positive tristimulus values");
    }
    return delta_e_2000_lab(xyz_to_lab(xyz1, white), xyz_to_lab(xyz2, white));
}

}  // namespace fluor
