#include "fluor/spectrum.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

Spectrum::Spectrum(WavelengthGrid grid, Eigen::VectorXd values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
        throw ValidationError(fmt::format("spectrum has {} samples but its grid has {}",
                                          values_.size(), grid_.size()));
    }
    if (!values_.allFinite()) {
        throw ValidationError("spectrum contains non-finite samples");
    }
}

Spectrum Spectrum::zeros(const WavelengthGrid& grid) {
    return Spectrum(grid, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(grid.size())));
}

Spectrum Spectrum::constant(const WavelengthGrid& grid, double value) {
    return Spectrum(grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), value));
}

double Spectrum::at(double lambda) const {
    const double pos = (lambda - grid_.lambda_min()) / grid_.step();
    const auto last = static_cast<double>(grid_.size() - 1);
    if (pos < 0.0 || pos > last) {
        return 0.0;
    }
    const auto i = static_cast<Eigen::Index>(std::floor(pos));
    if (static_cast<double>(i) == last) {
        return values_[i];
    }
    const double t = pos - static_cast<double>(i);
    return t == 0.0 ? values_[i] : (1.0 - t) * values_[i] + t * values_[i + 1];
}

bool Spectrum::is_non_negative() const { return (values_.array() >= 0.0).all(); }

Spectrum resample(const Spectrum& spectrum, const WavelengthGrid& target) {
    const auto& source = spectrum.grid();
    if (source == target) {
        return spectrum;
    }
    if (target.lambda_max() < source.lambda_min() || target.lambda_min() > source.lambda_max()) {
        throw ValidationError("disjoint grids");
    }
    Eigen::VectorXd values(static_cast<Eigen::Index>(target.size()));
    for (std::size_t i = 0; i < target.size(); ++i) {
        values[static_cast<Eigen::Index>(i)] = spectrum.at(target[i]);
    }
    return Spectrum(target, std::move(values));
}

Spectrum gaussian_spectrum(double mu, double sigma, const WavelengthGrid& grid) {
    if (!(sigma > 0.0)) {
        throw ValidationError("gaussian sigma must be positive");
    }
    const Eigen::ArrayXd d = (grid.wavelengths().array() - mu) / sigma;
    return Spectrum(grid, (-0.5 * d.square()).exp().matrix());
}

Spectrum delta_spectrum(double lambda0, const WavelengthGrid& grid) {
    const auto idx = grid.index_of(lambda0);
    if (idx == WavelengthGrid::npos) {
        throw ValidationError(fmt::format("delta wavelength {} nm is not on grid {}", lambda0,
                                          grid.to_string()));
    }
    Spectrum result = Spectrum::zeros(grid);
    Eigen::VectorXd values = result.values();
    values[static_cast<Eigen::Index>(idx)] = 1.0 / grid.weights()[static_cast<Eigen::Index>(idx)];
    return Spectrum(grid, std::move(values));
}

double quadrature_integrate(const Spectrum& spectrum) {
    return spectrum.grid().weights().dot(spectrum.values());
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
    const auto lines = text_io::data_lines(text_io::read_file(path));
    std::vector<double> wavelengths;
    std::vector<double> values;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto fields = text_io::split(lines[n], ',');
        const auto wl = fields.empty() ? std::nullopt : text_io::parse_double(fields[0]);
        if (!wl && n == 0 && wavelengths.empty()) {
            continue;  // header
        }
        if (fields.size() < 2 || !wl) {
            throw IoError(fmt::format("{}: malformed line {}", path.string(), n + 1));
        }
        const auto v = text_io::parse_double(fields[1]);
        if (!v) {
            throw IoError(fmt::format("{}: malformed value on line {}", path.string(), n + 1));
        }
        if (!wavelengths.empty() && !(*wl > wavelengths.back())) {
            throw IoError(path.string() + ": wavelengths must be strictly increasing");
        }
        wavelengths.push_back(*wl);
        values.push_back(*v);
    }
    if (wavelengths.size() < 2) {
        throw IoError(path.string() + ": need at least two samples");
    }
    const double step = wavelengths[1] - wavelengths[0];
    for (std::size_t i = 2; i < wavelengths.size(); ++i) {
        if (std::abs(wavelengths[i] - wavelengths[i - 1] - step) > 1e-6 * step) {
            throw IoError(path.string() + ": wavelengths must be uniformly spaced");
        }
    }
    WavelengthGrid grid(wavelengths.front(), step, wavelengths.size());
    return Spectrum(grid, Eigen::Map<const Eigen::VectorXd>(values.data(),
                                                           static_cast<Eigen::Index>(values.size())));
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum) {
    std::ostringstream out;
    out << "wavelength_nm,value\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        out << text_io::format_double(spectrum.grid()[i]) << ','
            << text_io::format_double(spectrum[i]) << '\n';
    }
    text_io::write_file(path, out.str());
}

}  // namespace fluor
