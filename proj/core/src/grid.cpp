#include "fluor/grid.hpp"

#include <cmath>

#include <fmt/format.h>

#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

WavelengthGrid::WavelengthGrid(double lambda_min, double step, std::size_t count)
    : min_(lambda_min), step_(step), count_(count) {
    if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(lambda_min)) {
        throw ValidationError("wavelength grid step must be positive and finite");
    }
    if (count < 2) {
        throw ValidationError("wavelength grid needs at least two samples");
    }
}

WavelengthGrid WavelengthGrid::from_range(double lambda_min, double lambda_max, double step) {
    if (!(step > 0.0) || !(lambda_max > lambda_min)) {
        throw ValidationError("invalid wavelength range");
    }
    const double intervals = (lambda_max - lambda_min) / step;
    const double rounded = std::round(intervals);
    if (std::abs(intervals - rounded) > 1e-9 * std::max(1.0, rounded)) {
        throw ValidationError(fmt::format("range {}-{} nm is not a multiple of step {}", lambda_min,
                                          lambda_max, step));
    }
    return WavelengthGrid(lambda_min, step, static_cast<std::size_t>(rounded) + 1);
}

WavelengthGrid WavelengthGrid::canonical() { return WavelengthGrid(300.0, 1.0, 501); }

WavelengthGrid WavelengthGrid::parse(const std::string& text) {
    const auto fields = text_io::split(text, ':');
    if (fields.size() != 3) {
        throw ValidationError("grid must be given as min:max:step, got '" + text + "'");
    }
    const auto lo = text_io::parse_double(fields[0]);
    const auto hi = text_io::parse_double(fields[1]);
    const auto step = text_io::parse_double(fields[2]);
    if (!lo || !hi || !step) {
        throw ValidationError("grid must be given as min:max:step, got '" + text + "'");
    }
    return from_range(*lo, *hi, *step);
}

std::size_t WavelengthGrid::index_of(double lambda) const {
    const double pos = (lambda - min_) / step_;
    const double rounded = std::round(pos);
    if (std::abs(pos - rounded) > 1e-9 || rounded < 0.0 ||
        rounded > static_cast<double>(count_ - 1)) {
        return npos;
    }
    return static_cast<std::size_t>(rounded);
}

Eigen::VectorXd WavelengthGrid::weights() const {
    Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(count_), step_);
    w[0] = 0.5 * step_;
    w[w.size() - 1] = 0.5 * step_;
    return w;
}

Eigen::VectorXd WavelengthGrid::wavelengths() const {
    Eigen::VectorXd l(static_cast<Eigen::Index>(count_));
    for (std::size_t i = 0; i < count_; ++i) {
        l[static_cast<Eigen::Index>(i)] = (*this)[i];
    }
    return l;
}

std::string WavelengthGrid::to_string() const {
    return fmt::format("{}:{}:{}", min_, lambda_max(), step_);
}

}  // namespace fluor
