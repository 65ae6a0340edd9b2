#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

namespace fluor {

/// Uniform wavelength sampling [min, min + (count-1)*step] in nanometres.
class WavelengthGrid {
public:
    WavelengthGrid(double lambda_min, double step, std::size_t count);

    /// Grid spanning [lambda_min, lambda_max] inclusive; the span must be a
    /// whole number of steps.
    static WavelengthGrid from_range(double lambda_min, double lambda_max, double step);

    /// 300-800 nm at 1 nm, N = 501.
    static WavelengthGrid canonical();

    /// Parses "min:max:step", e.g. "300:800:1".
    static WavelengthGrid parse(const std::string& text);

    double lambda_min() const { return min_; }
    double lambda_max() const { return min_ + step_ * static_cast<double>(count_ - 1); }
    double step() const { return step_; }
    std::size_t size() const { return count_; }

    double operator[](std::size_t i) const { return min_ + step_ * static_cast<double>(i); }

    /// Index of an on-grid wavelength, or npos.
    std::size_t index_of(double lambda) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Trapezoid quadrature weights (step, halved at both ends).
    Eigen::VectorXd weights() const;
    Eigen::VectorXd wavelengths() const;

    std::string to_string() const;

    friend bool operator==(const WavelengthGrid& a, const WavelengthGrid& b) {
        return a.min_ == b.min_ && a.step_ == b.step_ && a.count_ == b.count_;
    }

private:
    double min_;
    double step_;
    std::size_t count_;
};

}  // namespace fluor
