#include "fluor/bspline.hpp"

#include <algorithm>

#include "fluor/error.hpp"

namespace fluor {

std::vector<double> bspline_basis_at(double t, std::span<const double> knots, int degree) {
    if (degree < 0 || knots.size() < static_cast<std::size_t>(degree + 2)) {
        throw ValidationError("knot vector too short for the requested degree");
    }
    if (!std::is_sorted(knots.begin(), knots.end())) {
        throw ValidationError("knot vector must be non-decreasing");
    }
    const std::size_t n_functions = knots.size() - static_cast<std::size_t>(degree) - 1;
    const double lo = knots[static_cast<std::size_t>(degree)];
    const double hi = knots[n_functions];

    // Degree-0 indicator functions on half-open spans; the last non-empty span
    // is closed on the right.
    std::vector<double> n(knots.size() - 1, 0.0);
    if (t >= lo && t <= hi) {
        std::size_t span = 0;
        if (t == hi) {
            span = n_functions - 1;
            while (span > 0 && knots[span] == knots[span + 1]) {
                --span;
            }
        } else {
            span = static_cast<std::size_t>(
                std::upper_bound(knots.begin(), knots.end(), t) - knots.begin() - 1);
        }
        n[span] = 1.0;
    }

    for (int p = 1; p <= degree; ++p) {
        for (std::size_t i = 0; i + static_cast<std::size_t>(p) + 1 < knots.size(); ++i) {
            const auto ip = i + static_cast<std::size_t>(p);
            double value = 0.0;
            const double left = knots[ip] - knots[i];
            if (left > 0.0) {
                value += (t - knots[i]) / left * n[i];
            }
            const double right = knots[ip + 1] - knots[i + 1];
            if (right > 0.0) {
                value += (knots[ip + 1] - t) / right * n[i + 1];
            }
            n[i] = value;
        }
    }
    n.resize(n_functions);
    return n;
}

Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& points, std::span<const double> knots,
                              int degree) {
    const auto n_functions = static_cast<Eigen::Index>(knots.size()) - degree - 1;
    Eigen::MatrixXd result(points.size(), std::max<Eigen::Index>(n_functions, 0));
    for (Eigen::Index r = 0; r < points.size(); ++r) {
        const auto row = bspline_basis_at(points[r], knots, degree);
        for (Eigen::Index c = 0; c < result.cols(); ++c) {
            result(r, c) = row[static_cast<std::size_t>(c)];
        }
    }
    return result;
}

}  // namespace fluor
