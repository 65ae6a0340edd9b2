#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

namespace fluor {

/// Cox-de Boor evaluation of all B-spline basis functions of the given degree
/// on a non-decreasing knot vector. The right end of the parameter range is
/// closed so a clamped knot vector forms a partition of unity there as well.
std::vector<double> bspline_basis_at(double t, std::span<const double> knots, int degree);

/// Basis functions sampled at each point: rows = points, columns = functions.
Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& points, std::span<const double> knots,
                              int degree);

}  // namespace fluor
