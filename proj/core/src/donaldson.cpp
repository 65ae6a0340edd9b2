#include "fluor/donaldson.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <fmt/format.h>

#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

namespace {

// Row t holds the linear-interpolation weights of target sample t over the
// source samples; rows outside the source support are zero.
Eigen::MatrixXd interpolation_matrix(const WavelengthGrid& source, const WavelengthGrid& target) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(target.size()),
                                              static_cast<Eigen::Index>(source.size()));
    const auto last = static_cast<double>(source.size() - 1);
    for (std::size_t t = 0; t < target.size(); ++t) {
        const double pos = (target[t] - source.lambda_min()) / source.step();
        if (pos < 0.0 || pos > last) {
            continue;
        }
        const auto i = static_cast<Eigen::Index>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        const auto row = static_cast<Eigen::Index>(t);
        a(row, i) += 1.0 - frac;
        if (frac > 0.0) {
            a(row, i + 1) += frac;
        }
    }
    return a;
}

void check_axis(const std::vector<double>& axis, const std::string& what) {
    if (axis.size() < 2) {
        throw IoError(what + " axis needs at least two wavelengths");
    }
    const double step = axis[1] - axis[0];
    for (std::size_t i = 1; i < axis.size(); ++i) {
        const double d = axis[i] - axis[i - 1];
        if (!(d > 0.0)) {
            throw IoError(what + " wavelength axis is not strictly increasing");
        }
        if (std::abs(d - step) > 1e-6 * step) {
            throw IoError(what + " wavelength axis is not uniformly spaced");
        }
    }
}

}  // namespace

DonaldsonMatrix::DonaldsonMatrix(WavelengthGrid grid_in, WavelengthGrid grid_out,
                                 Eigen::MatrixXd entries)
    : grid_in_(std::move(grid_in)), grid_out_(std::move(grid_out)), entries_(std::move(entries)) {
    if (static_cast<std::size_t>(entries_.rows()) != grid_out_.size() ||
        static_cast<std::size_t>(entries_.cols()) != grid_in_.size()) {
        throw ValidationError(fmt::format("Donaldson matrix is {}x{} but its axes are {}x{}",
                                          entries_.rows(), entries_.cols(), grid_out_.size(),
                                          grid_in_.size()));
    }
    if (!entries_.allFinite()) {
        throw ValidationError("Donaldson matrix contains non-finite entries");
    }
}

DonaldsonMatrix::DonaldsonMatrix(const WavelengthGrid& grid, Eigen::MatrixXd entries)
    : DonaldsonMatrix(grid, grid, std::move(entries)) {}

DonaldsonMatrix DonaldsonMatrix::identity(const WavelengthGrid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    return DonaldsonMatrix(grid, Eigen::MatrixXd::Identity(n, n));
}

DonaldsonMatrix DonaldsonMatrix::diagonal(const Spectrum& albedo) {
    return DonaldsonMatrix(albedo.grid(), Eigen::MatrixXd(albedo.values().asDiagonal()));
}

Spectrum DonaldsonMatrix::apply(const Spectrum& incident) const {
    if (!(incident.grid() == grid_in_)) {
        throw ValidationError("incident spectrum is not on the matrix input grid");
    }
    return Spectrum(grid_out_, entries_ * incident.values());
}

std::size_t DonaldsonMatrix::clamp_negative() {
    std::size_t count = 0;
    for (Eigen::Index c = 0; c < entries_.cols(); ++c) {
        for (Eigen::Index r = 0; r < entries_.rows(); ++r) {
            if (entries_(r, c) < 0.0) {
                entries_(r, c) = 0.0;
                ++count;
            }
        }
    }
    return count;
}

DonaldsonMatrix resample(const DonaldsonMatrix& matrix, const WavelengthGrid& target) {
    const auto& gin = matrix.grid_in();
    const auto& gout = matrix.grid_out();
    if (gin == target && gout == target) {
        return matrix;
    }
    if (target.lambda_max() < gin.lambda_min() || target.lambda_min() > gin.lambda_max() ||
        target.lambda_max() < gout.lambda_min() || target.lambda_min() > gout.lambda_max()) {
        throw ValidationError("disjoint grids");
    }
    const auto& p = matrix.entries();

    // Split into the reflectance diagonal and an off-diagonal density per nm.
    // Diagonal cells of the density borrow their row neighbours so the
    // reflectance spike does not leak into the interpolated fluorescence.
    std::vector<double> albedo(gout.size(), 0.0);
    Eigen::MatrixXd density = p / gin.step();
    for (std::size_t o = 0; o < gout.size(); ++o) {
        const auto i = gin.index_of(gout[o]);
        if (i == WavelengthGrid::npos) {
            continue;
        }
        const auto r = static_cast<Eigen::Index>(o);
        const auto c = static_cast<Eigen::Index>(i);
        albedo[o] = p(r, c);
        double sum = 0.0;
        int n = 0;
        if (c > 0) {
            sum += density(r, c - 1);
            ++n;
        }
        if (c + 1 < density.cols()) {
            sum += density(r, c + 1);
            ++n;
        }
        density(r, c) = n > 0 ? sum / n : 0.0;
    }

    const Eigen::MatrixXd a_out = interpolation_matrix(gout, target);
    const Eigen::MatrixXd a_in = interpolation_matrix(gin, target);
    Eigen::MatrixXd result = a_out * density * a_in.transpose() * target.step();

    const Spectrum albedo_src(gout, Eigen::Map<const Eigen::VectorXd>(
                                        albedo.data(), static_cast<Eigen::Index>(albedo.size())));
    for (std::size_t t = 0; t < target.size(); ++t) {
        const auto d = static_cast<Eigen::Index>(t);
        const bool covered = target[t] >= gin.lambda_min() && target[t] <= gin.lambda_max();
        result(d, d) = covered ? albedo_src.at(target[t]) : 0.0;
    }
    return DonaldsonMatrix(target, std::move(result));
}

DonaldsonMatrix read_donaldson_csv(const std::filesystem::path& path) {
    const auto lines = text_io::data_lines(text_io::read_file(path));
    if (lines.size() < 3) {
        throw IoError(path.string() + ": Donaldson file needs an axis row and at least two rows");
    }
    const auto header = text_io::split(lines[0], ',');
    std::vector<double> lambda_in;
    for (std::size_t k = 1; k < header.size(); ++k) {
        const auto v = text_io::parse_double(header[k]);
        if (!v) {
            throw IoError(fmt::format("{}: bad incident wavelength '{}'", path.string(), header[k]));
        }
        lambda_in.push_back(*v);
    }
    check_axis(lambda_in, path.string() + ": incident");

    std::vector<double> lambda_out;
    std::vector<double> body;
    for (std::size_t n = 1; n < lines.size(); ++n) {
        const auto fields = text_io::split(lines[n], ',');
        if (fields.size() != lambda_in.size() + 1) {
            throw IoError(fmt::format("{}: row {} has {} cells, expected {}", path.string(), n + 1,
                                      fields.size(), lambda_in.size() + 1));
        }
        const auto lo = text_io::parse_double(fields[0]);
        if (!lo) {
            throw IoError(fmt::format("{}: bad outgoing wavelength on row {}", path.string(), n + 1));
        }
        lambda_out.push_back(*lo);
        for (std::size_t k = 1; k < fields.size(); ++k) {
            const auto v = text_io::parse_double(fields[k]);
            if (!v || !std::isfinite(*v)) {
                throw IoError(fmt::format("{}: bad entry on row {} column {}", path.string(), n + 1,
                                          k + 1));
            }
            body.push_back(*v);
        }
    }
    check_axis(lambda_out, path.string() + ": outgoing");

    const WavelengthGrid gin(lambda_in.front(), lambda_in[1] - lambda_in[0], lambda_in.size());
    const WavelengthGrid gout(lambda_out.front(), lambda_out[1] - lambda_out[0], lambda_out.size());
    Eigen::MatrixXd entries =
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            body.data(), static_cast<Eigen::Index>(lambda_out.size()),
            static_cast<Eigen::Index>(lambda_in.size()));
    return DonaldsonMatrix(gin, gout, std::move(entries));
}

void write_donaldson_csv(const std::filesystem::path& path, const DonaldsonMatrix& matrix) {
    std::ostringstream out;
    out << "out\\in";
    for (std::size_t i = 0; i < matrix.grid_in().size(); ++i) {
        out << ',' << text_io::format_double(matrix.grid_in()[i]);
    }
    out << '\n';
    const auto& p = matrix.entries();
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
        out << text_io::format_double(matrix.grid_out()[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < p.cols(); ++c) {
            out << ',' << text_io::format_double(p(r, c));
        }
        out << '\n';
    }
    text_io::write_file(path, out.str());
}

}  // namespace fluor
