#include "fluor/basis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "fluor/bspline.hpp"
#include "fluor/data_paths.hpp"
#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

namespace {

constexpr double kMaxGramCondition = 1e12;

Eigen::MatrixXd dual_from_gram(const Eigen::MatrixXd& sensitivities, const Eigen::MatrixXd& gram) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxGramCondition) {
        throw ValidationError("degenerate basis");
    }
    const Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw ValidationError("degenerate basis");
    }
    return llt.solve(sensitivities.transpose()).transpose();
}

Eigen::MatrixXd identity_transfer(Eigen::Index k) {
    return Eigen::MatrixXd::Identity(3, k);
}

}  // namespace

BasisSet::BasisSet(std::string name, WavelengthGrid grid, Eigen::MatrixXd sensitivities,
                   std::vector<std::string> labels, Eigen::MatrixXd transfer)
    : name_(std::move(name)),
      grid_(std::move(grid)),
      sensitivities_(std::move(sensitivities)),
      labels_(std::move(labels)),
      transfer_(std::move(transfer)) {
    if (static_cast<std::size_t>(sensitivities_.rows()) != grid_.size()) {
        throw ValidationError("basis rows do not match the wavelength grid");
    }
    if (labels_.size() != static_cast<std::size_t>(sensitivities_.cols())) {
        throw ValidationError("one label per basis function is required");
    }
    if (transfer_.cols() != sensitivities_.cols() || transfer_.rows() < 3) {
        throw ValidationError("transfer matrix must be at least 3 x K");
    }
    const Eigen::VectorXd w = grid_.weights();
    weighted_ = w.asDiagonal() * sensitivities_;
    dual_ = compute_dual(sensitivities_, w);
}

double BasisSet::dual_residual() const {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(size(), size());
    return (weighted_.transpose() * dual_ - id).cwiseAbs().maxCoeff();
}

Eigen::MatrixXd compute_dual(const Eigen::MatrixXd& sensitivities) {
    return dual_from_gram(sensitivities, sensitivities.transpose() * sensitivities);
}

Eigen::MatrixXd compute_dual(const Eigen::MatrixXd& sensitivities, const Eigen::VectorXd& weights) {
    if (weights.size() != sensitivities.rows()) {
        throw ValidationError("quadrature weights do not match the basis rows");
    }
    return dual_from_gram(sensitivities,
                          sensitivities.transpose() * weights.asDiagonal() * sensitivities);
}

double smoothstep(double lambda, SmoothstepParams p) {
    if (!(p.sigma > 0.0)) {
        throw ValidationError("smoothstep sigma must be positive");
    }
    const double x = std::clamp(0.5 * ((lambda - p.mu) / p.sigma + 1.0), 0.0, 1.0);
    return 3.0 * x * x - 2.0 * x * x * x;
}

std::vector<double> default_uv_knots() {
    // The first element is ((650 - l) / 350)^2 on [300, 650]: decreasing, and
    // above one half for every wavelength below 400 nm (0.510 at 400 nm).
    return {300.0, 300.0, 300.0, 650.0, 725.0, 800.0, 800.0, 800.0};
}

Eigen::MatrixXd uv_partition_of_unity(const WavelengthGrid& grid, const std::vector<double>& knots) {
    return bspline_basis(grid.wavelengths(), knots, 2);
}

Spectrum build_uv_band(const WavelengthGrid& grid, const std::vector<double>& knots) {
    const Eigen::MatrixXd pu = uv_partition_of_unity(grid, knots);
    if (pu.cols() < 1) {
        throw ValidationError("UV knot vector yields no basis function");
    }
    Spectrum u(grid, pu.col(0));
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (u[i + 1] > u[i]) {
            throw ValidationError(
                fmt::format("UV band is not monotonically decreasing at {} nm", grid[i + 1]));
        }
    }
    for (std::size_t i = 0; i < grid.size() && grid[i] < 400.0; ++i) {
        if (!(u[i] > 0.5)) {
            throw ValidationError(
                fmt::format("UV band must exceed 0.5 below 400 nm (U({}) = {})", grid[i], u[i]));
        }
    }
    return u;
}

Eigen::MatrixXd read_basis_table(const std::filesystem::path& path, const WavelengthGrid& grid,
                                 Eigen::Index expected_columns) {
    const auto lines = text_io::data_lines(text_io::read_file(path));
    std::vector<double> wavelengths;
    std::vector<std::vector<double>> columns(static_cast<std::size_t>(expected_columns));
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const auto fields = text_io::split(lines[n], ',');
        const auto wl = text_io::parse_double(fields[0]);
        if (!wl && n == 0) {
            continue;
        }
        if (!wl || fields.size() < static_cast<std::size_t>(expected_columns) + 1) {
            throw IoError(fmt::format("{}: malformed line {}", path.string(), n + 1));
        }
        wavelengths.push_back(*wl);
        for (Eigen::Index c = 0; c < expected_columns; ++c) {
            const auto v = text_io::parse_double(fields[static_cast<std::size_t>(c) + 1]);
            if (!v) {
                throw IoError(fmt::format("{}: malformed value on line {}", path.string(), n + 1));
            }
            columns[static_cast<std::size_t>(c)].push_back(*v);
        }
    }
    if (wavelengths.size() < 2) {
        throw IoError(path.string() + ": table needs at least two rows");
    }
    const double step = wavelengths[1] - wavelengths[0];
    for (std::size_t i = 1; i < wavelengths.size(); ++i) {
        if (std::abs(wavelengths[i] - wavelengths[i - 1] - step) > 1e-6 * step || step <= 0.0) {
            throw IoError(path.string() + ": wavelengths must be uniform and increasing");
        }
    }
    const WavelengthGrid source(wavelengths.front(), step, wavelengths.size());
    Eigen::MatrixXd result(static_cast<Eigen::Index>(grid.size()), expected_columns);
    for (Eigen::Index c = 0; c < expected_columns; ++c) {
        const auto& col = columns[static_cast<std::size_t>(c)];
        const Spectrum s(source,
                         Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(col.size())));
        result.col(c) = resample(s, grid).values();
    }
    return result;
}

void write_basis_table(const std::filesystem::path& path, const BasisSet& basis) {
    std::ostringstream out;
    out << "wavelength";
    for (const auto& label : basis.labels()) {
        out << ',' << label;
    }
    out << '\n';
    for (std::size_t i = 0; i < basis.grid().size(); ++i) {
        out << text_io::format_double(basis.grid()[i]);
        for (Eigen::Index c = 0; c < basis.size(); ++c) {
            out << ',' << text_io::format_double(basis.sensitivities()(static_cast<Eigen::Index>(i), c));
        }
        out << '\n';
    }
    text_io::write_file(path, out.str());
}

BasisSet load_cmf_xyz(const WavelengthGrid& grid, const BasisOptions& options) {
    const auto path = options.cmf_file.empty() ? cmf_table_path() : options.cmf_file;
    if (!std::filesystem::exists(path)) {
        throw IoError("missing CMF table '" + path.string() + "' (set FLUOR_DATA_DIR)");
    }
    return BasisSet("xyz", grid, read_basis_table(path, grid, 3), {"x", "y", "z"},
                    identity_transfer(3));
}

BasisSet build_xyzu(const WavelengthGrid& grid, const BasisOptions& options) {
    const BasisSet xyz = load_cmf_xyz(grid, options);
    Eigen::MatrixXd s(static_cast<Eigen::Index>(grid.size()), 4);
    s.leftCols(3) = xyz.sensitivities();
    s.col(3) = build_uv_band(grid, options.uv_knots).values();
    return BasisSet("xyzu", grid, std::move(s), {"x", "y", "z", "u"}, identity_transfer(4));
}

BasisSet build_seven_band(const WavelengthGrid& grid, const BasisOptions& options) {
    const BasisSet xyz = load_cmf_xyz(grid, options);
    const auto n = static_cast<Eigen::Index>(grid.size());
    const Eigen::VectorXd x = xyz.sensitivities().col(0);
    const Eigen::VectorXd y = xyz.sensitivities().col(1);
    Eigen::MatrixXd s(n, 7);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double l = grid[static_cast<std::size_t>(i)];
        const double upper_mode = smoothstep(l, kXModeSeparator);
        const double sx = smoothstep(l, kXSplit);
        const double sy = smoothstep(l, kYSplit);
        s(i, 0) = x[i] * (1.0 - upper_mode);
        s(i, 1) = x[i] * upper_mode * sx;
        s(i, 2) = x[i] * upper_mode * (1.0 - sx);
        s(i, 3) = y[i] * sy;
        s(i, 4) = y[i] * (1.0 - sy);
    }
    s.col(5) = xyz.sensitivities().col(2);
    s.col(6) = build_uv_band(grid, options.uv_knots).values();

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(4, 7);
    t.row(0) << 1, 1, 1, 0, 0, 0, 0;
    t.row(1) << 0, 0, 0, 1, 1, 0, 0;
    t.row(2) << 0, 0, 0, 0, 0, 1, 0;
    t.row(3) << 0, 0, 0, 0, 0, 0, 1;
    return BasisSet("seven", grid, std::move(s), {"x1", "x2", "x3", "y1", "y2", "z", "u"},
                    std::move(t));
}

BasisSet make_basis(const std::string& name, const WavelengthGrid& grid,
                    const BasisOptions& options) {
    if (name == "xyz") {
        return load_cmf_xyz(grid, options);
    }
    if (name == "xyzu") {
        return build_xyzu(grid, options);
    }
    if (name == "seven") {
        return build_seven_band(grid, options);
    }
    throw ValidationError("unknown basis '" + name + "' (expected xyz, xyzu or seven)");
}

}  // namespace fluor
