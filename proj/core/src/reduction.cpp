#include "fluor/reduction.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <Eigen/LU>
#include <fmt/format.h>

#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

namespace {

void require_grid(const WavelengthGrid& grid, const BasisSet& basis, const char* what) {
    if (!(grid == basis.grid())) {
        throw ValidationError(fmt::format("{} grid {} does not match basis grid {}", what,
                                          grid.to_string(), basis.grid().to_string()));
    }
}

void require_square_on(const DonaldsonMatrix& p, const BasisSet& basis) {
    if (!p.is_square_on(basis.grid())) {
        throw ValidationError("Donaldson matrix must be resampled to the basis grid on both axes");
    }
}

}  // namespace

ReducedMatrix::ReducedMatrix(Eigen::MatrixXd matrix, std::string basis_in, std::string basis_out)
    : matrix_(std::move(matrix)), basis_in_(std::move(basis_in)), basis_out_(std::move(basis_out)) {
    if (!matrix_.allFinite()) {
        throw ValidationError("reduced matrix has non-finite entries");
    }
    if (basis_in_ == basis_out_ && matrix_.rows() != matrix_.cols()) {
        throw ValidationError("reduced matrix within one basis must be square");
    }
}

std::string ReducedMatrix::space() const {
    std::string tag = basis_out_;
    std::transform(tag.begin(), tag.end(), tag.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return tag;
}

ColorVector ReducedMatrix::apply(const ColorVector& incident) const {
    if (incident.basis != basis_in_ || incident.c.size() != k_in()) {
        throw ValidationError(fmt::format("color vector in '{}' cannot feed a '{}' reduced matrix",
                                          incident.basis, basis_in_));
    }
    return {matrix_ * incident.c, basis_out_};
}

ColorVector downsample(const Spectrum& f, const BasisSet& basis) {
    require_grid(f.grid(), basis, "spectrum");
    return {basis.downsampling().transpose() * f.values(), basis.name()};
}

Spectrum upsample(const ColorVector& c, const BasisSet& basis) {
    if (c.basis != basis.name() || c.c.size() != basis.size()) {
        throw ValidationError(fmt::format("color vector in '{}' ({} channels) cannot be upsampled "
                                          "with basis '{}'",
                                          c.basis, c.c.size(), basis.name()));
    }
    return Spectrum(basis.grid(), basis.dual() * c.c);
}

ReducedMatrix reduce_ours(const DonaldsonMatrix& p, const BasisSet& basis) {
    require_square_on(p, basis);
    return ReducedMatrix(basis.downsampling().transpose() * (p.entries() * basis.dual()),
                         basis.name(), basis.name());
}

NaiveNorm parse_naive_norm(const std::string& text) {
    if (text == "l1") {
        return NaiveNorm::l1;
    }
    if (text == "l2") {
        return NaiveNorm::l2;
    }
    throw ValidationError("unknown naive norm '" + text + "' (expected l1 or l2)");
}

std::string to_string(NaiveNorm norm) { return norm == NaiveNorm::l1 ? "l1" : "l2"; }

ReducedMatrix reduce_naive(const DonaldsonMatrix& p, const BasisSet& basis, NaiveNorm norm) {
    require_square_on(p, basis);
    const Eigen::VectorXd w = basis.grid().weights();
    Eigen::MatrixXd normalized = basis.sensitivities();
    for (Eigen::Index k = 0; k < normalized.cols(); ++k) {
        const double n = norm == NaiveNorm::l1
                             ? w.dot(normalized.col(k).cwiseAbs())
                             : std::sqrt(w.dot(normalized.col(k).cwiseAbs2()));
        if (!(n > 0.0)) {
            throw ValidationError("cannot normalise an all-zero sensitivity function");
        }
        normalized.col(k) /= n;
    }
    const Eigen::MatrixXd weighted = w.asDiagonal() * normalized;
    return ReducedMatrix(weighted.transpose() * (p.entries() * normalized), basis.name(),
                         basis.name());
}

ReducedMatrix conjugate_reduced(const ReducedMatrix& r, const Eigen::Matrix3d& m,
                                const std::string& target_basis) {
    if (r.k_in() != 3 || r.k_out() != 3) {
        throw ValidationError("conjugation needs a 3x3 reduced matrix");
    }
    const Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
    if (!lu.isInvertible()) {
        throw ValidationError("conjugation matrix is singular");
    }
    const Eigen::Matrix3d rr = r.matrix();
    return ReducedMatrix(m * rr * lu.inverse(), target_basis, target_basis);
}

ReducedMatrix reduce_7_to_4(const ReducedMatrix& r7, const Eigen::MatrixXd& transfer) {
    if (r7.k_in() != 7 || r7.k_out() != 7) {
        throw ValidationError("7-to-4 connection needs a 7x7 reduced matrix");
    }
    if (transfer.rows() != 4 || transfer.cols() != 7) {
        throw ValidationError("7-to-4 connection needs the 4x7 band-merging transfer matrix");
    }
    return ReducedMatrix(transfer * r7.matrix(), r7.basis_in(), "xyzu");
}

void write_reduced_matrix(const std::filesystem::path& path, const ReducedMatrix& r,
                          const std::vector<std::string>& metadata) {
    std::ostringstream out;
    out << "space=" << r.k_in() << ',' << r.k_out() << ',' << r.basis_in() << ',' << r.basis_out()
        << '\n';
    for (const auto& line : metadata) {
        out << "# " << line << '\n';
    }
    for (Eigen::Index row = 0; row < r.k_out(); ++row) {
        for (Eigen::Index col = 0; col < r.k_in(); ++col) {
            out << (col > 0 ? "," : "") << text_io::format_double(r.matrix()(row, col));
        }
        out << '\n';
    }
    text_io::write_file(path, out.str());
}

ReducedMatrix read_reduced_matrix(const std::filesystem::path& path) {
    const auto lines = text_io::data_lines(text_io::read_file(path));
    if (lines.empty() || lines[0].rfind("space=", 0) != 0) {
        throw IoError(path.string() + ": missing 'space=' header");
    }
    const auto header = text_io::split(std::string_view(lines[0]).substr(6), ',');
    if (header.size() != 4) {
        throw IoError(path.string() + ": header must be space=K_in,K_out,basis_in,basis_out");
    }
    const auto k_in = text_io::parse_double(header[0]);
    const auto k_out = text_io::parse_double(header[1]);
    if (!k_in || !k_out || *k_in < 1 || *k_out < 1) {
        throw IoError(path.string() + ": bad matrix dimensions");
    }
    const auto cols = static_cast<Eigen::Index>(*k_in);
    const auto rows = static_cast<Eigen::Index>(*k_out);
    if (static_cast<Eigen::Index>(lines.size()) != rows + 1) {
        throw IoError(fmt::format("{}: expected {} rows", path.string(), rows));
    }
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto fields = text_io::split(lines[static_cast<std::size_t>(r) + 1], ',');
        if (static_cast<Eigen::Index>(fields.size()) != cols) {
            throw IoError(fmt::format("{}: row {} needs {} values", path.string(), r + 1, cols));
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const auto v = text_io::parse_double(fields[static_cast<std::size_t>(c)]);
            if (!v) {
                throw IoError(fmt::format("{}: bad value in row {}", path.string(), r + 1));
            }
            m(r, c) = *v;
        }
    }
    return ReducedMatrix(std::move(m), header[2], header[3]);
}

}  // namespace fluor
