#include "fluor/image.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

#include <png.h>
#include <fmt/format.h>

#include "fluor/colorimetry.hpp"
#include "fluor/error.hpp"
#include "fluor/text_io.hpp"

namespace fluor {

Image::Image(int width, int height, int channels)
    : width_(width), height_(height), channels_(channels) {
    if (width <= 0 || height <= 0 || channels <= 0) {
        throw ValidationError("image dimensions must be positive");
    }
    data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) *
                     static_cast<std::size_t>(channels),
                 0.0);
}

Eigen::VectorXd Image::pixel(int x, int y) const {
    return Eigen::Map<const Eigen::VectorXd>(&data_[index(x, y, 0)], channels_);
}

void Image::set_pixel(int x, int y, const Eigen::VectorXd& value) {
    Eigen::Map<Eigen::VectorXd>(&data_[index(x, y, 0)], channels_) = value;
}

Image Image::transformed(const Eigen::MatrixXd& m) const {
    if (m.cols() != channels_) {
        throw ValidationError("pixel transform does not match the channel count");
    }
    Image out(width_, height_, static_cast<int>(m.rows()));
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            out.set_pixel(x, y, m * pixel(x, y));
        }
    }
    return out;
}

void write_png(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& rgb,
               const std::vector<std::pair<std::string, std::string>>& text) {
    if (rgb.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3) {
        throw ValidationError("PNG buffer size does not match its dimensions");
    }
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.string().c_str(), "wb"), &std::fclose);
    if (!file) {
        throw IoError("cannot write '" + path.string() + "'");
    }
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (png == nullptr || info == nullptr) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng initialisation failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("libpng failed writing '" + path.string() + "'");
    }
    png_init_io(png, file.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    std::vector<png_text> chunks(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        chunks[i].compression = PNG_TEXT_COMPRESSION_NONE;
        chunks[i].key = const_cast<char*>(text[i].first.c_str());
        chunks[i].text = const_cast<char*>(text[i].second.c_str());
        chunks[i].text_length = text[i].second.size();
    }
    if (!chunks.empty()) {
        png_set_text(png, info, chunks.data(), static_cast<int>(chunks.size()));
    }
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
        auto* row = const_cast<png_bytep>(&rgb[static_cast<std::size_t>(y) *
                                              static_cast<std::size_t>(width) * 3]);
        png_write_row(png, row);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::vector<std::uint8_t> xyz_image_to_srgb8(const Image& xyz, double white_y) {
    if (xyz.channels() != 3) {
        throw ValidationError("expected a 3-channel XYZ image");
    }
    std::vector<std::uint8_t> out;
    out.reserve(static_cast<std::size_t>(xyz.width()) * static_cast<std::size_t>(xyz.height()) * 3);
    const double scale = white_y > 0.0 ? 1.0 / white_y : 1.0;
    for (int y = 0; y < xyz.height(); ++y) {
        for (int x = 0; x < xyz.width(); ++x) {
            const Eigen::Vector3d rgb = xyz_to_srgb(xyz.pixel(x, y) * scale);
            for (int c = 0; c < 3; ++c) {
                out.push_back(static_cast<std::uint8_t>(std::lround(rgb[c] * 255.0)));
            }
        }
    }
    return out;
}

void write_raster(const std::filesystem::path& path, const Image& image,
                  const std::vector<std::string>& metadata) {
    std::ostringstream out;
    out << image.width() << ' ' << image.height() << ' ' << image.channels() << '\n';
    for (const auto& line : metadata) {
        out << "# " << line << '\n';
    }
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < image.channels(); ++c) {
                out << (x == 0 && c == 0 ? "" : " ") << text_io::format_double(image.at(x, y, c));
            }
        }
        out << '\n';
    }
    text_io::write_file(path, out.str());
}

Image read_raster(const std::filesystem::path& path) {
    const auto lines = text_io::data_lines(text_io::read_file(path));
    if (lines.empty()) {
        throw IoError(path.string() + ": empty raster");
    }
    std::istringstream header(lines[0]);
    int w = 0, h = 0, c = 0;
    if (!(header >> w >> h >> c) || static_cast<int>(lines.size()) != h + 1) {
        throw IoError(path.string() + ": bad raster header");
    }
    Image image(w, h, c);
    for (int y = 0; y < h; ++y) {
        const auto fields = text_io::split(lines[static_cast<std::size_t>(y) + 1], ' ');
        if (static_cast<int>(fields.size()) != w * c) {
            throw IoError(fmt::format("{}: row {} has {} values", path.string(), y, fields.size()));
        }
        for (int i = 0; i < w * c; ++i) {
            const auto v = text_io::parse_double(fields[static_cast<std::size_t>(i)]);
            if (!v) {
                throw IoError(fmt::format("{}: bad value in row {}", path.string(), y));
            }
            image.at(i / c, y, i % c) = *v;
        }
    }
    return image;
}

Eigen::Vector3d colormap(double t) {
    // Piecewise-linear through samples of matplotlib's "inferno".
    static constexpr std::array<std::array<double, 3>, 9> stops{{
        {0.001, 0.000, 0.014},
        {0.087, 0.045, 0.225},
        {0.258, 0.039, 0.406},
        {0.416, 0.090, 0.433},
        {0.578, 0.148, 0.404},
        {0.735, 0.216, 0.330},
        {0.865, 0.317, 0.226},
        {0.954, 0.469, 0.099},
        {0.988, 0.998, 0.645},
    }};
    t = std::clamp(t, 0.0, 1.0) * static_cast<double>(stops.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - static_cast<double>(i);
    Eigen::Vector3d c;
    for (int k = 0; k < 3; ++k) {
        c[k] = (1.0 - f) * stops[i][static_cast<std::size_t>(k)] +
               f * stops[i + 1][static_cast<std::size_t>(k)];
    }
    return c;
}

std::vector<std::uint8_t> matrix_db_image(const Eigen::MatrixXd& m, int cell, double floor_db,
                                          int& width, int& height) {
    width = static_cast<int>(m.cols()) * cell;
    height = static_cast<int>(m.rows()) * cell;
    const double peak = m.cwiseAbs().maxCoeff();
    std::vector<std::uint8_t> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double v = std::abs(m(y / cell, x / cell));
            double db = floor_db;
            if (peak > 0.0 && v > 0.0) {
                db = std::max(floor_db, 10.0 * std::log10(v / peak));
            }
            const Eigen::Vector3d c = colormap((db - floor_db) / -floor_db);
            const auto o = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                            static_cast<std::size_t>(x)) * 3;
            for (int k = 0; k < 3; ++k) {
                out[o + static_cast<std::size_t>(k)] =
                    static_cast<std::uint8_t>(std::lround(std::clamp(c[k], 0.0, 1.0) * 255.0));
            }
        }
    }
    return out;
}

}  // namespace fluor
