#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fluor {

/// Row-major float image with an arbitrary channel count.
class Image {
public:
    Image() = default;
    Image(int width, int height, int channels);

    int width() const { return width_; }
    int height() const { return height_; }
    int channels() const { return channels_; }

    double& at(int x, int y, int c) { return data_[index(x, y, c)]; }
    double at(int x, int y, int c) const { return data_[index(x, y, c)]; }

    Eigen::VectorXd pixel(int x, int y) const;
    void set_pixel(int x, int y, const Eigen::VectorXd& value);

    const std::vector<double>& data() const { return data_; }

    /// Per-pixel linear map (e.g. reduced coefficients to XYZ).
    Image transformed(const Eigen::MatrixXd& m) const;

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) * static_cast<std::size_t>(channels_) +
               static_cast<std::size_t>(c);
    }

    int width_ = 0;
    int height_ = 0;
    int channels_ = 0;
    std::vector<double> data_;
};

/// 8-bit RGB(A) PNG. `text` entries are stored as tEXt chunks (key, value).
void write_png(const std::filesystem::path& path, int width, int height,
               const std::vector<std::uint8_t>& rgb,
               const std::vector<std::pair<std::string, std::string>>& text = {});

/// XYZ image to sRGB bytes, after dividing by `white_y` (display white).
std::vector<std::uint8_t> xyz_image_to_srgb8(const Image& xyz, double white_y);

/// Plain-text float raster: first line `width height channels`, then `#`
/// metadata lines, then one line per pixel row.
void write_raster(const std::filesystem::path& path, const Image& image,
                  const std::vector<std::string>& metadata = {});
Image read_raster(const std::filesystem::path& path);

/// False-colour rendering of |m| in decibels relative to the largest entry,
/// floored at `floor_db`; each entry becomes a cell x cell block.
std::vector<std::uint8_t> matrix_db_image(const Eigen::MatrixXd& m, int cell, double floor_db,
                                          int& width, int& height);

/// Colour map for t in [0, 1] (perceptually ordered, dark to bright).
Eigen::Vector3d colormap(double t);

}  // namespace fluor
