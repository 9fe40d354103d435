#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpsw {

/// An 8-bit grayscale image stored row-major. Immutable after construction.
class Raster {
public:
    Raster(int width, int height, std::vector<std::uint8_t> intensities)
        : width_(width), height_(height), data_(std::move(intensities)) {
        if (width_ < 1 || height_ < 1)
            throw std::invalid_argument("Raster: width and height must be >= 1");
        if (data_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_))
            throw std::invalid_argument("Raster: intensity count " + std::to_string(data_.size()) +
                                        " does not match " + std::to_string(width_) + "x" +
                                        std::to_string(height_));
    }

    static Raster filled(int width, int height, std::uint8_t value) {
        return Raster(width, height,
                      std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int pixel_count() const { return width_ * height_; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

    int index_of(int x, int y) const { return y * width_ + x; }
    int x_of(int index) const { return index % width_; }
    int y_of(int index) const { return index / width_; }

    /// Unchecked access, hot paths only.
    std::uint8_t operator[](int index) const { return data_[static_cast<std::size_t>(index)]; }

    std::uint8_t at(int index) const {
        if (index < 0 || index >= pixel_count())
            throw std::invalid_argument("Raster: pixel index " + std::to_string(index) +
                                        " out of range [0," + std::to_string(pixel_count()) + ")");
        return data_[static_cast<std::size_t>(index)];
    }

    std::uint8_t at(int x, int y) const {
        if (!in_bounds(x, y))
            throw std::invalid_argument("Raster: coordinates out of range");
        return data_[static_cast<std::size_t>(index_of(x, y))];
    }

    std::span<const std::uint8_t> intensities() const { return data_; }

    bool operator==(const Raster&) const = default;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

}  // namespace dpsw
