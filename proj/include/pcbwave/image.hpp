#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pcbwave/errors.hpp"

namespace pcbwave {

/// Dense row-major grid of doubles. Used both for raw images (8-bit
/// intensities promoted to double, no rescaling) and for wavelet
/// coefficient planes.
class Grid {
public:
    Grid() = default;

    Grid(int height, int width, double fill = 0.0)
        : height_(height), width_(width) {
        if (height < 1 || width < 1)
            throw Error("Grid: dimensions must be positive");
        data_.assign(static_cast<std::size_t>(height) * width, fill);
    }

    Grid(int height, int width, std::vector<double> values)
        : height_(height), width_(width), data_(std::move(values)) {
        if (height < 1 || width < 1)
            throw Error("Grid: dimensions must be positive");
        if (data_.size() != static_cast<std::size_t>(height) * width)
            throw Error("Grid: value count does not match dimensions");
    }

    int height() const { return height_; }
    int width() const { return width_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * width_ + c]; }
    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * width_ + c]; }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    bool same_shape(const Grid& other) const {
        return height_ == other.height_ && width_ == other.width_;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

/// Grayscale input image; pixel values live on the raw 0-255 scale.
using Image = Grid;

}  // namespace pcbwave
