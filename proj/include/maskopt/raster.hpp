#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace maskopt {

/// Binary raster, row-major. A set bit marks a pixel to be removed.
class MaskBitmap {
public:
    MaskBitmap() = default;
    MaskBitmap(int width, int height, bool fill = false);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
    void set(int x, int y, bool v = true) { bits_[index(x, y)] = v ? 1 : 0; }

    std::vector<std::uint8_t>& bits() noexcept { return bits_; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }

    MaskBitmap& operator|=(const MaskBitmap& other);

    bool operator==(const MaskBitmap&) const = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// True when every set bit of `inner` is also set in `outer`.
bool is_subset(const MaskBitmap& inner, const MaskBitmap& outer);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Interleaved 8-bit RGB raster, row-major.
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int width, int height, Rgb fill = {});

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    Rgb at(int x, int y) const {
        const std::size_t i = offset(x, y);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        const std::size_t i = offset(x, y);
        data_[i] = c.r;
        data_[i + 1] = c.g;
        data_[i + 2] = c.b;
    }

    std::vector<std::uint8_t>& data() noexcept { return data_; }
    const std::vector<std::uint8_t>& data() const noexcept { return data_; }

    bool operator==(const RgbImage&) const = default;

private:
    std::size_t offset(int x, int y) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) * 3;
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

}  // namespace maskopt

namespace maskopt {

/// Number of 8-connected components of set bits.
int count_components(const MaskBitmap& mask);

}  // namespace maskopt
