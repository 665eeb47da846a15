#include "maskopt/raster.hpp"

#include <stdexcept>

namespace maskopt {

MaskBitmap::MaskBitmap(int width, int height, bool fill)
    : width_(width), height_(height) {
    if (width < 0 || height < 0) {
        throw std::invalid_argument("MaskBitmap: negative dimensions");
    }
    bits_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                 fill ? 1 : 0);
}

MaskBitmap& MaskBitmap::operator|=(const MaskBitmap& other) {
    if (other.width_ != width_ || other.height_ != height_) {
        throw std::invalid_argument("MaskBitmap: union of masks with different sizes");
    }
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        bits_[i] |= other.bits_[i];
    }
    return *this;
}

bool is_subset(const MaskBitmap& inner, const MaskBitmap& outer) {
    if (inner.width() != outer.width() || inner.height() != outer.height()) {
        return false;
    }
    const auto& a = inner.bits();
    const auto& b = outer.bits();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && !b[i]) return false;
    }
    return true;
}

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) {
        throw std::invalid_argument("RgbImage: negative dimensions");
    }
    data_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

}  // namespace maskopt

namespace maskopt {

int count_components(const MaskBitmap& mask) {
    const int w = mask.width();
    const int h = mask.height();
    std::vector<std::uint8_t> seen(mask.size(), 0);
    std::vector<int> stack;
    int count = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t start = static_cast<std::size_t>(y) * w + x;
            if (!mask.bits()[start] || seen[start]) continue;
            ++count;
            seen[start] = 1;
            stack.push_back(static_cast<int>(start));
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                const int cx = cur % w;
                const int cy = cur / w;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t n = static_cast<std::size_t>(ny) * w + nx;
                        if (mask.bits()[n] && !seen[n]) {
                            seen[n] = 1;
                            stack.push_back(static_cast<int>(n));
                        }
                    }
                }
            }
        }
    }
    return count;
}

}  // namespace maskopt
