#include "maskopt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace maskopt {

const char* to_string(ChunkLevel level) {
    switch (level) {
        case ChunkLevel::character: return "character";
        case ChunkLevel::word: return "word";
        case ChunkLevel::paragraph: return "paragraph";
    }
    return "unknown";
}

void BaseBox::validate() const {
    if (!(width_a > 0.0) || !(height_b > 0.0)) {
        throw std::invalid_argument("BaseBox: width and height must be positive");
    }
    const int level = static_cast<int>(chunk_level);
    if (level < 0 || level > 2) {
        throw std::invalid_argument("BaseBox: chunk level out of range");
    }
    if (!std::isfinite(center_x) || !std::isfinite(center_y)) {
        throw std::invalid_argument("BaseBox: non-finite center");
    }
}

void Type1Params::validate() const {
    const int level = static_cast<int>(s_chunk);
    if (level < 0 || level > 2) {
        throw std::invalid_argument("Type1Params: s_chunk must be 0, 1 or 2");
    }
    if (!(s_scale >= kMinScale && s_scale <= kMaxScale)) {
        throw std::invalid_argument("Type1Params: s_scale outside [1.0, 1.5]: " +
                                    std::to_string(s_scale));
    }
    if (!(s_round >= kMinRound && s_round <= kMaxRound)) {
        throw std::invalid_argument("Type1Params: s_round outside [0.0, 1.0]: " +
                                    std::to_string(s_round));
    }
}

namespace {

// u, v are the offsets normalised by the scaled semi-axes, so the shape is
// u^p + v^p <= 1. Written as m^p * ((u/m)^p + (v/m)^p) <= 1 with m = max(u, v)
// so that no power of a value above one is ever taken.
bool inside_superellipse(double u, double v, double order) {
    const double m = std::max(u, v);
    if (m > 1.0) return false;
    if (m == 0.0) return true;
    const double sum = std::pow(u / m, order) + std::pow(v / m, order);
    return std::pow(m, order) * sum <= 1.0;
}

void paint_box(const BaseBox& box, const Type1Params& params, MaskBitmap& mask) {
    const double half_w = 0.5 * params.s_scale * box.width_a;
    const double half_h = 0.5 * params.s_scale * box.height_b;

    // Pixel px covers centre px + 0.5; only centres within the half extents can hit.
    const int x0 = std::max(0, static_cast<int>(std::floor(box.center_x - half_w - 0.5)));
    const int x1 = std::min(mask.width() - 1,
                            static_cast<int>(std::ceil(box.center_x + half_w - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::floor(box.center_y - half_h - 0.5)));
    const int y1 = std::min(mask.height() - 1,
                            static_cast<int>(std::ceil(box.center_y + half_h - 0.5)));
    if (x0 > x1 || y0 > y1) return;

    const bool rectangle = params.s_round == 0.0;
    const double order = rectangle ? 0.0 : 2.0 / params.s_round;

    for (int py = y0; py <= y1; ++py) {
        const double dy = std::abs(py + 0.5 - box.center_y);
        if (dy > half_h) continue;
        const double v = dy / half_h;
        for (int px = x0; px <= x1; ++px) {
            const double dx = std::abs(px + 0.5 - box.center_x);
            if (dx > half_w) continue;
            if (rectangle || inside_superellipse(dx / half_w, v, order)) {
                mask.set(px, py);
            }
        }
    }
}

}  // namespace

MaskBitmap rasterize_type1(std::span<const BaseBox> boxes, const Type1Params& params,
                           int width, int height) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("rasterize_type1: canvas dimensions must be positive");
    }
    params.validate();
    MaskBitmap mask(width, height);
    for (const BaseBox& box : boxes) {
        box.validate();
        if (box.chunk_level != params.s_chunk) continue;
        paint_box(box, params, mask);
    }
    return mask;
}

long mask_area(const MaskBitmap& mask) {
    return std::accumulate(mask.bits().begin(), mask.bits().end(), 0L,
                           [](long acc, std::uint8_t b) { return acc + (b ? 1 : 0); });
}

RgbImage apply_mask(const RgbImage& image, const MaskBitmap& mask) {
    if (image.width() != mask.width() || image.height() != mask.height()) {
        throw std::invalid_argument("apply_mask: image is " + std::to_string(image.width()) +
                                    "x" + std::to_string(image.height()) + " but mask is " +
                                    std::to_string(mask.width()) + "x" +
                                    std::to_string(mask.height()));
    }
    RgbImage out = image;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask.at(x, y)) out.set(x, y, kHoleValue);
        }
    }
    return out;
}

}  // namespace maskopt
