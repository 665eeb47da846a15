#pragma once

// Type-1 masks: unions of scaled superellipses over chunk-level text boxes.
//
// A box with center (cx, cy) and size (w, h) contributes every pixel whose
// center (px + 0.5, py + 0.5) satisfies
//
//     |2dx / (scale w)|^p + |2dy / (scale h)|^p <= 1,   p = 2 / roundness
//
// for roundness > 0, and the closed axis-aligned rectangle of size
// (scale w) x (scale h) for roundness == 0.

#include <span>
#include <vector>

#include "maskopt/raster.hpp"

namespace maskopt {

enum class ChunkLevel : int { character = 0, word = 1, paragraph = 2 };

const char* to_string(ChunkLevel level);

struct BaseBox {
    double center_x = 0.0;
    double center_y = 0.0;
    double width_a = 0.0;
    double height_b = 0.0;
    ChunkLevel chunk_level = ChunkLevel::character;

    /// Throws std::invalid_argument on non-positive size or a bad level.
    void validate() const;
};

struct Type1Params {
    static constexpr double kMinScale = 1.0;
    static constexpr double kMaxScale = 1.5;
    static constexpr double kMinRound = 0.0;
    static constexpr double kMaxRound = 1.0;

    ChunkLevel s_chunk = ChunkLevel::character;
    double s_scale = 1.0;
    double s_round = 0.0;

    void validate() const;
};

/// Rasterizes the union of the boxes at level `params.s_chunk`. Boxes at other
/// levels are skipped. Shapes are clipped to the canvas.
MaskBitmap rasterize_type1(std::span<const BaseBox> boxes, const Type1Params& params,
                           int width, int height);

/// Number of set bits.
long mask_area(const MaskBitmap& mask);

/// Hole colour written into masked pixels by apply_mask.
inline constexpr Rgb kHoleValue{0, 0, 0};

/// Copies `image`, replacing masked pixels with kHoleValue.
RgbImage apply_mask(const RgbImage& image, const MaskBitmap& mask);

}  // namespace maskopt
