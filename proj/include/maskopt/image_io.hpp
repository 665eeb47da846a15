#pragma once

#include <filesystem>

#include "maskopt/raster.hpp"

namespace maskopt {

RgbImage load_rgb(const std::filesystem::path& path);
void save_rgb(const std::filesystem::path& path, const RgbImage& image);

/// Single-channel 8-bit image; pixels >= 128 read as set.
MaskBitmap load_mask(const std::filesystem::path& path);
/// Writes 255 for set bits and 0 otherwise.
void save_mask(const std::filesystem::path& path, const MaskBitmap& mask);

/// Area-averaging resize; no-op when the size already matches.
RgbImage resize_rgb(const RgbImage& image, int width, int height);
/// Nearest-neighbour resize; no-op when the size already matches.
MaskBitmap resize_mask(const MaskBitmap& mask, int width, int height);

}  // namespace maskopt
