#pragma once

// Type-2 masks: colour-distance thresholding of an original image against a
// stroke-removed rendition, followed by signed iterated square morphology.

#include "maskopt/raster.hpp"

namespace maskopt {

struct Type2Params {
    static constexpr int kMinThres = 1;
    static constexpr int kMaxThres = 100;
    static constexpr int kMinTimes = -5;
    static constexpr int kMaxTimes = 5;

    int t_thres = 35;
    int t_times = 0;
    int t_kernel = 1;

    void validate() const;
};

/// Original image plus its stroke-removed rendition (same size).
struct ImagePair {
    RgbImage original;
    RgbImage processed;
};

/// Bit is set iff the Euclidean RGB distance between the two pixels is
/// strictly greater than `t_thres`.
MaskBitmap threshold_mask(const ImagePair& pair, int t_thres);

/// Square structuring element of side `kernel`, pixels outside the canvas
/// read as unset. Positive `times` dilates, negative erodes, |times| rounds.
MaskBitmap morphology(const MaskBitmap& mask, int times, int kernel);

MaskBitmap dilate(const MaskBitmap& mask, int kernel);
MaskBitmap erode(const MaskBitmap& mask, int kernel);

/// morphology(threshold_mask(pair, t_thres), t_times, t_kernel)
MaskBitmap type2_mask(const ImagePair& pair, const Type2Params& params);

}  // namespace maskopt
