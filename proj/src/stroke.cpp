#include "maskopt/stroke.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace maskopt {

namespace {

void check_kernel(int kernel) {
    if (kernel != 1 && kernel != 3 && kernel != 5 && kernel != 7) {
        throw std::invalid_argument("morphology: kernel must be one of 1, 3, 5, 7 (got " +
                                    std::to_string(kernel) + ")");
    }
}

// One pass of a 1-D window of radius r along rows (horizontal) or columns.
// For dilation the output is set when any bit in the window is set; for
// erosion when every in-canvas bit is set and the window stays inside the
// canvas. Running counts keep it O(1) per pixel.
MaskBitmap window_pass(const MaskBitmap& in, int r, bool horizontal, bool dilation) {
    const int w = in.width();
    const int h = in.height();
    MaskBitmap out(w, h);
    const int lines = horizontal ? h : w;
    const int len = horizontal ? w : h;
    const int window = 2 * r + 1;
    auto get = [&](int line, int pos) {
        return horizontal ? in.at(pos, line) : in.at(line, pos);
    };
    for (int line = 0; line < lines; ++line) {
        int count = 0;
        for (int pos = 0; pos < std::min(r, len); ++pos) count += get(line, pos) ? 1 : 0;
        for (int pos = 0; pos < len; ++pos) {
            const int enter = pos + r;
            const int leave = pos - r - 1;
            if (enter < len) count += get(line, enter) ? 1 : 0;
            if (leave >= 0) count -= get(line, leave) ? 1 : 0;
            const bool bit = dilation ? count > 0 : count == window;
            if (bit) {
                if (horizontal) {
                    out.set(pos, line);
                } else {
                    out.set(line, pos);
                }
            }
        }
    }
    return out;
}

MaskBitmap square_pass(const MaskBitmap& mask, int kernel, bool dilation) {
    const int r = kernel / 2;
    return window_pass(window_pass(mask, r, true, dilation), r, false, dilation);
}

}  // namespace

void Type2Params::validate() const {
    if (t_thres < kMinThres || t_thres > kMaxThres) {
        throw std::invalid_argument("Type2Params: t_thres outside {1..100}: " +
                                    std::to_string(t_thres));
    }
    if (t_times < kMinTimes || t_times > kMaxTimes) {
        throw std::invalid_argument("Type2Params: t_times outside {-5..5}: " +
                                    std::to_string(t_times));
    }
    check_kernel(t_kernel);
}

MaskBitmap threshold_mask(const ImagePair& pair, int t_thres) {
    const RgbImage& a = pair.original;
    const RgbImage& b = pair.processed;
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("threshold_mask: original and processed sizes differ");
    }
    if (t_thres < Type2Params::kMinThres || t_thres > Type2Params::kMaxThres) {
        throw std::invalid_argument("threshold_mask: t_thres outside {1..100}: " +
                                    std::to_string(t_thres));
    }
    // Integer squared distances avoid a sqrt and any rounding at the boundary.
    const long limit = static_cast<long>(t_thres) * t_thres;
    MaskBitmap mask(a.width(), a.height());
    const auto& pa = a.data();
    const auto& pb = b.data();
    auto& bits = mask.bits();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        long d2 = 0;
        for (std::size_t c = 0; c < 3; ++c) {
            const long d = static_cast<long>(pa[3 * i + c]) - static_cast<long>(pb[3 * i + c]);
            d2 += d * d;
        }
        bits[i] = d2 > limit ? 1 : 0;
    }
    return mask;
}

MaskBitmap dilate(const MaskBitmap& mask, int kernel) {
    check_kernel(kernel);
    return square_pass(mask, kernel, true);
}

MaskBitmap erode(const MaskBitmap& mask, int kernel) {
    check_kernel(kernel);
    return square_pass(mask, kernel, false);
}

MaskBitmap morphology(const MaskBitmap& mask, int times, int kernel) {
    check_kernel(kernel);
    if (times < Type2Params::kMinTimes || times > Type2Params::kMaxTimes) {
        throw std::invalid_argument("morphology: times outside {-5..5}: " +
                                    std::to_string(times));
    }
    if (times == 0 || kernel == 1) return mask;
    MaskBitmap out = mask;
    for (int i = 0; i < std::abs(times); ++i) {
        out = square_pass(out, kernel, times > 0);
    }
    return out;
}

MaskBitmap type2_mask(const ImagePair& pair, const Type2Params& params) {
    params.validate();
    return morphology(threshold_mask(pair, params.t_thres), params.t_times, params.t_kernel);
}

}  // namespace maskopt
