#include "maskopt/image_io.hpp"

#include <cstring>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace maskopt {

namespace {

cv::Mat to_bgr(const RgbImage& image) {
    cv::Mat rgb(image.height(), image.width(), CV_8UC3,
                const_cast<std::uint8_t*>(image.data().data()));
    cv::Mat bgr;
    cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
    return bgr;
}

RgbImage from_bgr(const cv::Mat& bgr) {
    cv::Mat rgb;
    cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
    RgbImage out(rgb.cols, rgb.rows);
    for (int y = 0; y < rgb.rows; ++y) {
        std::memcpy(out.data().data() + static_cast<std::size_t>(y) * rgb.cols * 3,
                    rgb.ptr<std::uint8_t>(y), static_cast<std::size_t>(rgb.cols) * 3);
    }
    return out;
}

cv::Mat to_gray(const MaskBitmap& mask) {
    cv::Mat gray(mask.height(), mask.width(), CV_8UC1);
    for (int y = 0; y < mask.height(); ++y) {
        auto* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < mask.width(); ++x) row[x] = mask.at(x, y) ? 255 : 0;
    }
    return gray;
}

MaskBitmap from_gray(const cv::Mat& gray) {
    MaskBitmap mask(gray.cols, gray.rows);
    for (int y = 0; y < gray.rows; ++y) {
        const auto* row = gray.ptr<std::uint8_t>(y);
        for (int x = 0; x < gray.cols; ++x) mask.set(x, y, row[x] >= 128);
    }
    return mask;
}

void write(const std::filesystem::path& path, const cv::Mat& mat) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    if (!cv::imwrite(path.string(), mat)) {
        throw std::runtime_error("cannot write image " + path.string());
    }
}

}  // namespace

RgbImage load_rgb(const std::filesystem::path& path) {
    const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (bgr.empty()) throw std::runtime_error("cannot read image " + path.string());
    return from_bgr(bgr);
}

void save_rgb(const std::filesystem::path& path, const RgbImage& image) {
    write(path, to_bgr(image));
}

MaskBitmap load_mask(const std::filesystem::path& path) {
    const cv::Mat gray = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
    if (gray.empty()) throw std::runtime_error("cannot read mask " + path.string());
    return from_gray(gray);
}

void save_mask(const std::filesystem::path& path, const MaskBitmap& mask) {
    write(path, to_gray(mask));
}

RgbImage resize_rgb(const RgbImage& image, int width, int height) {
    if (image.width() == width && image.height() == height) return image;
    cv::Mat out;
    cv::resize(to_bgr(image), out, cv::Size(width, height), 0, 0, cv::INTER_AREA);
    return from_bgr(out);
}

MaskBitmap resize_mask(const MaskBitmap& mask, int width, int height) {
    if (mask.width() == width && mask.height() == height) return mask;
    cv::Mat out;
    cv::resize(to_gray(mask), out, cv::Size(width, height), 0, 0, cv::INTER_NEAREST);
    return from_gray(out);
}

}  // namespace maskopt
