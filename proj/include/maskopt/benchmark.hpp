#pragma once

// Benchmark manifests and box annotations.
//
// Manifest: {"items": [{"id", "original", "ground_truth", "boxes",
//                       "processed"?, "stroke_truth"?}, ...]}
// Relative paths resolve against the manifest's directory.
//
// Box annotations: one object per image (or an array of them),
//   {"image": id, "characters": [{"cx","cy","w","h"}...], "words": [...],
//    "paragraphs": [...]}
// in pixels at the working resolution.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "maskopt/geometry.hpp"
#include "maskopt/raster.hpp"

namespace maskopt {

inline constexpr int kWorkingSize = 512;

struct BenchmarkItem {
    std::string id;
    std::filesystem::path original_path;
    std::filesystem::path ground_truth_path;
    std::filesystem::path boxes_path;
    std::optional<std::filesystem::path> processed_path;
    std::optional<std::filesystem::path> stroke_truth_path;

    // Loaded at the working resolution.
    RgbImage original;
    RgbImage ground_truth;
    std::vector<BaseBox> boxes;
    std::optional<RgbImage> processed;
    std::optional<MaskBitmap> stroke_truth;
};

/// Names the offending item and field.
class BenchmarkError : public std::runtime_error {
public:
    BenchmarkError(const std::string& item, const std::string& field, const std::string& what)
        : std::runtime_error("benchmark item '" + item + "', field '" + field + "': " + what),
          item_(item), field_(field) {}
    const std::string& item() const noexcept { return item_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::string item_;
    std::string field_;
};

std::vector<BenchmarkItem> load_benchmark(const std::filesystem::path& manifest,
                                          int working_size = kWorkingSize);

/// Boxes of `image_id` from an annotation file. A file holding a single
/// object is used regardless of its "image" field.
std::vector<BaseBox> load_boxes(const std::filesystem::path& path, const std::string& image_id);

void save_boxes(const std::filesystem::path& path, const std::string& image_id,
                const std::vector<BaseBox>& boxes);

}  // namespace maskopt
