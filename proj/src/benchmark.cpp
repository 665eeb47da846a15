#include "maskopt/benchmark.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "maskopt/image_io.hpp"

namespace maskopt {

using json = nlohmann::ordered_json;

namespace {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n") == std::string::npos;
}

std::vector<BaseBox> boxes_from_json(const json& doc, const std::filesystem::path& path) {
    static constexpr std::pair<const char*, ChunkLevel> kLevels[] = {
        {"characters", ChunkLevel::character},
        {"words", ChunkLevel::word},
        {"paragraphs", ChunkLevel::paragraph},
    };
    std::vector<BaseBox> out;
    for (const auto& [key, level] : kLevels) {
        if (!doc.contains(key)) continue;
        for (const json& b : doc.at(key)) {
            BaseBox box;
            box.center_x = b.at("cx").get<double>();
            box.center_y = b.at("cy").get<double>();
            box.width_a = b.at("w").get<double>();
            box.height_b = b.at("h").get<double>();
            box.chunk_level = level;
            try {
                box.validate();
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error(path.string() + ": " + e.what());
            }
            out.push_back(box);
        }
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative()) path = base / path;
    return std::filesystem::absolute(path).lexically_normal();
}

}  // namespace

std::vector<BaseBox> load_boxes(const std::filesystem::path& path, const std::string& image_id) {
    json doc;
    try {
        doc = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    if (doc.is_object()) return boxes_from_json(doc, path);
    if (doc.is_array()) {
        for (const json& entry : doc) {
            if (entry.value("image", std::string{}) == image_id) return boxes_from_json(entry, path);
        }
        throw std::runtime_error(path.string() + ": no annotation for image '" + image_id + "'");
    }
    throw std::runtime_error(path.string() + ": expected an object or an array");
}

void save_boxes(const std::filesystem::path& path, const std::string& image_id,
                const std::vector<BaseBox>& boxes) {
    json doc;
    doc["image"] = image_id;
    json levels[3] = {json::array(), json::array(), json::array()};
    for (const BaseBox& b : boxes) {
        levels[static_cast<int>(b.chunk_level)].push_back(
            {{"cx", b.center_x}, {"cy", b.center_y}, {"w", b.width_a}, {"h", b.height_b}});
    }
    doc["characters"] = levels[0];
    doc["words"] = levels[1];
    doc["paragraphs"] = levels[2];
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << doc.dump() << '\n';
}

std::vector<BenchmarkItem> load_benchmark(const std::filesystem::path& manifest, int working_size) {
    const std::string text = read_text(manifest);
    if (blank(text)) return {};
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(manifest.string() + ": " + e.what());
    }
    const json* entries = &doc;
    if (doc.is_object()) {
        if (!doc.contains("items")) throw std::runtime_error(manifest.string() + ": missing 'items'");
        entries = &doc.at("items");
    }
    if (!entries->is_array()) throw std::runtime_error(manifest.string() + ": 'items' must be an array");

    const auto base = std::filesystem::absolute(manifest).parent_path();
    std::vector<BenchmarkItem> items;
    std::size_t index = 0;
    for (const json& e : *entries) {
        const std::string label = e.is_object() && e.contains("id") && e["id"].is_string()
                                      ? e["id"].get<std::string>()
                                      : "#" + std::to_string(index);
        ++index;
        if (!e.is_object()) throw BenchmarkError(label, "(entry)", "entry must be an object");
        auto required = [&](const char* key) {
            if (!e.contains(key) || !e[key].is_string()) {
                throw BenchmarkError(label, key, "missing or not a string");
            }
            return resolve(base, e[key].get<std::string>());
        };
        auto optional = [&](const char* key) -> std::optional<std::filesystem::path> {
            if (!e.contains(key) || e[key].is_null()) return std::nullopt;
            if (!e[key].is_string()) throw BenchmarkError(label, key, "not a string");
            return resolve(base, e[key].get<std::string>());
        };
        auto must_exist = [&](const std::filesystem::path& p, const char* key) {
            if (!std::filesystem::is_regular_file(p)) {
                throw BenchmarkError(label, key, "file not found: " + p.string());
            }
        };

        BenchmarkItem item;
        if (!e.contains("id") || !e["id"].is_string()) {
            throw BenchmarkError(label, "id", "missing or not a string");
        }
        item.id = label;
        item.original_path = required("original");
        item.ground_truth_path = required("ground_truth");
        item.boxes_path = required("boxes");
        item.processed_path = optional("processed");
        item.stroke_truth_path = optional("stroke_truth");
        must_exist(item.original_path, "original");
        must_exist(item.ground_truth_path, "ground_truth");
        must_exist(item.boxes_path, "boxes");
        if (item.processed_path) must_exist(*item.processed_path, "processed");
        if (item.stroke_truth_path) must_exist(*item.stroke_truth_path, "stroke_truth");

        // Every raster must share the original's native size; boxes are given
        // in native pixels and follow the resize to the working resolution.
        int native_w = 0, native_h = 0;
        auto load_image = [&](const std::filesystem::path& p, const char* key) {
            RgbImage img;
            try {
                img = load_rgb(p);
            } catch (const std::exception& ex) {
                throw BenchmarkError(label, key, ex.what());
            }
            if (native_w == 0) {
                native_w = img.width();
                native_h = img.height();
            } else if (img.width() != native_w || img.height() != native_h) {
                throw BenchmarkError(label, key,
                                     "size " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                                         " differs from original " + std::to_string(native_w) + "x" +
                                         std::to_string(native_h));
            }
            return resize_rgb(img, working_size, working_size);
        };
        item.original = load_image(item.original_path, "original");
        item.ground_truth = load_image(item.ground_truth_path, "ground_truth");
        if (item.processed_path) item.processed = load_image(*item.processed_path, "processed");
        if (item.stroke_truth_path) {
            MaskBitmap truth;
            try {
                truth = load_mask(*item.stroke_truth_path);
            } catch (const std::exception& ex) {
                throw BenchmarkError(label, "stroke_truth", ex.what());
            }
            if (truth.width() != native_w || truth.height() != native_h) {
                throw BenchmarkError(label, "stroke_truth", "size differs from original");
            }
            item.stroke_truth = resize_mask(truth, working_size, working_size);
        }
        try {
            item.boxes = load_boxes(item.boxes_path, item.id);
        } catch (const std::exception& ex) {
            throw BenchmarkError(label, "boxes", ex.what());
        }
        const double sx = static_cast<double>(working_size) / native_w;
        const double sy = static_cast<double>(working_size) / native_h;
        for (BaseBox& b : item.boxes) {
            b.center_x *= sx;
            b.width_a *= sx;
            b.center_y *= sy;
            b.height_b *= sy;
        }
        items.push_back(std::move(item));
    }
    return items;
}

}  // namespace maskopt
