#include "maskopt/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "maskopt/benchmark.hpp"
#include "maskopt/image_io.hpp"

namespace maskopt {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
    }
    int integer(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }

private:
    std::mt19937_64 engine_;
};

std::uint8_t clamp_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct Rect {
    double x0, y0, x1, y1;
    void include(const Rect& r) {
        x0 = std::min(x0, r.x0);
        y0 = std::min(y0, r.y0);
        x1 = std::max(x1, r.x1);
        y1 = std::max(y1, r.y1);
    }
    BaseBox to_box(ChunkLevel level) const {
        return {(x0 + x1) / 2, (y0 + y1) / 2, x1 - x0, y1 - y0, level};
    }
};

// Draws one glyph into `ink` with its top-left ink pixel at (gx, gy).
void draw_glyph(MaskBitmap& ink, int gx, int gy, int w, int h, int stroke, Rng& rng) {
    auto fill = [&](int x0, int y0, int x1, int y1) {
        for (int y = std::max(0, y0); y < std::min(ink.height(), y1); ++y) {
            for (int x = std::max(0, x0); x < std::min(ink.width(), x1); ++x) ink.set(x, y);
        }
    };
    fill(gx, gy, gx + stroke, gy + h);              // left
    fill(gx + w - stroke, gy, gx + w, gy + h);      // right
    if (rng.chance(0.6)) fill(gx, gy, gx + w, gy + stroke);          // top
    if (rng.chance(0.6)) fill(gx, gy + h - stroke, gx + w, gy + h);  // bottom
    if (rng.chance(0.5)) {
        const int mid = gy + (h - stroke) / 2;
        fill(gx, mid, gx + w, mid + stroke);
    }
}

}  // namespace

std::filesystem::path generate_synthetic_benchmark(const std::filesystem::path& dir, int count,
                                                   std::uint64_t seed,
                                                   const SyntheticOptions& options) {
    if (count < 0) throw std::invalid_argument("generate_synthetic_benchmark: negative count");
    std::filesystem::create_directories(dir);
    const int size = options.size;
    nlohmann::ordered_json manifest;
    manifest["items"] = nlohmann::ordered_json::array();

    for (int n = 0; n < count; ++n) {
        Rng rng(seed * 1000003ULL + static_cast<std::uint64_t>(n));
        char idbuf[32];
        std::snprintf(idbuf, sizeof idbuf, "doc%03d", n);
        const std::string id = idbuf;

        // Background: smooth gradient plus per-pixel noise.
        const double base[3] = {rng.uniform(200, 240), rng.uniform(200, 240), rng.uniform(200, 240)};
        const double gx = rng.uniform(-12, 12);
        const double gy = rng.uniform(-12, 12);
        RgbImage clean(size, size);
        RgbImage truth(size, size);
        for (int y = 0; y < size; ++y) {
            for (int x = 0; x < size; ++x) {
                const double t = gx * x / size + gy * y / size;
                Rgb c{clamp_byte(base[0] + t), clamp_byte(base[1] + t), clamp_byte(base[2] + t)};
                clean.set(x, y, c);
                const double noise = rng.uniform(-3, 3);
                truth.set(x, y, {clamp_byte(c.r + noise), clamp_byte(c.g + noise), clamp_byte(c.b + noise)});
            }
        }

        MaskBitmap ink(size, size);
        std::vector<BaseBox> boxes;
        const int margin = 20;
        int y = margin + rng.integer(0, 8);
        while (true) {
            const int lines = rng.integer(2, 4);
            const int h = rng.integer(24, 32);
            if (y + lines * (h + 14) > size - margin) break;
            Rect para{1e9, 1e9, -1e9, -1e9};
            for (int l = 0; l < lines; ++l) {
                int x = margin + rng.integer(0, 16);
                while (true) {
                    const int chars = rng.integer(2, 5);
                    std::vector<int> widths(static_cast<std::size_t>(chars));
                    int total = 0;
                    for (int& w : widths) {
                        w = rng.integer(20, 30);
                        total += w + 7;
                    }
                    if (x + total > size - margin) break;
                    Rect word{1e9, 1e9, -1e9, -1e9};
                    for (int w : widths) {
                        draw_glyph(ink, x, y, w, h, rng.integer(4, 6), rng);
                        // Pixel centres of the ink span [x + 0.5, x + w - 0.5].
                        const double f = rng.uniform(options.min_underestimate, options.max_underestimate);
                        const double cx = x + w / 2.0;
                        const double cy = y + h / 2.0;
                        const double bw = (w - 1) / f;
                        const double bh = (h - 1) / f;
                        Rect ch{cx - bw / 2, cy - bh / 2, cx + bw / 2, cy + bh / 2};
                        boxes.push_back(ch.to_box(ChunkLevel::character));
                        word.include(ch);
                        x += w + 7;
                    }
                    boxes.push_back(word.to_box(ChunkLevel::word));
                    para.include(word);
                    x += 16;
                }
                y += h + 14;
            }
            if (para.x1 > para.x0) boxes.push_back(para.to_box(ChunkLevel::paragraph));
            y += 16;
        }

        // Text colour with a faint one-pixel halo around strokes.
        const double text[3] = {rng.uniform(20, 90), rng.uniform(20, 90), rng.uniform(20, 90)};
        const double halo = rng.uniform(0.25, 0.45);
        RgbImage original = truth;
        for (int py = 0; py < size; ++py) {
            for (int px = 0; px < size; ++px) {
                const Rgb bg = truth.at(px, py);
                if (ink.at(px, py)) {
                    original.set(px, py, {clamp_byte(text[0]), clamp_byte(text[1]), clamp_byte(text[2])});
                    continue;
                }
                bool near = false;
                for (int dy = -1; dy <= 1 && !near; ++dy) {
                    for (int dx = -1; dx <= 1 && !near; ++dx) {
                        const int nx = px + dx, ny = py + dy;
                        near = nx >= 0 && ny >= 0 && nx < size && ny < size && ink.at(nx, ny);
                    }
                }
                if (near) {
                    original.set(px, py, {clamp_byte(bg.r + halo * (text[0] - bg.r)),
                                          clamp_byte(bg.g + halo * (text[1] - bg.g)),
                                          clamp_byte(bg.b + halo * (text[2] - bg.b))});
                }
            }
        }

        const std::string original_name = id + "_original.png";
        const std::string truth_name = id + "_ground_truth.png";
        const std::string processed_name = id + "_processed.png";
        const std::string strokes_name = id + "_strokes.png";
        const std::string boxes_name = id + "_boxes.json";
        save_rgb(dir / original_name, original);
        save_rgb(dir / truth_name, truth);
        // Stroke-removed rendition: the noiseless background.
        save_rgb(dir / processed_name, clean);
        save_mask(dir / strokes_name, ink);
        save_boxes(dir / boxes_name, id, boxes);

        manifest["items"].push_back({{"id", id},
                                     {"original", original_name},
                                     {"ground_truth", truth_name},
                                     {"boxes", boxes_name},
                                     {"processed", processed_name},
                                     {"stroke_truth", strokes_name}});
    }

    const auto path = dir / "manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << manifest.dump(2) << '\n';
    return path;
}

}  // namespace maskopt
