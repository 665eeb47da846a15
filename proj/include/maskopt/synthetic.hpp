#pragma once

// Generated document benchmark with planted text-stroke truth, for
// exercising the optimisation loop without an inpainting model.
//
// Glyphs are box-drawing letters whose strokes reach the corners of their
// ink rectangle. The recorded character boxes under-estimate the ink extent
// by a per-glyph factor drawn from [min_underestimate, max_underestimate],
// so the mask that exactly covers the strokes is a rectangle scaled by
// max_underestimate. Word and paragraph boxes enclose their character boxes.

#include <cstdint>
#include <filesystem>

namespace maskopt {

struct SyntheticOptions {
    int size = 512;
    double min_underestimate = 1.35;
    double max_underestimate = 1.37;
};

/// Writes `count` items plus manifest.json into `dir` and returns the
/// manifest path. Output depends only on (count, seed, options).
std::filesystem::path generate_synthetic_benchmark(const std::filesystem::path& dir, int count,
                                                   std::uint64_t seed,
                                                   const SyntheticOptions& options = {});

}  // namespace maskopt
