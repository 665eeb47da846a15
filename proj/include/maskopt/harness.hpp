#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "maskopt/benchmark.hpp"
#include "maskopt/evaluator.hpp"
#include "maskopt/param_space.hpp"

namespace maskopt {

/// Mask for one benchmark item under the given model and point.
MaskBitmap render_mask(const BenchmarkItem& item, ModelType model, const ParamPoint& point);

struct ScoreOptions {
    std::string study_id = "study";
    /// Where masks are written for evaluators that read files; each call
    /// overwrites <mask_dir>/<item id>.png.
    std::filesystem::path mask_dir;
};

/// Renders every item's mask, hands the whole batch to the evaluator once and
/// returns its score.
double score_point(std::span<const BenchmarkItem> items, const ParamPoint& point, ModelType model,
                   Evaluator& evaluator, const ScoreOptions& options = {});

}  // namespace maskopt
