#include "maskopt/harness.hpp"

#include <cmath>

#include "maskopt/geometry.hpp"
#include "maskopt/image_io.hpp"
#include "maskopt/stroke.hpp"

namespace maskopt {

MaskBitmap render_mask(const BenchmarkItem& item, ModelType model, const ParamPoint& point) {
    if (model == ModelType::type1) {
        return rasterize_type1(item.boxes, to_type1(point), item.original.width(),
                               item.original.height());
    }
    if (!item.processed) {
        throw BenchmarkError(item.id, "processed", "type2 masks need a stroke-removed image");
    }
    return type2_mask(ImagePair{item.original, *item.processed}, to_type2(point));
}

double score_point(std::span<const BenchmarkItem> items, const ParamPoint& point, ModelType model,
                   Evaluator& evaluator, const ScoreOptions& options) {
    const ParamSpace space = ParamSpace::for_model(model);
    space.check(point);
    if (items.empty()) throw std::invalid_argument("score_point: no benchmark items");

    std::vector<MaskBitmap> masks;
    masks.reserve(items.size());
    for (const BenchmarkItem& item : items) masks.push_back(render_mask(item, model, point));

    EvaluationRequest request;
    request.study_id = options.study_id;
    request.point = protocol::point_to_json(space, point);
    const bool write = evaluator.needs_mask_files() || !options.mask_dir.empty();
    if (write && options.mask_dir.empty()) {
        throw std::invalid_argument("score_point: evaluator reads mask files but no mask directory is set");
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
        MaskedPair pair{&items[i], &masks[i], {}};
        if (write) {
            pair.mask_path = std::filesystem::absolute(options.mask_dir / (items[i].id + ".png"));
            save_mask(pair.mask_path, masks[i]);
        }
        request.pairs.push_back(std::move(pair));
    }
    const EvaluationResponse response = evaluator.evaluate(request);
    if (!std::isfinite(response.score)) {
        throw EvaluatorError("evaluator returned a non-finite score", request.point);
    }
    return response.score;
}

}  // namespace maskopt
