#include "maskopt/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maskopt {

const char* to_string(DimensionKind kind) {
    switch (kind) {
        case DimensionKind::categorical: return "categorical";
        case DimensionKind::integer: return "integer";
        case DimensionKind::continuous: return "continuous";
    }
    return "unknown";
}

const char* to_string(ModelType type) {
    return type == ModelType::type1 ? "type1" : "type2";
}

ModelType parse_model_type(const std::string& text) {
    if (text == "type1" || text == "1") return ModelType::type1;
    if (text == "type2" || text == "2") return ModelType::type2;
    throw std::invalid_argument("unknown model type '" + text + "' (expected type1 or type2)");
}

int Dimension::encoded_width() const {
    return kind == DimensionKind::categorical ? static_cast<int>(choices.size()) : 1;
}

bool Dimension::contains(double value) const {
    if (!std::isfinite(value)) return false;
    switch (kind) {
        case DimensionKind::categorical:
            return std::find(choices.begin(), choices.end(), value) != choices.end();
        case DimensionKind::integer:
            return value == std::round(value) && value >= lower && value <= upper;
        case DimensionKind::continuous:
            return value >= lower && value <= upper;
    }
    return false;
}

ParamSpace::ParamSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
    for (const Dimension& d : dims_) {
        if (d.kind == DimensionKind::categorical && d.choices.empty()) {
            throw std::invalid_argument("ParamSpace: categorical dimension '" + d.name +
                                        "' has no choices");
        }
        if (d.kind != DimensionKind::categorical && !(d.upper > d.lower)) {
            throw std::invalid_argument("ParamSpace: dimension '" + d.name +
                                        "' has an empty range");
        }
        encoded_size_ += d.encoded_width();
    }
}

ParamSpace ParamSpace::type1() {
    return ParamSpace({
        {"s_chunk", DimensionKind::categorical, 0, 0, {0, 1, 2}},
        {"s_scale", DimensionKind::continuous, Type1Params::kMinScale, Type1Params::kMaxScale, {}},
        {"s_round", DimensionKind::continuous, Type1Params::kMinRound, Type1Params::kMaxRound, {}},
    });
}

ParamSpace ParamSpace::type2() {
    return ParamSpace({
        {"t_thres", DimensionKind::integer, Type2Params::kMinThres, Type2Params::kMaxThres, {}},
        {"t_times", DimensionKind::integer, Type2Params::kMinTimes, Type2Params::kMaxTimes, {}},
        {"t_kernel", DimensionKind::categorical, 0, 0, {1, 3, 5, 7}},
    });
}

ParamSpace ParamSpace::for_model(ModelType type) {
    return type == ModelType::type1 ? type1() : type2();
}

std::optional<std::size_t> ParamSpace::find(const std::string& name) const {
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (dims_[i].name == name) return i;
    }
    return std::nullopt;
}

std::vector<std::string> ParamSpace::names() const {
    std::vector<std::string> out;
    out.reserve(dims_.size());
    for (const Dimension& d : dims_) out.push_back(d.name);
    return out;
}

bool ParamSpace::contains(const ParamPoint& point) const {
    if (point.size() != dims_.size()) return false;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (!dims_[i].contains(point[i])) return false;
    }
    return true;
}

void ParamSpace::check(const ParamPoint& point) const {
    if (point.size() != dims_.size()) {
        throw std::invalid_argument("point has " + std::to_string(point.size()) +
                                    " values, space has " + std::to_string(dims_.size()));
    }
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        if (!dims_[i].contains(point[i])) {
            throw std::invalid_argument("value " + std::to_string(point[i]) +
                                        " outside the domain of " + dims_[i].name);
        }
    }
}

std::vector<double> ParamSpace::encode(const ParamPoint& point) const {
    check(point);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(encoded_size_));
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        const Dimension& d = dims_[i];
        if (d.kind == DimensionKind::categorical) {
            for (double c : d.choices) out.push_back(c == point[i] ? 1.0 : 0.0);
        } else {
            out.push_back((point[i] - d.lower) / (d.upper - d.lower));
        }
    }
    return out;
}

ParamPoint ParamSpace::decode(const std::vector<double>& encoded) const {
    if (encoded.size() != static_cast<std::size_t>(encoded_size_)) {
        throw std::invalid_argument("decode: encoded vector has wrong length");
    }
    ParamPoint point;
    point.reserve(dims_.size());
    std::size_t col = 0;
    for (const Dimension& d : dims_) {
        if (d.kind == DimensionKind::categorical) {
            std::size_t best = 0;
            for (std::size_t k = 1; k < d.choices.size(); ++k) {
                if (encoded[col + k] > encoded[col + best]) best = k;
            }
            point.push_back(d.choices[best]);
            col += d.choices.size();
            continue;
        }
        const double t = std::clamp(encoded[col++], 0.0, 1.0);
        double v = d.lower + t * (d.upper - d.lower);
        if (d.kind == DimensionKind::integer) v = std::round(v);
        point.push_back(std::clamp(v, d.lower, d.upper));
    }
    return point;
}

Type1Params to_type1(const ParamPoint& point) {
    ParamSpace::type1().check(point);
    Type1Params p;
    p.s_chunk = static_cast<ChunkLevel>(static_cast<int>(point[0]));
    p.s_scale = point[1];
    p.s_round = point[2];
    return p;
}

Type2Params to_type2(const ParamPoint& point) {
    ParamSpace::type2().check(point);
    Type2Params p;
    p.t_thres = static_cast<int>(point[0]);
    p.t_times = static_cast<int>(point[1]);
    p.t_kernel = static_cast<int>(point[2]);
    return p;
}

ParamPoint from_type1(const Type1Params& params) {
    return {static_cast<double>(static_cast<int>(params.s_chunk)), params.s_scale,
            params.s_round};
}

ParamPoint from_type2(const Type2Params& params) {
    return {static_cast<double>(params.t_thres), static_cast<double>(params.t_times),
            static_cast<double>(params.t_kernel)};
}

std::vector<ParamPoint> grid_init(ModelType type) {
    std::vector<std::vector<double>> axes;
    if (type == ModelType::type1) {
        axes = {{0, 1, 2}, {1.0, 1.25, 1.5}, {0.0, 0.5, 1.0}};
    } else {
        axes = {{15, 25, 35, 45, 55}, {-3, 0, 3}, {1, 7}};
    }
    std::vector<ParamPoint> points{{}};
    for (const auto& axis : axes) {
        std::vector<ParamPoint> next;
        next.reserve(points.size() * axis.size());
        for (const ParamPoint& prefix : points) {
            for (double v : axis) {
                ParamPoint p = prefix;
                p.push_back(v);
                next.push_back(std::move(p));
            }
        }
        points = std::move(next);
    }
    return points;
}

}  // namespace maskopt
