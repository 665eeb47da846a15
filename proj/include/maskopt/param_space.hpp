#pragma once

// Mixed categorical / integer / continuous search spaces and the encoding
// the surrogate works in: categoricals one-hot, everything else min-max
// scaled to [0, 1].

#include <optional>
#include <string>
#include <vector>

#include "maskopt/geometry.hpp"
#include "maskopt/stroke.hpp"

namespace maskopt {

enum class DimensionKind { categorical, integer, continuous };

const char* to_string(DimensionKind kind);

struct Dimension {
    std::string name;
    DimensionKind kind = DimensionKind::continuous;
    double lower = 0.0;           // integer / continuous
    double upper = 1.0;           // integer / continuous
    std::vector<double> choices;  // categorical, in one-hot order

    /// Columns this dimension occupies in the encoded vector.
    int encoded_width() const;
    bool contains(double value) const;
};

enum class ModelType { type1, type2 };

const char* to_string(ModelType type);
ModelType parse_model_type(const std::string& text);

/// A point in natural units, one value per dimension. Categorical values are
/// the choice itself (e.g. a kernel size of 7), not its index.
using ParamPoint = std::vector<double>;

class ParamSpace {
public:
    explicit ParamSpace(std::vector<Dimension> dims);

    static ParamSpace type1();
    static ParamSpace type2();
    static ParamSpace for_model(ModelType type);

    const std::vector<Dimension>& dimensions() const noexcept { return dims_; }
    std::size_t size() const noexcept { return dims_.size(); }
    int encoded_size() const noexcept { return encoded_size_; }

    /// Index of the named dimension, or nullopt.
    std::optional<std::size_t> find(const std::string& name) const;
    std::vector<std::string> names() const;

    bool contains(const ParamPoint& point) const;
    /// Throws std::invalid_argument naming the first offending dimension.
    void check(const ParamPoint& point) const;

    std::vector<double> encode(const ParamPoint& point) const;
    /// Inverse of encode for any vector in the relaxed box: categoricals take
    /// the argmax of their one-hot block, integers round to nearest, values
    /// are clamped to the domain.
    ParamPoint decode(const std::vector<double>& encoded) const;

private:
    std::vector<Dimension> dims_;
    int encoded_size_ = 0;
};

Type1Params to_type1(const ParamPoint& point);
Type2Params to_type2(const ParamPoint& point);
ParamPoint from_type1(const Type1Params& params);
ParamPoint from_type2(const Type2Params& params);

/// Full Cartesian product of the initial grid, last dimension varying fastest.
std::vector<ParamPoint> grid_init(ModelType type);

}  // namespace maskopt
