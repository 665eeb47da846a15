#pragma once

// Data exports mirroring the figures: best-so-far curves and one-parameter
// dependency slices over a study's history.

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "maskopt/study.hpp"

namespace maskopt {

/// Closed interval; an exact value has lower == upper.
struct ValueRange {
    double lower = 0.0;
    double upper = 0.0;

    static ValueRange exactly(double v) { return {v, v}; }
    bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Parses "0.5" or "1.25:1.45".
ValueRange parse_value_range(const std::string& text);

using FixedAssignment = std::map<std::string, ValueRange>;

struct DependencyRow {
    int iteration = 0;
    double value = 0.0;  // the swept dimension
    double score = 0.0;
};

/// Trials whose fixed dimensions fall inside their ranges, in trial order.
/// Unknown dimension names throw std::invalid_argument listing valid ones.
std::vector<DependencyRow> dependency_report(const Study& study, const FixedAssignment& fixed,
                                             const std::string& sweep);

/// iteration,<sweep>,score
void write_dependency_csv(std::ostream& out, const std::string& sweep,
                          const std::vector<DependencyRow>& rows);

/// iteration,source,score,best_score
void write_best_so_far_csv(std::ostream& out, const Study& study);

}  // namespace maskopt
