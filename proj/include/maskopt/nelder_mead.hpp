#pragma once

#include <functional>
#include <vector>

namespace maskopt {

struct NelderMeadOptions {
    int max_evaluations = 200;
    double initial_step = 0.1;
    /// Stops once the spread of simplex values drops below this.
    double tolerance = 1e-10;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

/// Derivative-free minimisation. Bounds, if any, are the objective's job.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& options = {});

}  // namespace maskopt
