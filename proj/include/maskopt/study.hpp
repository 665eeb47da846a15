#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maskopt/param_space.hpp"

namespace maskopt {

enum class TrialSource { grid, suggested };

const char* to_string(TrialSource source);
TrialSource parse_trial_source(const std::string& text);

struct Trial {
    ParamPoint params;
    double score = 0.0;  // lower is better
    TrialSource source = TrialSource::grid;
    int iteration_index = 0;
    std::optional<std::string> timestamp;

    bool operator==(const Trial&) const = default;
};

struct Study {
    ParamSpace space;
    std::vector<Trial> trials;
    std::uint64_t rng_seed = 0;

    /// Running minimum of the scores, one entry per trial.
    std::vector<double> best_so_far() const;
    /// Index into `trials` of the lowest score; nullopt when empty.
    std::optional<std::size_t> best_index() const;
};

}  // namespace maskopt
