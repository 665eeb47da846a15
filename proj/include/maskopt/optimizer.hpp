#pragma once

// Bayesian optimisation loop: fit the surrogate on every trial so far,
// maximise expected improvement, evaluate, append, repeat.

#include <cstdint>
#include <functional>
#include <vector>

#include "maskopt/gp.hpp"
#include "maskopt/study.hpp"
#include "maskopt/trial_store.hpp"

namespace maskopt {

struct SuggestOptions {
    int candidates = 1024;
    int refine_top = 8;
    int refine_evaluations = 200;
    GpFitOptions gp;
};

struct Suggestion {
    ParamPoint point;
    double expected_improvement = 0.0;
};

/// Fits the surrogate used by suggest() for this study.
GaussianProcess fit_surrogate(const Study& study, const GpFitOptions& options = {});

/// Next point to evaluate. Deterministic in (study.rng_seed, study.trials).
Suggestion suggest(const Study& study, const SuggestOptions& options = {});

using Objective = std::function<double(const ParamPoint&)>;

/// Raised when the objective fails; completed trials are already in the store.
class StudyAborted : public std::runtime_error {
public:
    StudyAborted(const std::string& what, ParamPoint point, int iteration)
        : std::runtime_error(what), point_(std::move(point)), iteration_(iteration) {}
    const ParamPoint& point() const noexcept { return point_; }
    int iteration() const noexcept { return iteration_; }

private:
    ParamPoint point_;
    int iteration_;
};

struct StudyOptions {
    SuggestOptions suggest;
    /// Called after every completed trial.
    std::function<void(const Study&)> on_trial;
};

/// Evaluates `init` (skipping trials already present in the store) and then
/// runs `max_iters` suggestion rounds. Without a store the study lives in memory.
Study run_study(const ParamSpace& space, const Objective& objective,
                const std::vector<ParamPoint>& init, int max_iters, std::uint64_t seed,
                TrialStore* store = nullptr, const StudyOptions& options = {});

}  // namespace maskopt
