#include "maskopt/study.hpp"

#include <algorithm>
#include <stdexcept>

namespace maskopt {

const char* to_string(TrialSource source) {
    return source == TrialSource::grid ? "grid" : "suggested";
}

TrialSource parse_trial_source(const std::string& text) {
    if (text == "grid") return TrialSource::grid;
    if (text == "suggested") return TrialSource::suggested;
    throw std::invalid_argument("unknown trial source '" + text + "'");
}

std::vector<double> Study::best_so_far() const {
    std::vector<double> out;
    out.reserve(trials.size());
    for (const Trial& t : trials) {
        out.push_back(out.empty() ? t.score : std::min(out.back(), t.score));
    }
    return out;
}

std::optional<std::size_t> Study::best_index() const {
    if (trials.empty()) return std::nullopt;
    std::size_t best = 0;
    for (std::size_t i = 1; i < trials.size(); ++i) {
        if (trials[i].score < trials[best].score) best = i;
    }
    return best;
}

}  // namespace maskopt
