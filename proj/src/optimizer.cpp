#include "maskopt/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "maskopt/nelder_mead.hpp"

namespace maskopt {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 finaliser
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double radical_inverse(std::uint64_t index, unsigned base) {
    double inv = 1.0 / base;
    double factor = inv;
    double value = 0.0;
    while (index > 0) {
        value += static_cast<double>(index % base) * factor;
        index /= base;
        factor *= inv;
    }
    return value;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

// Maps a unit-cube sample onto the relaxed encoded box: one coordinate per
// dimension, categoricals pick a vertex of their one-hot block.
std::vector<double> sample_encoded(const ParamSpace& space, const std::vector<double>& u) {
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(space.encoded_size()));
    for (std::size_t i = 0; i < space.size(); ++i) {
        const Dimension& d = space.dimensions()[i];
        if (d.kind == DimensionKind::categorical) {
            const auto k = d.choices.size();
            const auto pick = std::min(k - 1, static_cast<std::size_t>(u[i] * static_cast<double>(k)));
            for (std::size_t c = 0; c < k; ++c) x.push_back(c == pick ? 1.0 : 0.0);
        } else {
            x.push_back(u[i]);
        }
    }
    return x;
}

// Encoded columns that are free to move during local refinement.
std::vector<std::size_t> relaxed_columns(const ParamSpace& space) {
    std::vector<std::size_t> cols;
    std::size_t col = 0;
    for (const Dimension& d : space.dimensions()) {
        if (d.kind != DimensionKind::categorical) cols.push_back(col);
        col += static_cast<std::size_t>(d.encoded_width());
    }
    return cols;
}

bool already_evaluated(const Study& study, const ParamPoint& p) {
    return std::any_of(study.trials.begin(), study.trials.end(),
                       [&](const Trial& t) { return t.params == p; });
}

struct Candidate {
    ParamPoint point;
    double ei = 0.0;
    std::size_t order = 0;
};

}  // namespace

GaussianProcess fit_surrogate(const Study& study, const GpFitOptions& options) {
    if (study.trials.size() < 2) {
        throw std::invalid_argument("fit_surrogate: need at least two trials, have " +
                                    std::to_string(study.trials.size()));
    }
    std::vector<std::vector<double>> x;
    std::vector<double> y;
    for (const Trial& t : study.trials) {
        x.push_back(study.space.encode(t.params));
        y.push_back(t.score);
    }
    return GaussianProcess::fit(std::move(x), std::move(y),
                                mix(study.rng_seed, 2 * study.trials.size()), options);
}

Suggestion suggest(const Study& study, const SuggestOptions& options) {
    const ParamSpace& space = study.space;
    const GaussianProcess gp = fit_surrogate(study, options.gp);
    std::mt19937_64 rng(mix(study.rng_seed, 2 * study.trials.size() + 1));

    // Halton points with a random shift, one coordinate per dimension.
    const std::size_t dims = space.size();
    if (dims > std::size(kPrimes)) throw std::invalid_argument("suggest: too many dimensions");
    std::vector<double> shift(dims);
    for (double& s : shift) s = uniform01(rng);

    std::vector<std::vector<double>> encoded;
    std::vector<double> relaxed_ei;
    encoded.reserve(static_cast<std::size_t>(options.candidates));
    for (int i = 0; i < options.candidates; ++i) {
        std::vector<double> u(dims);
        for (std::size_t d = 0; d < dims; ++d) {
            u[d] = std::fmod(radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[d]) + shift[d], 1.0);
        }
        encoded.push_back(sample_encoded(space, u));
        relaxed_ei.push_back(gp.expected_improvement(encoded.back()));
    }

    // Local refinement of the relaxed coordinates from the best few samples.
    const auto cols = relaxed_columns(space);
    std::vector<std::size_t> ranked(encoded.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i] = i;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](std::size_t a, std::size_t b) { return relaxed_ei[a] > relaxed_ei[b]; });
    if (!cols.empty()) {
        const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(options.refine_top), ranked.size());
        NelderMeadOptions nm;
        nm.max_evaluations = options.refine_evaluations;
        nm.initial_step = 0.02;
        nm.tolerance = 1e-14;
        for (std::size_t r = 0; r < top; ++r) {
            const std::vector<double> base = encoded[ranked[r]];
            auto embed = [&](const std::vector<double>& z) {
                std::vector<double> x = base;
                for (std::size_t k = 0; k < cols.size(); ++k) x[cols[k]] = std::clamp(z[k], 0.0, 1.0);
                return x;
            };
            std::vector<double> start;
            for (std::size_t c : cols) start.push_back(base[c]);
            const NelderMeadResult res = nelder_mead(
                [&](const std::vector<double>& z) { return -gp.expected_improvement(embed(z)); },
                start, nm);
            encoded.push_back(embed(res.x));
        }
    }

    // Score every candidate at its decoded (rounded, snapped) location.
    std::vector<Candidate> pool;
    pool.reserve(encoded.size());
    for (std::size_t i = 0; i < encoded.size(); ++i) {
        ParamPoint p = space.decode(encoded[i]);
        const double ei = gp.expected_improvement(space.encode(p));
        pool.push_back({std::move(p), ei, i});
    }
    std::stable_sort(pool.begin(), pool.end(), [](const Candidate& a, const Candidate& b) {
        return a.ei > b.ei;
    });
    for (const Candidate& c : pool) {
        if (!already_evaluated(study, c.point)) return {c.point, c.ei};
    }
    // Every candidate repeats a trial: try random unseen points.
    for (int attempt = 0; attempt < 4096; ++attempt) {
        std::vector<double> u(dims);
        for (double& v : u) v = uniform01(rng);
        ParamPoint p = space.decode(sample_encoded(space, u));
        if (!already_evaluated(study, p)) {
            return {p, gp.expected_improvement(space.encode(p))};
        }
    }
    return {pool.front().point, pool.front().ei};
}

Study run_study(const ParamSpace& space, const Objective& objective,
                const std::vector<ParamPoint>& init, int max_iters, std::uint64_t seed,
                TrialStore* store, const StudyOptions& options) {
    if (max_iters < 0) throw std::invalid_argument("run_study: max_iters must be >= 0");
    for (const ParamPoint& p : init) space.check(p);

    Study study{space, {}, seed};
    if (store) {
        study.trials = store->trials();
        for (std::size_t i = 0; i < study.trials.size() && i < init.size(); ++i) {
            const Trial& t = study.trials[i];
            if (t.params != init[i] || t.source != TrialSource::grid) {
                throw std::runtime_error("run_study: stored trial " + std::to_string(i) +
                                         " does not match the initial design");
            }
        }
    }

    auto evaluate = [&](const ParamPoint& p, TrialSource source) {
        const int iteration = static_cast<int>(study.trials.size());
        if (store) store->append_pending(iteration, source, p);
        double score = 0.0;
        try {
            score = objective(p);
        } catch (const std::exception& e) {
            throw StudyAborted(std::string("evaluation failed at iteration ") +
                                   std::to_string(iteration) + ": " + e.what(),
                               p, iteration);
        }
        if (!std::isfinite(score)) {
            throw StudyAborted("evaluator returned a non-finite score at iteration " +
                                   std::to_string(iteration),
                               p, iteration);
        }
        Trial t{p, score, source, iteration, std::nullopt};
        if (store) t = store->append_trial(std::move(t));
        study.trials.push_back(std::move(t));
        if (options.on_trial) options.on_trial(study);
    };

    for (std::size_t i = study.trials.size(); i < init.size(); ++i) {
        evaluate(init[i], TrialSource::grid);
    }
    const std::size_t total = init.size() + static_cast<std::size_t>(max_iters);
    while (study.trials.size() < total) {
        if (study.trials.size() < 2) {
            // Too little data for a surrogate: draw uniformly.
            std::mt19937_64 rng(mix(seed, 2 * study.trials.size() + 1));
            std::vector<double> u(space.size());
            for (double& v : u) v = uniform01(rng);
            evaluate(space.decode(sample_encoded(space, u)), TrialSource::suggested);
            continue;
        }
        evaluate(suggest(study, options.suggest).point, TrialSource::suggested);
    }
    return study;
}

}  // namespace maskopt
