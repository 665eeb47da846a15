#include "maskopt/report.hpp"

#include <charconv>
#include <stdexcept>

#include "maskopt/trial_store.hpp"

namespace maskopt {

namespace {

double parse_number(const std::string& text) {
    double v = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    return v;
}

std::string valid_names(const ParamSpace& space) {
    std::string out;
    for (const auto& n : space.names()) {
        if (!out.empty()) out += ", ";
        out += n;
    }
    return out;
}

std::size_t dimension_index(const ParamSpace& space, const std::string& name) {
    const auto idx = space.find(name);
    if (!idx) {
        throw std::invalid_argument("unknown dimension '" + name + "'; valid dimensions: " +
                                    valid_names(space));
    }
    return *idx;
}

}  // namespace

ValueRange parse_value_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return ValueRange::exactly(parse_number(text));
    ValueRange r{parse_number(text.substr(0, colon)), parse_number(text.substr(colon + 1))};
    if (r.lower > r.upper) throw std::invalid_argument("empty range '" + text + "'");
    return r;
}

std::vector<DependencyRow> dependency_report(const Study& study, const FixedAssignment& fixed,
                                             const std::string& sweep) {
    const std::size_t sweep_idx = dimension_index(study.space, sweep);
    std::vector<std::pair<std::size_t, ValueRange>> filters;
    for (const auto& [name, range] : fixed) {
        if (name == sweep) {
            throw std::invalid_argument("dimension '" + sweep + "' is both fixed and swept");
        }
        filters.emplace_back(dimension_index(study.space, name), range);
    }
    std::vector<DependencyRow> rows;
    for (const Trial& t : study.trials) {
        bool match = true;
        for (const auto& [idx, range] : filters) {
            if (!range.contains(t.params[idx])) {
                match = false;
                break;
            }
        }
        if (match) rows.push_back({t.iteration_index, t.params[sweep_idx], t.score});
    }
    return rows;
}

void write_dependency_csv(std::ostream& out, const std::string& sweep,
                          const std::vector<DependencyRow>& rows) {
    out << "iteration," << sweep << ",score\n";
    for (const DependencyRow& r : rows) {
        out << r.iteration << ',' << format_double(r.value) << ',' << format_double(r.score) << '\n';
    }
}

void write_best_so_far_csv(std::ostream& out, const Study& study) {
    out << "iteration,source,score,best_score\n";
    const auto best = study.best_so_far();
    for (std::size_t i = 0; i < study.trials.size(); ++i) {
        const Trial& t = study.trials[i];
        out << t.iteration_index << ',' << to_string(t.source) << ',' << format_double(t.score) << ','
            << format_double(best[i]) << '\n';
    }
}

}  // namespace maskopt
