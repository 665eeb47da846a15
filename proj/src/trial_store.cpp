#include "maskopt/trial_store.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "maskopt/protocol.hpp"

namespace maskopt {

using json = nlohmann::ordered_json;

namespace {

constexpr int kFormatVersion = 1;

json space_to_json(const ParamSpace& space) {
    json dims = json::array();
    for (const Dimension& d : space.dimensions()) {
        json j;
        j["name"] = d.name;
        j["kind"] = to_string(d.kind);
        if (d.kind == DimensionKind::categorical) {
            j["choices"] = d.choices;
        } else {
            j["lower"] = d.lower;
            j["upper"] = d.upper;
        }
        dims.push_back(std::move(j));
    }
    return dims;
}

ParamSpace space_from_json(const json& dims) {
    std::vector<Dimension> out;
    for (const json& j : dims) {
        Dimension d;
        d.name = j.at("name").get<std::string>();
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "categorical") {
            d.kind = DimensionKind::categorical;
            d.choices = j.at("choices").get<std::vector<double>>();
        } else {
            d.kind = kind == "integer" ? DimensionKind::integer : DimensionKind::continuous;
            if (kind != "integer" && kind != "continuous") {
                throw std::runtime_error("trial store: unknown dimension kind '" + kind + "'");
            }
            d.lower = j.at("lower").get<double>();
            d.upper = j.at("upper").get<double>();
        }
        out.push_back(std::move(d));
    }
    return ParamSpace(std::move(out));
}

json header_to_json(const StoreHeader& header, const ParamSpace& space) {
    json j;
    j["type"] = "study";
    j["format"] = kFormatVersion;
    j["study"] = header.study_id;
    j["model"] = header.model;
    j["seed"] = header.seed;
    j["space"] = space_to_json(space);
    return j;
}

std::string trial_line(const ParamSpace& space, const Trial& t) {
    json j;
    j["type"] = "trial";
    j["iteration"] = t.iteration_index;
    j["source"] = to_string(t.source);
    j["params"] = protocol::point_to_json(space, t.params);
    j["score"] = t.score;
    j["timestamp"] = t.timestamp ? json(*t.timestamp) : json(nullptr);
    return j.dump();
}

struct Parsed {
    StoreHeader header;
    std::optional<ParamSpace> space;
    std::string header_line;
    std::vector<Trial> trials;
    // Byte offset just past the last complete trial line.
    std::streamoff committed = 0;
};

Parsed parse(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read trial store " + path.string());
    Parsed p;
    std::string line;
    int lineno = 0;
    std::optional<int> pending;
    while (std::getline(in, line)) {
        ++lineno;
        const bool terminated = !in.eof();
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            // A torn final line is what a crash mid-write leaves behind.
            if (!terminated) break;
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": malformed record: " + e.what());
        }
        const auto type = j.value("type", std::string{});
        if (lineno == 1) {
            if (type != "study") {
                throw std::runtime_error(path.string() + ": missing study header");
            }
            if (j.value("format", 0) != kFormatVersion) {
                throw std::runtime_error(path.string() + ": unsupported store format");
            }
            p.header.study_id = j.at("study").get<std::string>();
            p.header.model = j.at("model").get<std::string>();
            p.header.seed = j.at("seed").get<std::uint64_t>();
            p.space = space_from_json(j.at("space"));
            p.header_line = line;
            p.committed = in.tellg();
            continue;
        }
        if (type == "pending") {
            pending = j.at("iteration").get<int>();
            continue;
        }
        if (type != "trial") {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": unknown record type '" + type + "'");
        }
        if (!terminated) break;
        Trial t;
        t.iteration_index = j.at("iteration").get<int>();
        t.source = parse_trial_source(j.at("source").get<std::string>());
        t.params = protocol::point_from_json(*p.space, j.at("params"));
        t.score = j.at("score").get<double>();
        if (j.contains("timestamp") && !j["timestamp"].is_null()) {
            t.timestamp = j["timestamp"].get<std::string>();
        }
        if (!p.trials.empty() && t.iteration_index != p.trials.back().iteration_index + 1) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": iteration indices are not consecutive");
        }
        if (p.trials.empty() && t.iteration_index != 0) {
            throw std::runtime_error(path.string() + ": first trial must have iteration 0");
        }
        if (pending && *pending != t.iteration_index) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": trial does not match its pending record");
        }
        pending.reset();
        p.trials.push_back(std::move(t));
        p.committed = in.tellg();
    }
    if (!p.space) throw std::runtime_error(path.string() + ": empty trial store");
    return p;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

std::string TrialStore::describe(const ParamSpace& space) {
    return space_to_json(space).dump();
}

TrialStore::TrialStore(std::filesystem::path path, StoreHeader header, const ParamSpace& space)
    : path_(std::move(path)), header_(std::move(header)), space_(space) {
    const std::string expected = header_to_json(header_, space_).dump();
    if (std::filesystem::exists(path_) && std::filesystem::file_size(path_) > 0) {
        Parsed p = parse(path_);
        if (p.header_line != expected) {
            throw std::runtime_error("trial store " + path_.string() +
                                     " belongs to a different study (header mismatch)");
        }
        trials_ = std::move(p.trials);
        // Drop anything after the last completed trial: an orphaned pending
        // line or a torn write from an interrupted run.
        if (static_cast<std::uintmax_t>(p.committed) < std::filesystem::file_size(path_)) {
            std::filesystem::resize_file(path_, static_cast<std::uintmax_t>(p.committed));
        }
        return;
    }
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create trial store " + path_.string());
    out << expected << '\n';
}

Study TrialStore::load(const std::filesystem::path& path, StoreHeader* header) {
    Parsed p = parse(path);
    if (header) *header = p.header;
    Study study{*p.space, std::move(p.trials), p.header.seed};
    return study;
}

void TrialStore::write_line(const std::string& line) {
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot append to trial store " + path_.string());
    out << line << '\n';
    out.flush();
    if (!out) throw std::runtime_error("write to trial store " + path_.string() + " failed");
}

void TrialStore::append_pending(int iteration, TrialSource source, const ParamPoint& params) {
    json j;
    j["type"] = "pending";
    j["iteration"] = iteration;
    j["source"] = to_string(source);
    j["params"] = protocol::point_to_json(space_, params);
    write_line(j.dump());
}

Trial TrialStore::append_trial(Trial trial) {
    if (!std::isfinite(trial.score)) {
        throw std::invalid_argument("trial store: score must be finite");
    }
    const int expected = trials_.empty() ? 0 : trials_.back().iteration_index + 1;
    if (trial.iteration_index != expected) {
        throw std::invalid_argument("trial store: expected iteration " + std::to_string(expected) +
                                    ", got " + std::to_string(trial.iteration_index));
    }
    trial.timestamp = clock_ ? clock_() : std::nullopt;
    write_line(trial_line(space_, trial));
    trials_.push_back(trial);
    return trial;
}

}  // namespace maskopt
