#pragma once

// Append-only JSON-lines record of a study. The first line is a header
// naming the space and seed; every evaluation writes a "pending" line before
// the evaluator runs and a "trial" line after it returns. Reopening a store
// drops a trailing pending line left by an interrupted run.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "maskopt/study.hpp"

namespace maskopt {

struct StoreHeader {
    std::string study_id;
    std::string model;  // free-form label, e.g. "type1"
    std::uint64_t seed = 0;

    bool operator==(const StoreHeader&) const = default;
};

class TrialStore {
public:
    using Clock = std::function<std::optional<std::string>()>;

    /// Opens or creates the store. An existing store must carry the same
    /// header and space.
    TrialStore(std::filesystem::path path, StoreHeader header, const ParamSpace& space);

    /// Reads a store without opening it for writing.
    static Study load(const std::filesystem::path& path, StoreHeader* header = nullptr);

    /// Serialises the space as the header line does; used to compare spaces.
    static std::string describe(const ParamSpace& space);

    const std::filesystem::path& path() const noexcept { return path_; }
    const StoreHeader& header() const noexcept { return header_; }
    const std::vector<Trial>& trials() const noexcept { return trials_; }

    /// Timestamps come from here; the default writes null.
    void set_clock(Clock clock) { clock_ = std::move(clock); }

    void append_pending(int iteration, TrialSource source, const ParamPoint& params);
    /// Stamps the trial with the clock and appends it.
    Trial append_trial(Trial trial);

private:
    void write_line(const std::string& line);

    std::filesystem::path path_;
    StoreHeader header_;
    ParamSpace space_;
    std::vector<Trial> trials_;
    Clock clock_;
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

}  // namespace maskopt
