#pragma once

// Library side of the command-line front end. Each command returns a process
// exit status: 0 success, 1 usage error, 2 runtime error.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>

#include "maskopt/evaluator.hpp"
#include "maskopt/param_space.hpp"
#include "maskopt/report.hpp"

namespace maskopt {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

struct RunConfig {
    ModelType model = ModelType::type1;
    std::filesystem::path manifest;
    // Exactly one evaluator: a subprocess command, a host:port endpoint, or
    // the built-in synthetic oracle.
    std::string evaluator_command;
    std::string evaluator_endpoint;
    bool synthetic_evaluator = false;
    std::uint64_t seed = 0;
    int max_iters = 100;
    std::filesystem::path output_dir;
    OracleWeights oracle_weights;
    bool wall_clock = false;
    std::string study_id;  // defaults to "<model>-seed<seed>"

    /// Throws std::invalid_argument describing the first problem.
    void validate() const;
};

/// Files written by cmd_optimize inside the output directory.
inline constexpr const char* kStudyFile = "study.jsonl";
inline constexpr const char* kBestSoFarFile = "best_so_far.csv";
inline constexpr const char* kBestPointFile = "best.json";
inline constexpr const char* kMaskDir = "masks";

/// Grid initialisation followed by the optimisation loop. Resumes from an
/// existing study file in the output directory.
int cmd_optimize(const RunConfig& config, std::ostream& log);

/// Dependency slice of a stored study as CSV; writes to `out_csv` when given,
/// otherwise to `out`.
int cmd_report(const std::filesystem::path& study_path, const FixedAssignment& fixed,
               const std::string& sweep, const std::optional<std::filesystem::path>& out_csv,
               std::ostream& out, std::ostream& log);

/// Masks for every manifest item (or just `only_id`) written as <id>.png.
int cmd_gen_mask(ModelType model, const std::filesystem::path& manifest,
                 const std::map<std::string, double>& params,
                 const std::filesystem::path& output_dir, const std::optional<std::string>& only_id,
                 std::ostream& log);

/// Initial grid as CSV, one point per row.
int cmd_grid_init(ModelType model, std::ostream& out);

}  // namespace maskopt
