#include "maskopt/commands.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "maskopt/benchmark.hpp"
#include "maskopt/harness.hpp"
#include "maskopt/image_io.hpp"
#include "maskopt/optimizer.hpp"
#include "maskopt/trial_store.hpp"

namespace maskopt {

namespace {

std::unique_ptr<Evaluator> make_evaluator(const RunConfig& c) {
    if (c.synthetic_evaluator) return std::make_unique<SyntheticOracle>(c.oracle_weights);
    if (!c.evaluator_command.empty()) {
        return std::make_unique<RemoteEvaluator>(spawn_process(c.evaluator_command));
    }
    return std::make_unique<RemoteEvaluator>(connect_endpoint(c.evaluator_endpoint));
}

std::optional<std::string> utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    // Write-then-rename so readers never see a half-written file.
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string best_so_far_csv(const Study& study) {
    std::ostringstream ss;
    write_best_so_far_csv(ss, study);
    return ss.str();
}

}  // namespace

void RunConfig::validate() const {
    const int evaluators = (evaluator_command.empty() ? 0 : 1) +
                           (evaluator_endpoint.empty() ? 0 : 1) + (synthetic_evaluator ? 1 : 0);
    if (evaluators != 1) {
        throw std::invalid_argument("exactly one evaluator must be given (command, endpoint or synthetic)");
    }
    if (max_iters < 0) throw std::invalid_argument("max-iters must be >= 0");
    if (manifest.empty()) throw std::invalid_argument("a benchmark manifest is required");
    if (output_dir.empty()) throw std::invalid_argument("an output directory is required");
}

int cmd_optimize(const RunConfig& config, std::ostream& log) {
    try {
        config.validate();
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    const ParamSpace space = ParamSpace::for_model(config.model);
    const std::string study_id = config.study_id.empty()
                                     ? std::string(to_string(config.model)) + "-seed" +
                                           std::to_string(config.seed)
                                     : config.study_id;
    const auto out_dir = config.output_dir;
    try {
        const std::vector<BenchmarkItem> items = load_benchmark(config.manifest);
        if (items.empty()) throw std::runtime_error("benchmark manifest lists no items");
        std::filesystem::create_directories(out_dir);

        TrialStore store(out_dir / kStudyFile, {study_id, to_string(config.model), config.seed}, space);
        if (config.wall_clock) store.set_clock(utc_now);
        if (!store.trials().empty()) {
            log << "resuming " << study_id << " from " << store.trials().size() << " stored trials\n";
        }

        const auto evaluator = make_evaluator(config);
        ScoreOptions score_options;
        score_options.study_id = study_id;
        if (evaluator->needs_mask_files()) score_options.mask_dir = out_dir / kMaskDir;

        const Objective objective = [&](const ParamPoint& p) {
            return score_point(items, p, config.model, *evaluator, score_options);
        };
        StudyOptions options;
        options.on_trial = [&](const Study& s) {
            write_file(out_dir / kBestSoFarFile, best_so_far_csv(s));
        };

        Study study{space, {}, config.seed};
        try {
            study = run_study(space, objective, grid_init(config.model), config.max_iters,
                              config.seed, &store, options);
        } catch (const StudyAborted& e) {
            Study partial{space, store.trials(), config.seed};
            write_file(out_dir / kBestSoFarFile, best_so_far_csv(partial));
            log << "error: " << e.what() << "\n"
                << "study aborted; " << partial.trials.size() << " completed trials kept in "
                << (out_dir / kStudyFile).string() << '\n';
            return kExitRuntime;
        }
        write_file(out_dir / kBestSoFarFile, best_so_far_csv(study));

        const auto best = study.best_index();
        protocol::json summary;
        summary["study"] = study_id;
        summary["trials"] = study.trials.size();
        if (best) {
            summary["iteration"] = study.trials[*best].iteration_index;
            summary["params"] = protocol::point_to_json(space, study.trials[*best].params);
            summary["score"] = study.trials[*best].score;
        }
        write_file(out_dir / kBestPointFile, summary.dump(2) + "\n");
        log << "best " << summary.dump() << '\n';
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_report(const std::filesystem::path& study_path, const FixedAssignment& fixed,
               const std::string& sweep, const std::optional<std::filesystem::path>& out_csv,
               std::ostream& out, std::ostream& log) {
    Study study{ParamSpace::type1(), {}, 0};
    try {
        study = TrialStore::load(study_path);
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::vector<DependencyRow> rows;
    try {
        rows = dependency_report(study, fixed, sweep);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    std::ostringstream csv;
    write_dependency_csv(csv, sweep, rows);
    try {
        if (out_csv) {
            if (out_csv->has_parent_path()) std::filesystem::create_directories(out_csv->parent_path());
            write_file(*out_csv, csv.str());
        } else {
            out << csv.str();
        }
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_gen_mask(ModelType model, const std::filesystem::path& manifest,
                 const std::map<std::string, double>& params,
                 const std::filesystem::path& output_dir, const std::optional<std::string>& only_id,
                 std::ostream& log) {
    const ParamSpace space = ParamSpace::for_model(model);
    ParamPoint point;
    for (const Dimension& d : space.dimensions()) {
        const auto it = params.find(d.name);
        if (it == params.end()) {
            log << "error: missing --param " << d.name << "=<value>\n";
            return kExitUsage;
        }
        point.push_back(it->second);
    }
    for (const auto& [name, value] : params) {
        if (!space.find(name)) {
            log << "error: unknown parameter '" << name << "' for " << to_string(model) << '\n';
            return kExitUsage;
        }
    }
    try {
        space.check(point);
    } catch (const std::invalid_argument& e) {
        log << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        const auto items = load_benchmark(manifest);
        bool found = false;
        for (const BenchmarkItem& item : items) {
            if (only_id && item.id != *only_id) continue;
            found = true;
            const MaskBitmap mask = render_mask(item, model, point);
            save_mask(output_dir / (item.id + ".png"), mask);
            log << item.id << ": " << mask_area(mask) << " masked pixels\n";
        }
        if (only_id && !found) {
            log << "error: no item '" << *only_id << "' in " << manifest.string() << '\n';
            return kExitRuntime;
        }
        return kExitOk;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

int cmd_grid_init(ModelType model, std::ostream& out) {
    const ParamSpace space = ParamSpace::for_model(model);
    const auto names = space.names();
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
    out << '\n';
    for (const ParamPoint& p : grid_init(model)) {
        for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << format_double(p[i]);
        out << '\n';
    }
    return kExitOk;
}

}  // namespace maskopt
