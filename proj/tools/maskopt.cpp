// maskopt: mask-profile generation and optimisation front end.

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maskopt/commands.hpp"
#include "maskopt/synthetic.hpp"

namespace {

constexpr const char* kCsvHelp = R"(CSV outputs:
  optimize: <out>/best_so_far.csv  iteration,source,score,best_score
            (best_score is the running minimum of score)
  report:   iteration,<sweep>,score  (trials matching every --fix)
  grid-init: one column per parameter, one row per grid point)";

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
    std::map<std::string, double> out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--param", "expected name=value, got " + item);
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw CLI::ValidationError("--param", "bad number in " + item);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parameterised text-removal masks tuned by Bayesian optimisation"};
    app.footer(kCsvHelp);
    app.require_subcommand(1);

    std::string model_text = "type1";
    const auto model_check = CLI::IsMember({"type1", "type2"});

    // optimize
    maskopt::RunConfig config;
    std::string out_dir;
    std::string manifest;
    auto* optimize = app.add_subcommand("optimize", "Grid initialisation then GP-EI optimisation");
    optimize->add_option("--model", model_text, "Mask model")->check(model_check);
    optimize->add_option("--manifest", manifest, "Benchmark manifest (JSON)")->required();
    optimize->add_option("--evaluator-cmd", config.evaluator_command,
                         "Evaluator subprocess speaking the line protocol");
    optimize->add_option("--evaluator-endpoint", config.evaluator_endpoint,
                         "Evaluator TCP endpoint host:port");
    optimize->add_flag("--synthetic", config.synthetic_evaluator,
                       "Use the built-in synthetic oracle (needs stroke_truth)");
    optimize->add_option("--seed", config.seed, "Random seed");
    optimize->add_option("--max-iters", config.max_iters, "Suggestion rounds after the grid")
        ->default_val(100);
    optimize->add_option("--out", out_dir, "Output directory (resumes if it holds a study)")
        ->required();
    optimize->add_option("--study-id", config.study_id, "Study identifier");
    optimize->add_option("--w-miss", config.oracle_weights.miss, "Synthetic oracle miss weight");
    optimize->add_option("--w-over", config.oracle_weights.over, "Synthetic oracle over-mask weight");
    optimize->add_option("--w-frag", config.oracle_weights.frag, "Synthetic oracle fragmentation weight");
    optimize->add_flag("--wall-clock", config.wall_clock, "Record UTC timestamps in the study file");

    // report
    std::string study_path;
    std::string sweep;
    std::vector<std::string> fixes;
    std::string report_out;
    auto* report = app.add_subcommand("report", "Dependency slice of a study as CSV");
    report->add_option("--study", study_path, "Study file (study.jsonl)")->required();
    report->add_option("--sweep", sweep, "Dimension on the x axis")->required();
    report->add_option("--fix", fixes, "name=value or name=lo:hi, repeatable");
    report->add_option("--out", report_out, "CSV path (stdout if omitted)");

    // gen-mask
    std::vector<std::string> params;
    std::string only_id;
    auto* gen = app.add_subcommand("gen-mask", "Render masks for a parameter point");
    gen->add_option("--model", model_text, "Mask model")->check(model_check);
    gen->add_option("--manifest", manifest, "Benchmark manifest (JSON)")->required();
    gen->add_option("--param", params, "name=value, one per dimension")->required();
    gen->add_option("--out", out_dir, "Directory for <id>.png masks")->required();
    gen->add_option("--id", only_id, "Only this item");

    // grid-init
    auto* grid = app.add_subcommand("grid-init", "Print the initial grid");
    grid->add_option("--model", model_text, "Mask model")->check(model_check);

    // make-synthetic
    int count = 8;
    std::uint64_t synth_seed = 0;
    auto* synth = app.add_subcommand("make-synthetic", "Generate a benchmark with planted stroke truth");
    synth->add_option("--out", out_dir, "Directory")->required();
    synth->add_option("--count", count, "Number of documents")->default_val(8);
    synth->add_option("--seed", synth_seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? maskopt::kExitOk : maskopt::kExitUsage;
    }

    try {
        const auto model = maskopt::parse_model_type(model_text);
        if (*optimize) {
            config.model = model;
            config.manifest = manifest;
            config.output_dir = out_dir;
            return maskopt::cmd_optimize(config, std::cerr);
        }
        if (*report) {
            maskopt::FixedAssignment fixed;
            for (const auto& f : fixes) {
                const auto eq = f.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "error: --fix expects name=value or name=lo:hi, got " << f << '\n';
                    return maskopt::kExitUsage;
                }
                fixed[f.substr(0, eq)] = maskopt::parse_value_range(f.substr(eq + 1));
            }
            std::optional<std::filesystem::path> out;
            if (!report_out.empty()) out = report_out;
            return maskopt::cmd_report(study_path, fixed, sweep, out, std::cout, std::cerr);
        }
        if (*gen) {
            std::optional<std::string> id;
            if (!only_id.empty()) id = only_id;
            return maskopt::cmd_gen_mask(model, manifest, parse_params(params), out_dir, id, std::cerr);
        }
        if (*grid) return maskopt::cmd_grid_init(model, std::cout);
        if (*synth) {
            const auto path = maskopt::generate_synthetic_benchmark(out_dir, count, synth_seed);
            std::cout << path.string() << '\n';
            return maskopt::kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return maskopt::kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return maskopt::kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return maskopt::kExitRuntime;
    }
    return maskopt::kExitUsage;
}
