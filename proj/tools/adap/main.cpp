#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace adap::cli;

bool parse_preference(const std::string& text, RunConfig& config) {
    if (text == "median") {
        config.preference = PreferencePolicy::Median;
        return true;
    }
    if (text == "half") {
        config.preference = PreferencePolicy::HalfMedian;
        return true;
    }
    try {
        std::size_t used = 0;
        config.preference_value = std::stod(text, &used);
        config.preference = PreferencePolicy::Explicit;
        return used == text.size();
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive affinity propagation clustering"};
    app.require_subcommand(1);

    RunConfig run;
    std::string preference;
    std::string format;
    auto* run_cmd = app.add_subcommand("run", "cluster a dataset");
    run_cmd->add_option("--input", run.input, "CSV dataset or similarity matrix")->required();
    run_cmd->add_option("--similarity", run.measure, "euclidean | pearson | precomputed")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Measure>{{"euclidean", Measure::Euclidean},
                                           {"pearson", Measure::Pearson},
                                           {"precomputed", Measure::Precomputed}},
            CLI::ignore_case));
    run_cmd->add_option("--mode", run.mode, "adaptive | vanilla")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, Mode>{{"adaptive", Mode::Adaptive}, {"vanilla", Mode::Vanilla}},
            CLI::ignore_case));
    run_cmd->add_option("--preference", preference,
                        "median | half | VALUE (default: half for adaptive, median for vanilla)");
    run_cmd->add_option("--lam", run.lam, "initial damping factor")->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--maxits", run.maxits, "iteration budget (default 50000 / 2000)");
    run_cmd->add_option("--nu", run.nu, "iterations an exemplar set must persist")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--dy", run.dy, "confirmation delay before a preference step");
    run_cmd->add_option("--window", run.window, "oscillation monitor window")
        ->check(CLI::PositiveNumber);
    run_cmd->add_option("--labels", run.label_column,
                        "0-based column holding class labels; negative counts from the end");
    run_cmd->add_flag("--header", run.header, "first row is a header");
    run_cmd->add_flag("--standardize", run.standardize, "z-score feature columns");
    run_cmd->add_flag("--jitter", run.jitter, "add tiny deterministic noise to similarities");
    run_cmd->add_option("--seed", run.seed, "jitter seed");
    run_cmd->add_option("--out", run.out, "report path (.json or .csv, '-' for stdout)");
    run_cmd->add_option("--format", format, "json | csv (default: from --out extension)")
        ->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_option("--log", run.log, "write the per-iteration scan log as CSV");

    std::string blobs;
    unsigned long long synth_seed = 0;
    std::string synth_out = "-";
    auto* synth_cmd = app.add_subcommand("synth", "generate Gaussian blob datasets");
    synth_cmd->add_option("--blobs", blobs, "'x1,x2:sigma:count;...'")->required();
    synth_cmd->add_option("--seed", synth_seed, "generator seed");
    synth_cmd->add_option("--out", synth_out, "output CSV path ('-' for stdout)");

    std::string suite;
    auto* bench_cmd = app.add_subcommand("bench", "run a benchmark manifest");
    bench_cmd->add_option("--suite", suite, "JSON manifest")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitParse;
    }

    if (*run_cmd) {
        if (!preference.empty() && !parse_preference(preference, run)) {
            std::cerr << "error: --preference must be median, half or a number, got '"
                      << preference << "'\n";
            return kExitParse;
        }
        if (format == "json") run.format = ReportFormat::Json;
        if (format == "csv") run.format = ReportFormat::Csv;
        return cmd_run(run, std::cout, std::cerr);
    }
    if (*synth_cmd) return cmd_synth(blobs, synth_seed, synth_out, std::cerr);
    return cmd_bench(suite, std::cout, std::cerr);
}
