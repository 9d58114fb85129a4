#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include "adap/error.hpp"
#include "commands.hpp"
#include "internal.hpp"

namespace adap::cli {

std::size_t RunConfig::effective_maxits() const {
    if (maxits) return *maxits;
    return mode == Mode::Adaptive ? 50000 : 2000;
}

PreferencePolicy RunConfig::effective_preference() const {
    if (preference) return *preference;
    return mode == Mode::Adaptive ? PreferencePolicy::HalfMedian : PreferencePolicy::Median;
}

AdaptiveConfig RunConfig::adaptive_config() const {
    AdaptiveConfig cfg;
    cfg.lam0 = lam;
    cfg.window = window;
    cfg.nu = nu;
    cfg.dy = dy;
    cfg.maxits = effective_maxits();
    cfg.record_log = !log.empty();
    return cfg;
}

Prepared prepare(const RunConfig& config, std::istream& source) {
    Prepared out;
    if (config.measure == Measure::Precomputed) {
        out.s = stage("load", [&] { return load_similarity(source, config.header); });
        return out;
    }
    DataMatrix x = stage("load", [&] {
        return load_dataset(source, CsvOptions{config.header, config.label_column});
    });
    if (x.truth_labels) out.truth.emplace(x.truth_labels->begin(), x.truth_labels->end());
    if (config.standardize) x = standardize(x);
    out.s = stage("similarity", [&] {
        return config.measure == Measure::Pearson ? pearson_similarity(x) : euclidean_similarity(x);
    });
    return out;
}

Prepared prepare(const RunConfig& config) {
    std::ifstream in(config.input);
    if (!in) throw Error(ErrorKind::Parse, "load: cannot open input file '" + config.input + "'");
    return prepare(config, in);
}

namespace {

NcRow make_row(const ClusteringSolution& sol, const ValidityReport& v) {
    return NcRow{sol.nc(), sol.p_used, v.sil, v.fm, v.error_rate};
}

}  // namespace

RunReport cluster(const RunConfig& config, const Prepared& prepared,
                  std::vector<IterationLog>* log) {
    const SimilarityMatrix& clean = prepared.s;
    const auto d = DissimilarityMatrix::from_similarity(clean);
    const auto policy = config.effective_preference();

    std::optional<double> pm;
    if (config.mode == Mode::Adaptive || policy != PreferencePolicy::Explicit)
        pm = stage("similarity", [&] { return preference_median(clean.s); });

    SimilarityMatrix s = clean;
    if (config.jitter) add_jitter(s, config.seed);

    RunReport report;
    report.mode = config.mode;
    report.n = s.n();
    report.pm = clean.pm;

    if (config.mode == Mode::Adaptive) {
        AdaptiveConfig cfg = config.adaptive_config();
        if (policy == PreferencePolicy::Median)
            cfg.initial_preference = *pm;
        else if (policy == PreferencePolicy::Explicit)
            cfg.initial_preference = config.preference_value;
        if (log) cfg.record_log = true;

        const SolutionSeries series = stage("scan", [&] { return run_adaptive_scan(s, cfg); });
        const auto& diag = series.diagnostics;
        report.iterations = diag.iterations;
        report.oscillation_events = diag.oscillation_events;
        report.escape_events = diag.escape_events;
        report.scan_steps = diag.scan_steps;
        report.final_lam = diag.final_lam;
        report.final_p = diag.final_p;
        report.outcome = diag.outcome == ScanOutcome::ReachedStop ? "reached_stop" : "max_iterations";
        if (log) *log = series.log;

        if (series.records.empty())
            throw Error(ErrorKind::Undefined,
                        "scan: iteration budget exhausted before any convergence event");
        const auto scored = stage("select", [&] { return score_series(series, d); });
        for (const auto& sc : scored) {
            ValidityReport v;
            v.sil = sc.sil;
            if (prepared.truth) {
                v.fm = fowlkes_mallows(sc.solution.labels, *prepared.truth);
                v.error_rate = error_rate(sc.solution.labels, *prepared.truth);
            }
            report.table.push_back(make_row(sc.solution, v));
        }
        report.best = stage("select", [&] { return select_best(series, d); });
        report.best_validity = evaluate(report.best, d, prepared.truth);
        return report;
    }

    double p = config.preference_value;
    if (policy == PreferencePolicy::Median) p = *pm;
    if (policy == PreferencePolicy::HalfMedian) p = *pm / 2.0;
    const VanillaResult result = stage("ap", [&] {
        return run_vanilla_ap(s, p, config.lam, config.effective_maxits(), config.vanilla_conv());
    });
    report.iterations = result.iterations;
    report.final_lam = config.lam;
    report.final_p = p;
    report.converged = result.converged;
    report.outcome = result.converged ? "converged" : "not_converged";
    report.best = result.solution;
    report.best_validity = evaluate(report.best, d, prepared.truth);
    report.best.sil = report.best_validity.sil;
    report.table.push_back(make_row(report.best, report.best_validity));
    return report;
}

RunReport execute_run(const RunConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report = cluster(config, prepare(config), nullptr);
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::Parse: return kExitParse;
    case ErrorKind::Degenerate: return kExitDegenerate;
    default: return kExitFailure;
    }
}

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const auto start = std::chrono::steady_clock::now();
        std::vector<IterationLog> log;
        RunReport report = cluster(config, prepare(config), config.log.empty() ? nullptr : &log);
        report.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        if (!config.log.empty()) write_file(config.log, iteration_log_csv(log));
        if (!config.out.empty()) {
            ReportFormat format = config.format.value_or(
                config.out.size() >= 4 && config.out.substr(config.out.size() - 4) == ".csv"
                    ? ReportFormat::Csv
                    : ReportFormat::Json);
            write_file(config.out, format == ReportFormat::Json
                                       ? report_to_json(report).dump(2) + "\n"
                                       : report_to_csv(report));
        }
        // keep stdout clean when the report itself goes there
        print_table(report, config.out == "-" ? err : out);
        if (config.mode == Mode::Vanilla && !report.converged) {
            err << "ap: vanilla AP did not converge within " << report.iterations
                << " iterations\n";
            return kExitNotConverged;
        }
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}

}  // namespace adap::cli
