#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adap/adaptive.hpp"
#include "adap/dataio.hpp"
#include "adap/validity.hpp"

namespace adap::cli {

enum class Measure { Euclidean, Pearson, Precomputed };
enum class Mode { Adaptive, Vanilla };
enum class PreferencePolicy { Median, HalfMedian, Explicit };
enum class ReportFormat { Json, Csv };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitDegenerate = 3;
inline constexpr int kExitNotConverged = 4;
inline constexpr int kExitBenchFailed = 5;

struct RunConfig {
    std::string input;
    Measure measure = Measure::Euclidean;
    Mode mode = Mode::Adaptive;
    // Unset means the mode's default: half-median for adaptive, median for vanilla.
    std::optional<PreferencePolicy> preference;
    double preference_value = 0.0;
    double lam = 0.5;
    std::optional<std::size_t> maxits;  // unset: 50000 adaptive, 2000 vanilla
    std::size_t nu = 40;
    std::size_t dy = 10;
    std::size_t window = 40;
    bool header = false;
    std::optional<int> label_column;
    bool standardize = false;
    bool jitter = false;
    unsigned long long seed = 0;
    std::string out;
    std::optional<ReportFormat> format;  // unset: from the output file extension
    std::string log;                     // per-iteration CSV, empty for none

    std::size_t effective_maxits() const;
    PreferencePolicy effective_preference() const;
    // Iterations an unchanged exemplar set needs before vanilla AP stops.
    std::size_t vanilla_conv() const { return nu + dy; }
    AdaptiveConfig adaptive_config() const;
};

struct NcRow {
    std::size_t nc = 0;
    double p_used = 0.0;
    std::optional<double> sil;
    std::optional<double> fm;
    std::optional<double> error;
};

struct RunReport {
    Mode mode = Mode::Adaptive;
    std::size_t n = 0;
    double pm = 0.0;
    std::vector<NcRow> table;  // ascending NC
    ClusteringSolution best;
    ValidityReport best_validity;
    // diagnostics
    std::size_t iterations = 0;
    std::size_t oscillation_events = 0;
    std::size_t escape_events = 0;
    std::size_t scan_steps = 0;
    double final_lam = 0.0;
    double final_p = 0.0;
    bool converged = true;
    std::string outcome;
    double wall_seconds = 0.0;
};

// Loads, clusters and scores without writing anything.
RunReport execute_run(const RunConfig& config);

// execute_run plus report emission; returns the process exit code.
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

nlohmann::json report_to_json(const RunReport& report);
std::string report_to_csv(const RunReport& report);
void print_table(const RunReport& report, std::ostream& out);

struct BlobSpec {
    std::vector<double> center;
    double sigma = 1.0;
    std::size_t count = 0;
};

// "x1,x2,...:sigma:count;..." one blob per ';'-separated entry.
std::vector<BlobSpec> parse_blobs(const std::string& spec);

// CSV with header x1..xd,label and one row per point, blobs in order.
std::string synth_csv(const std::vector<BlobSpec>& blobs, unsigned long long seed);

int cmd_synth(const std::string& blobs, unsigned long long seed, const std::string& out,
              std::ostream& err);

// Runs every manifest entry in adaptive and vanilla mode, prints a summary
// table and checks expectations. Returns the process exit code.
int cmd_bench(const std::string& suite_path, std::ostream& out, std::ostream& err);

}  // namespace adap::cli
