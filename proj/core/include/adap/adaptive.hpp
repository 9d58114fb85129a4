#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "adap/ap_core.hpp"
#include "adap/dataio.hpp"

namespace adap {

// Constants of the adaptive damping / escape loop and the preference scan.
struct AdaptiveConfig {
    double lam0 = 0.5;
    double lam_step = 0.05;
    double lam_gate = 0.85;       // cap on lam and trigger for escape
    std::size_t window = 40;      // oscillation monitor length w; smoothing span is w/8
    std::size_t nu = 40;          // iterations an exemplar set must persist
    std::size_t dy = 10;          // confirmation delay before each preference step
    std::size_t maxits = 50000;
    std::size_t stop_nc = 2;      // scan ends once the converged NC drops to this
    double initial_fraction = 0.5;   // p0 = pm * initial_fraction
    double step_fraction = 0.01;     // ps = pm * step_fraction
    std::optional<double> initial_preference;  // overrides p0 when set
    bool record_log = false;
};

enum class Verdict : std::uint8_t { Calm, Oscillating };

// Sliding-window detector over the exemplar count K. An iteration shows a
// non-oscillation feature when the smoothed count fell or K matched each of
// the previous w/8 counts; the run is oscillating once fewer than 2w/3 of the
// last w iterations show one.
class OscillationMonitor {
public:
    explicit OscillationMonitor(std::size_t window = 40);

    Verdict observe(std::size_t k);

    std::size_t window() const noexcept { return flags_.size(); }
    std::size_t smoothing_span() const noexcept { return span_; }
    std::size_t calm_count() const noexcept { return calm_count_; }
    std::size_t iteration() const noexcept { return iteration_; }
    const std::vector<std::uint8_t>& flags() const noexcept { return flags_; }
    bool last_decreased() const noexcept { return last_decreased_; }
    bool last_unchanged() const noexcept { return last_unchanged_; }

private:
    std::size_t span_;
    std::vector<std::uint8_t> flags_;
    std::size_t calm_count_;
    std::vector<std::size_t> recent_;  // at most span_ + 1 latest counts, oldest first
    double prev_mean_ = 0.0;
    std::size_t iteration_ = 0;
    bool last_decreased_ = false;
    bool last_unchanged_ = false;
};

struct ScanState {
    double p = 0.0;
    double pm = 0.0;
    double ps = 0.0;
    std::size_t b = 0;     // acceleration counter
    double q = 1.0;
    double lam = 0.5;
    std::size_t nits = 0;  // iterations since the last reset or preference step
    std::size_t maxits = 50000;
    bool escape_engaged = false;

    static ScanState initial(double pm, const AdaptiveConfig& config);
};

struct AdaptAction {
    bool raised_lam = false;
    bool escaped = false;
};

// Damping increase and escape for one monitor verdict. An escape lowers p by
// the base step ps and clears the acceleration counter.
AdaptAction adapt(Verdict verdict, ScanState& scan, const AdaptiveConfig& config = {});

// Per-point ring buffer of exemplar membership over the last nu iterations.
class ConvergenceWindow {
public:
    ConvergenceWindow(std::size_t n, std::size_t nu = 40);

    // Stores this iteration's membership in slot (iteration - 1) mod nu. A
    // fallback set has no positive evidence and is stored as no members.
    void record(const ExemplarSet& exemplars);

    // True iff the points that were exemplars in all nu slots are exactly
    // `exemplars` (and there is at least one). A fallback set never converges.
    bool converged(const ExemplarSet& exemplars) const;

    std::size_t nu() const noexcept { return nu_; }
    std::size_t row_sum(std::size_t k) const noexcept { return row_sums_[k]; }

private:
    std::size_t n_;
    std::size_t nu_;
    std::size_t iteration_ = 0;
    std::vector<std::uint8_t> bits_;  // n x nu
    std::vector<std::size_t> row_sums_;
};

// Records `exemplars`, evaluates convergence and on failure resets b and nits.
bool check_convergence(ConvergenceWindow& window, const ExemplarSet& exemplars,
                       ScanState& scan);

// Accelerated preference decrease after confirmed convergence at count k:
// b += 1, q = 0.1 sqrt(k + 50), p += b ps / q, nits = 0.
void scan_step(ScanState& scan, std::size_t k);

struct ScanRecord {
    ClusteringSolution solution;
    std::size_t iteration = 0;
    // Fewest consecutive iterations any of the exemplars had held that role.
    std::size_t persistence = 0;
    bool terminal = false;              // recorded by the stop rule rather than a step
};

struct IterationLog {
    std::size_t iteration = 0;
    std::size_t k = 0;
    double lam = 0.0;
    double p = 0.0;
    Verdict verdict = Verdict::Calm;
    bool hdown = false;
};

enum class ScanOutcome { ReachedStop, MaxIterations };

struct ScanDiagnostics {
    std::size_t iterations = 0;
    double final_lam = 0.0;
    double final_p = 0.0;
    std::size_t oscillation_events = 0;      // calm -> oscillating transitions
    std::size_t oscillating_iterations = 0;
    std::size_t escape_events = 0;
    std::size_t scan_steps = 0;
    ScanOutcome outcome = ScanOutcome::MaxIterations;
};

struct SolutionSeries {
    std::vector<ScanRecord> records;
    ScanDiagnostics diagnostics;
    std::vector<IterationLog> log;  // filled when AdaptiveConfig::record_log is set
};

// Single continuous AP run that lowers the preference from pm/2 toward the
// stop count, damping and escaping oscillations on the way. Messages and lam
// carry over across preference changes.
SolutionSeries run_adaptive_scan(SimilarityMatrix s, const AdaptiveConfig& config = {});

}  // namespace adap
