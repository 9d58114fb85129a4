#include "adap/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adap/error.hpp"

namespace adap {

OscillationMonitor::OscillationMonitor(std::size_t window)
    : span_(window / 8), flags_(window, 1), calm_count_(window) {
    if (window == 0) throw Error(ErrorKind::Contract, "oscillation window must be positive");
    recent_.reserve(span_ + 1);
}

Verdict OscillationMonitor::observe(std::size_t k) {
    ++iteration_;
    if (recent_.size() == span_ + 1) recent_.erase(recent_.begin());
    recent_.push_back(k);

    std::size_t sum = 0;
    for (auto v : recent_) sum += v;
    const double mean = static_cast<double>(sum) / static_cast<double>(recent_.size());
    last_decreased_ = iteration_ > 1 && mean < prev_mean_;
    prev_mean_ = mean;

    last_unchanged_ = true;
    for (std::size_t j = 0; j + 1 < recent_.size(); ++j)
        if (recent_[j] != k) last_unchanged_ = false;

    const std::uint8_t flag = (last_decreased_ || last_unchanged_) ? 1 : 0;
    auto& slot = flags_[(iteration_ - 1) % flags_.size()];
    calm_count_ = calm_count_ - slot + flag;
    slot = flag;

    // ks < 2w/3, compared in integers
    return 3 * calm_count_ < 2 * flags_.size() ? Verdict::Oscillating : Verdict::Calm;
}

ScanState ScanState::initial(double pm, const AdaptiveConfig& config) {
    ScanState scan;
    scan.pm = pm;
    scan.p = config.initial_preference.value_or(pm * config.initial_fraction);
    scan.ps = pm * config.step_fraction;
    scan.lam = config.lam0;
    scan.maxits = config.maxits;
    return scan;
}

AdaptAction adapt(Verdict verdict, ScanState& scan, const AdaptiveConfig& config) {
    AdaptAction action;
    if (verdict == Verdict::Calm) return action;
    // tolerance absorbs the rounding of repeated 0.05 increments
    constexpr double eps = 1e-12;
    if (scan.lam < config.lam_gate - eps) {
        scan.lam = std::min(scan.lam + config.lam_step, config.lam_gate);
        if (scan.lam > config.lam_gate - eps) scan.lam = config.lam_gate;
        action.raised_lam = true;
    }
    if (scan.lam >= config.lam_gate - eps) {
        scan.p += scan.ps;
        scan.b = 0;
        scan.escape_engaged = true;
        action.escaped = true;
    }
    return action;
}

ConvergenceWindow::ConvergenceWindow(std::size_t n, std::size_t nu)
    : n_(n), nu_(nu), bits_(n * nu, 0), row_sums_(n, 0) {
    if (nu == 0) throw Error(ErrorKind::Contract, "convergence window must be positive");
}

void ConvergenceWindow::record(const ExemplarSet& exemplars) {
    const std::size_t slot = iteration_ % nu_;
    ++iteration_;
    std::vector<std::uint8_t> member(n_, 0);
    if (!exemplars.fallback)
        for (auto k : exemplars.indices) member[k] = 1;
    for (std::size_t k = 0; k < n_; ++k) {
        auto& bit = bits_[k * nu_ + slot];
        row_sums_[k] = row_sums_[k] - bit + member[k];
        bit = member[k];
    }
}

bool ConvergenceWindow::converged(const ExemplarSet& exemplars) const {
    if (exemplars.fallback || exemplars.indices.empty()) return false;
    std::size_t full = 0;
    for (auto k : exemplars.indices)
        if (row_sums_[k] == nu_) ++full;
    if (full != exemplars.size()) return false;
    std::size_t total_full = 0;
    for (auto sum : row_sums_)
        if (sum == nu_) ++total_full;
    return total_full == exemplars.size();
}

bool check_convergence(ConvergenceWindow& window, const ExemplarSet& exemplars,
                       ScanState& scan) {
    window.record(exemplars);
    const bool hdown = window.converged(exemplars);
    if (!hdown) {
        scan.b = 0;
        scan.nits = 0;
    }
    return hdown;
}

void scan_step(ScanState& scan, std::size_t k) {
    scan.b += 1;
    scan.q = 0.1 * std::sqrt(static_cast<double>(k) + 50.0);
    scan.p += static_cast<double>(scan.b) * scan.ps / scan.q;
    scan.nits = 0;
}

SolutionSeries run_adaptive_scan(SimilarityMatrix s, const AdaptiveConfig& config) {
    if (!(s.pm < 0.0)) {
        std::ostringstream os;
        os << "similarity median pm = " << s.pm
           << " is not negative; the preference scan has no step size";
        throw Error(ErrorKind::Degenerate, os.str());
    }
    if (config.maxits == 0) throw Error(ErrorKind::Contract, "adaptive scan: maxits must be >= 1");

    ScanState scan = ScanState::initial(s.pm, config);
    set_preference(s, scan.p);
    auto state = MessageState::zeros(s.n(), scan.lam);
    OscillationMonitor monitor(config.window);
    ConvergenceWindow window(s.n(), config.nu);

    SolutionSeries series;
    auto& diag = series.diagnostics;
    std::vector<std::size_t> runs(s.n(), 0);  // consecutive iterations as exemplar
    Verdict last_verdict = Verdict::Calm;

    auto record = [&](const ExemplarSet& exemplars, std::size_t it, bool terminal) {
        std::size_t persistence = runs[exemplars.indices.front()];
        for (auto k : exemplars.indices) persistence = std::min(persistence, runs[k]);
        series.records.push_back({assign_clusters(s, exemplars.indices), it, persistence, terminal});
    };

    for (std::size_t it = 1; it <= config.maxits; ++it) {
        update_responsibilities(s, state);
        update_availabilities(state);
        const auto exemplars = identify_exemplars(state);
        const std::size_t k = exemplars.size();
        {
            std::vector<bool> member(s.n(), false);
            if (!exemplars.fallback)
                for (auto e : exemplars.indices) member[e] = true;
            for (std::size_t i = 0; i < s.n(); ++i) runs[i] = member[i] ? runs[i] + 1 : 0;
        }
        diag.iterations = it;

        const Verdict verdict = monitor.observe(k);
        if (verdict == Verdict::Oscillating) {
            ++diag.oscillating_iterations;
            if (last_verdict == Verdict::Calm) ++diag.oscillation_events;
        }
        last_verdict = verdict;
        const AdaptAction action = adapt(verdict, scan, config);
        if (action.escaped) {
            ++diag.escape_events;
            set_preference(s, scan.p);
        }
        state.lam = scan.lam;

        const bool hdown = check_convergence(window, exemplars, scan);
        scan.nits += 1;
        bool stepped = false;
        if (hdown && scan.nits >= config.dy) {
            record(exemplars, it, false);
            scan_step(scan, k);
            set_preference(s, scan.p);
            ++diag.scan_steps;
            stepped = true;
        }

        if (config.record_log)
            series.log.push_back({it, k, state.lam, scan.p, verdict, hdown});

        // Only a converged count may end the scan: early iterations pass
        // through transient small counts on their way down from n.
        if (hdown && k <= config.stop_nc) {
            if (!stepped) record(exemplars, it, true);
            diag.outcome = ScanOutcome::ReachedStop;
            break;
        }
    }
    diag.final_lam = scan.lam;
    diag.final_p = scan.p;
    return series;
}

}  // namespace adap
