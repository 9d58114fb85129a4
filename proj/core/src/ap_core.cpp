#include "adap/ap_core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "adap/error.hpp"

namespace adap {

MessageState MessageState::zeros(std::size_t n, double lam) {
    return MessageState{Matrix(n, n), Matrix(n, n), lam};
}

void damp(Matrix& fresh, const Matrix& prev, double lam) {
    if (!(lam >= 0.0 && lam <= 1.0)) {
        std::ostringstream os;
        os << "damping factor " << lam << " outside [0, 1]";
        throw Error(ErrorKind::Contract, os.str());
    }
    if (fresh.rows() != prev.rows() || fresh.cols() != prev.cols())
        throw Error(ErrorKind::Contract, "damp: shape mismatch");
    auto out = fresh.values();
    const auto old = prev.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - lam) * out[i] + lam * old[i];
}

void update_responsibilities(const SimilarityMatrix& s, MessageState& state) {
    const std::size_t n = s.n();
    Matrix fresh(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto srow = s.s.row(i);
        const auto arow = state.a.row(i);
        double best = -std::numeric_limits<double>::infinity();
        double second = best;
        std::size_t best_k = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double v = arow[j] + srow[j];
            if (v > best) {
                second = best;
                best = v;
                best_k = j;
            } else if (v > second) {
                second = v;
            }
        }
        auto out = fresh.row(i);
        for (std::size_t k = 0; k < n; ++k) out[k] = srow[k] - (k == best_k ? second : best);
    }
    damp(fresh, state.r, state.lam);
    state.r = std::move(fresh);
}

void update_availabilities(MessageState& state) {
    const std::size_t n = state.r.rows();
    // column k: sum over j != k of max(0, r(j,k)); r(k,k) is added after the
    // own term is removed so large negative self-responsibilities do not
    // cancel against the positive mass
    std::vector<double> pos(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto rrow = state.r.row(j);
        for (std::size_t k = 0; k < n; ++k)
            if (j != k) pos[k] += std::max(0.0, rrow[k]);
    }
    Matrix fresh(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto rrow = state.r.row(i);
        auto out = fresh.row(i);
        for (std::size_t k = 0; k < n; ++k) {
            if (i == k)
                out[k] = pos[k];
            else
                out[k] = std::min(0.0, state.r(k, k) + (pos[k] - std::max(0.0, rrow[k])));
        }
    }
    damp(fresh, state.a, state.lam);
    state.a = std::move(fresh);
}

ExemplarSet identify_exemplars(const MessageState& state) {
    const std::size_t n = state.r.rows();
    ExemplarSet out;
    std::size_t best = 0;
    double best_ev = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double ev = state.r(k, k) + state.a(k, k);
        if (ev > 0.0) out.indices.push_back(k);
        if (ev > best_ev) {
            best_ev = ev;
            best = k;
        }
    }
    if (out.indices.empty() && n > 0) {
        out.indices.push_back(best);
        out.fallback = true;
    }
    return out;
}

ClusteringSolution assign_clusters(const SimilarityMatrix& s,
                                   const std::vector<std::size_t>& exemplars) {
    if (exemplars.empty()) throw Error(ErrorKind::Contract, "assign_clusters: no exemplars");
    const std::size_t n = s.n();
    ClusteringSolution sol;
    sol.exemplars = exemplars;
    sol.labels.resize(n);
    sol.p_used = n > 0 ? s.preference() : 0.0;
    std::vector<bool> is_exemplar(n, false);
    for (auto k : exemplars) is_exemplar[k] = true;
    for (std::size_t i = 0; i < n; ++i) {
        if (is_exemplar[i]) {
            sol.labels[i] = i;
            continue;
        }
        std::size_t best = exemplars.front();
        for (auto k : exemplars)
            if (s.s(i, k) > s.s(i, best)) best = k;
        sol.labels[i] = best;
    }
    return sol;
}

VanillaResult run_vanilla_ap(SimilarityMatrix s, double p, double lam, std::size_t maxits,
                             std::size_t conv) {
    if (maxits == 0) throw Error(ErrorKind::Contract, "vanilla AP: no iterations requested");
    if (conv == 0) throw Error(ErrorKind::Contract, "vanilla AP: convergence window must be >= 1");
    set_preference(s, p);
    auto state = MessageState::zeros(s.n(), lam);

    VanillaResult result;
    ExemplarSet previous;
    std::size_t streak = 0;
    for (std::size_t it = 1; it <= maxits; ++it) {
        update_responsibilities(s, state);
        update_availabilities(state);
        auto exemplars = identify_exemplars(state);
        if (exemplars.fallback)
            streak = 0;
        else
            streak = exemplars == previous ? streak + 1 : 1;
        previous = std::move(exemplars);
        result.iterations = it;
        if (streak >= conv) {
            result.converged = true;
            break;
        }
    }
    result.solution = assign_clusters(s, previous.indices);
    return result;
}

namespace reference {

void update_responsibilities(const SimilarityMatrix& s, MessageState& state) {
    const std::size_t n = s.n();
    Matrix fresh(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double m = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j)
                if (j != k) m = std::max(m, state.a(i, j) + s.s(i, j));
            fresh(i, k) = s.s(i, k) - m;
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            fresh(i, k) = (1.0 - state.lam) * fresh(i, k) + state.lam * state.r(i, k);
    state.r = std::move(fresh);
}

void update_availabilities(MessageState& state) {
    const std::size_t n = state.r.rows();
    Matrix fresh(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i && j != k) acc += std::max(0.0, state.r(j, k));
            fresh(i, k) = i == k ? acc : std::min(0.0, state.r(k, k) + acc);
        }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            fresh(i, k) = (1.0 - state.lam) * fresh(i, k) + state.lam * state.a(i, k);
    state.a = std::move(fresh);
}

}  // namespace reference
}  // namespace adap
