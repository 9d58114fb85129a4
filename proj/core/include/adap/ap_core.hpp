#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adap/dataio.hpp"
#include "adap/matrix.hpp"

namespace adap {

// Responsibilities, availabilities, and the damping factor applied to both.
struct MessageState {
    Matrix r;
    Matrix a;
    double lam = 0.5;

    static MessageState zeros(std::size_t n, double lam);
};

struct ClusteringSolution {
    std::vector<std::size_t> exemplars;  // ascending point indices
    std::vector<std::size_t> labels;     // exemplar index per point
    double p_used = 0.0;
    std::optional<double> sil;

    std::size_t nc() const noexcept { return exemplars.size(); }
};

// Elementwise (1 - lam) * fresh + lam * prev, written into `fresh`.
void damp(Matrix& fresh, const Matrix& prev, double lam);

// One responsibility sweep, O(n^2) via the row maximum and runner-up.
void update_responsibilities(const SimilarityMatrix& s, MessageState& state);

// One availability sweep, O(n^2) via column sums of positive responsibilities.
void update_availabilities(MessageState& state);

struct ExemplarSet {
    std::vector<std::size_t> indices;  // ascending
    // No point had positive evidence; `indices` holds the argmax fallback.
    bool fallback = false;

    std::size_t size() const noexcept { return indices.size(); }
    friend bool operator==(const ExemplarSet&, const ExemplarSet&) = default;
};

// Points with positive self-evidence r(k,k) + a(k,k). Never empty: falls back
// to the argmax of the self-evidence, lowest index on ties.
ExemplarSet identify_exemplars(const MessageState& state);

// Each non-exemplar joins its most similar exemplar (lowest index on ties).
ClusteringSolution assign_clusters(const SimilarityMatrix& s,
                                   const std::vector<std::size_t>& exemplars);

struct VanillaResult {
    ClusteringSolution solution;
    bool converged = false;
    std::size_t iterations = 0;
};

// Plain AP at a fixed preference. Converged once the same nonempty set of
// positive-evidence exemplars has persisted for `conv` consecutive iterations;
// fallback iterations never count toward convergence.
VanillaResult run_vanilla_ap(SimilarityMatrix s, double p, double lam, std::size_t maxits,
                             std::size_t conv);

// Direct per-formula kernels, O(n^3) per sweep. Used to cross-check the fast
// sweeps; not meant for production runs.
namespace reference {

void update_responsibilities(const SimilarityMatrix& s, MessageState& state);
void update_availabilities(MessageState& state);

}  // namespace reference

}  // namespace adap
