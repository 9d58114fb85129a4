#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "adap/adaptive.hpp"
#include "adap/ap_core.hpp"
#include "adap/dataio.hpp"
#include "adap/matrix.hpp"

namespace adap {

// Symmetric nonnegative dissimilarities with a zero diagonal.
struct DissimilarityMatrix {
    Matrix d;

    std::size_t n() const noexcept { return d.rows(); }

    // -s off the diagonal, zero on it.
    static DissimilarityMatrix from_similarity(const SimilarityMatrix& s);
    // Plain (unsquared) Euclidean distances between rows.
    static DissimilarityMatrix euclidean(const Matrix& x);
};

// Mean silhouette over all samples. Labels are arbitrary cluster ids;
// singleton members score 0. Throws Undefined for fewer than two clusters.
double silhouette(std::span<const std::size_t> labels, const DissimilarityMatrix& d);

struct ScoredSolution {
    ClusteringSolution solution;
    double sil = 0.0;
};

// Best-silhouette representative per distinct NC (ascending NC). Records with
// NC < 2 are skipped.
std::vector<ScoredSolution> score_series(const SolutionSeries& series,
                                         const DissimilarityMatrix& d);

// Global silhouette argmax over the series; ties go to the smaller NC.
ClusteringSolution select_best(const SolutionSeries& series, const DissimilarityMatrix& d);

// Pair-counting Fowlkes-Mallows index.
double fowlkes_mallows(std::span<const std::size_t> labels, std::span<const std::size_t> truth);

// Fraction of samples outside the optimal one-to-one cluster/class matching.
// Empty when the two partitions have different numbers of groups.
std::optional<double> error_rate(std::span<const std::size_t> labels,
                                 std::span<const std::size_t> truth);

// Minimum-cost perfect matching on a square cost matrix (Hungarian method).
// Returns the column assigned to each row.
std::vector<std::size_t> min_cost_assignment(const Matrix& cost);

struct ValidityReport {
    std::optional<double> sil;  // absent for a single cluster
    std::optional<double> fm;
    std::optional<double> error_rate;
};

ValidityReport evaluate(const ClusteringSolution& solution, const DissimilarityMatrix& d,
                        const std::optional<std::vector<std::size_t>>& truth);

}  // namespace adap
