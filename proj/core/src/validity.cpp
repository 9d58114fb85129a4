#include "adap/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "adap/error.hpp"

namespace adap {
namespace {

// Maps arbitrary ids onto 0..k-1 in order of first appearance.
std::vector<std::size_t> compact(std::span<const std::size_t> labels, std::size_t& k) {
    std::map<std::size_t, std::size_t> ids;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (auto l : labels) out.push_back(ids.emplace(l, ids.size()).first->second);
    k = ids.size();
    return out;
}

}  // namespace

DissimilarityMatrix DissimilarityMatrix::from_similarity(const SimilarityMatrix& s) {
    const std::size_t n = s.n();
    DissimilarityMatrix out{Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.d(i, j) = i == j ? 0.0 : -s.s(i, j);
    return out;
}

DissimilarityMatrix DissimilarityMatrix::euclidean(const Matrix& x) {
    const std::size_t n = x.rows();
    DissimilarityMatrix out{Matrix(n, n)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t l = 0; l < x.cols(); ++l) {
                const double diff = x(i, l) - x(j, l);
                d2 += diff * diff;
            }
            out.d(i, j) = out.d(j, i) = std::sqrt(d2);
        }
    return out;
}

double silhouette(std::span<const std::size_t> labels, const DissimilarityMatrix& d) {
    const std::size_t n = labels.size();
    if (d.n() != n) throw Error(ErrorKind::Contract, "silhouette: label/matrix size mismatch");
    std::size_t k = 0;
    const auto ids = compact(labels, k);
    if (k < 2) throw Error(ErrorKind::Undefined, "silhouette needs at least 2 clusters");

    std::vector<std::size_t> sizes(k, 0);
    for (auto c : ids) ++sizes[c];

    double total = 0.0;
    std::vector<double> sums(k);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t own = ids[t];
        if (sizes[own] == 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        const auto row = d.d.row(t);
        for (std::size_t j = 0; j < n; ++j) sums[ids[j]] += row[j];
        const double a = sums[own] / static_cast<double>(sizes[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < k; ++c)
            if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

std::vector<ScoredSolution> score_series(const SolutionSeries& series,
                                         const DissimilarityMatrix& d) {
    std::map<std::size_t, ScoredSolution> best;
    for (const auto& rec : series.records) {
        if (rec.solution.nc() < 2) continue;
        const double sil = silhouette(rec.solution.labels, d);
        auto it = best.find(rec.solution.nc());
        if (it == best.end() || sil > it->second.sil) {
            ScoredSolution scored{rec.solution, sil};
            scored.solution.sil = sil;
            best.insert_or_assign(rec.solution.nc(), std::move(scored));
        }
    }
    std::vector<ScoredSolution> out;
    out.reserve(best.size());
    for (auto& [nc, scored] : best) out.push_back(std::move(scored));
    return out;
}

ClusteringSolution select_best(const SolutionSeries& series, const DissimilarityMatrix& d) {
    const auto scored = score_series(series, d);
    if (scored.empty())
        throw Error(ErrorKind::Undefined, "no solution with at least 2 clusters to select from");
    // ascending NC, so strict > keeps the smaller NC on ties
    const ScoredSolution* best = &scored.front();
    for (const auto& s : scored)
        if (s.sil > best->sil) best = &s;
    return best->solution;
}

double fowlkes_mallows(std::span<const std::size_t> labels, std::span<const std::size_t> truth) {
    if (labels.size() != truth.size())
        throw Error(ErrorKind::Contract, "fowlkes_mallows: partitions differ in length");
    if (labels.empty()) throw Error(ErrorKind::Contract, "fowlkes_mallows: empty partitions");
    std::size_t kl = 0;
    std::size_t kt = 0;
    const auto a = compact(labels, kl);
    const auto b = compact(truth, kt);

    // pair counts from the contingency table
    std::vector<double> table(kl * kt, 0.0);
    std::vector<double> rows(kl, 0.0);
    std::vector<double> cols(kt, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        table[a[i] * kt + b[i]] += 1.0;
        rows[a[i]] += 1.0;
        cols[b[i]] += 1.0;
    }
    auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
    double tp = 0.0;
    for (double m : table) tp += pairs(m);
    double in_labels = 0.0;
    for (double m : rows) in_labels += pairs(m);
    double in_truth = 0.0;
    for (double m : cols) in_truth += pairs(m);
    // in_labels = TP + FP, in_truth = TP + FN
    if (tp == 0.0) return 0.0;
    return tp / std::sqrt(in_labels * in_truth);
}

std::vector<std::size_t> min_cost_assignment(const Matrix& cost) {
    const std::size_t n = cost.rows();
    if (cost.cols() != n) throw Error(ErrorKind::Contract, "assignment needs a square cost matrix");
    // Shortest augmenting path formulation with potentials, 1-based internally.
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> out(n);
    for (std::size_t j = 1; j <= n; ++j) out[match[j] - 1] = j - 1;
    return out;
}

std::optional<double> error_rate(std::span<const std::size_t> labels,
                                 std::span<const std::size_t> truth) {
    if (labels.size() != truth.size())
        throw Error(ErrorKind::Contract, "error_rate: partitions differ in length");
    if (labels.empty()) throw Error(ErrorKind::Contract, "error_rate: empty partitions");
    std::size_t kl = 0;
    std::size_t kt = 0;
    const auto a = compact(labels, kl);
    const auto b = compact(truth, kt);
    if (kl != kt) return std::nullopt;

    Matrix cost(kl, kl);
    for (std::size_t i = 0; i < a.size(); ++i) cost(a[i], b[i]) -= 1.0;
    const auto assignment = min_cost_assignment(cost);
    double agree = 0.0;
    for (std::size_t r = 0; r < kl; ++r) agree -= cost(r, assignment[r]);
    return 1.0 - agree / static_cast<double>(a.size());
}

ValidityReport evaluate(const ClusteringSolution& solution, const DissimilarityMatrix& d,
                        const std::optional<std::vector<std::size_t>>& truth) {
    ValidityReport report;
    if (solution.nc() >= 2) report.sil = silhouette(solution.labels, d);
    if (truth) {
        report.fm = fowlkes_mallows(solution.labels, *truth);
        report.error_rate = error_rate(solution.labels, *truth);
    }
    return report;
}

}  // namespace adap
