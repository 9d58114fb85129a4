#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "adap/matrix.hpp"

namespace adap {

// n samples by d features, with optional ground-truth class labels.
struct DataMatrix {
    Matrix values;
    // Class ids in first-appearance order of the label column (0-based).
    std::optional<std::vector<int>> truth_labels;
    // Original label strings indexed by class id.
    std::vector<std::string> label_names;

    std::size_t n() const noexcept { return values.rows(); }
    std::size_t d() const noexcept { return values.cols(); }
};

struct CsvOptions {
    bool header = false;
    // Column index holding class labels; negative values count from the end
    // (-1 is the last column).
    std::optional<int> label_column;
};

// Off-diagonal entries are similarities (<= 0); the diagonal holds the shared
// preference. pm is the median of the off-diagonal entries.
struct SimilarityMatrix {
    Matrix s;
    double pm = 0.0;

    std::size_t n() const noexcept { return s.rows(); }
    double preference() const noexcept { return s(0, 0); }
};

DataMatrix load_dataset(std::istream& source, const CsvOptions& options = {});
DataMatrix load_dataset_file(const std::string& path, const CsvOptions& options = {});

// Reads a square similarity matrix. Must be symmetric within `symmetry_tol`;
// the diagonal is discarded and reset to zero.
SimilarityMatrix load_similarity(std::istream& source, bool header = false,
                                 double symmetry_tol = 1e-9);

// Column-wise z-scoring. Constant columns are centred but left unscaled.
DataMatrix standardize(const DataMatrix& x);

SimilarityMatrix euclidean_similarity(const DataMatrix& x);
SimilarityMatrix pearson_similarity(const DataMatrix& x);

// Median of the n(n-1)/2 unique off-diagonal pairs. Throws Degenerate when
// every pair is exactly zero.
double preference_median(const Matrix& s);

void set_preference(SimilarityMatrix& s, double p);

// Symmetric multiplicative noise on the off-diagonal, of relative magnitude
// `scale`. Deterministic in `seed`. Leaves pm untouched.
void add_jitter(SimilarityMatrix& s, unsigned long long seed, double scale = 1e-12);

}  // namespace adap
