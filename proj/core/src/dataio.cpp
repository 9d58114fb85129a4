#include "adap/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "adap/error.hpp"

namespace adap {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return cells;
}

[[noreturn]] void parse_error(std::size_t row, std::size_t col, const std::string& msg) {
    std::ostringstream os;
    os << "parse error at row " << row;
    if (col > 0) os << ", column " << col;
    os << ": " << msg;
    throw Error(ErrorKind::Parse, os.str());
}

double parse_number(std::string_view cell, std::size_t row, std::size_t col) {
    if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size())
        parse_error(row, col, "non-numeric cell '" + std::string(cell) + "'");
    if (!std::isfinite(value)) parse_error(row, col, "non-finite value");
    return value;
}

struct RawTable {
    std::vector<std::vector<std::string_view>> rows;
    std::vector<std::size_t> line_numbers;
    std::vector<std::string> storage;
};

// Splits CSV text into trimmed cells, skipping blank lines and (optionally)
// the header row. Checks that every row has the width of the first one.
RawTable read_table(std::istream& source, bool header) {
    RawTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = header;
    while (std::getline(source, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        table.storage.push_back(std::move(line));
        table.line_numbers.push_back(line_no);
    }
    for (std::size_t r = 0; r < table.storage.size(); ++r) {
        table.rows.push_back(split_cells(table.storage[r]));
        if (table.rows[r].size() != table.rows.front().size()) {
            std::ostringstream os;
            os << "ragged row " << table.line_numbers[r] << ": expected "
               << table.rows.front().size() << " cells, found " << table.rows[r].size();
            parse_error(table.line_numbers[r], 0, os.str());
        }
    }
    return table;
}

double median_of_pairs(const Matrix& s) {
    const std::size_t n = s.rows();
    std::vector<double> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.push_back(s(i, j));
    if (pairs.empty()) return 0.0;
    std::sort(pairs.begin(), pairs.end());
    const std::size_t m = pairs.size();
    return m % 2 == 1 ? pairs[m / 2] : 0.5 * (pairs[m / 2 - 1] + pairs[m / 2]);
}

void validate(const DataMatrix& x) {
    if (x.n() < 2) throw Error(ErrorKind::Contract, "dataset needs at least 2 samples");
    if (x.d() < 1) throw Error(ErrorKind::Contract, "dataset needs at least 1 feature");
    for (double v : x.values.values())
        if (!std::isfinite(v)) throw Error(ErrorKind::Contract, "dataset contains non-finite values");
}

}  // namespace

DataMatrix load_dataset(std::istream& source, const CsvOptions& options) {
    RawTable table = read_table(source, options.header);
    if (table.rows.size() < 2) {
        std::ostringstream os;
        os << "dataset has " << table.rows.size() << " data rows, at least 2 required";
        throw Error(ErrorKind::Parse, os.str());
    }
    const std::size_t width = table.rows.front().size();

    std::optional<std::size_t> label_col;
    if (options.label_column) {
        int c = *options.label_column;
        if (c < 0) c += static_cast<int>(width);
        if (c < 0 || static_cast<std::size_t>(c) >= width) {
            std::ostringstream os;
            os << "label column " << *options.label_column << " out of range for " << width
               << " columns";
            throw Error(ErrorKind::Parse, os.str());
        }
        label_col = static_cast<std::size_t>(c);
    }
    const std::size_t d = width - (label_col ? 1 : 0);
    if (d == 0) throw Error(ErrorKind::Parse, "dataset has no feature columns");

    DataMatrix out;
    out.values = Matrix(table.rows.size(), d);
    std::map<std::string, int, std::less<>> ids;
    std::vector<int> labels;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        std::size_t f = 0;
        for (std::size_t c = 0; c < width; ++c) {
            const auto cell = table.rows[r][c];
            if (label_col && c == *label_col) {
                auto it = ids.find(cell);
                if (it == ids.end()) {
                    it = ids.emplace(std::string(cell), static_cast<int>(ids.size())).first;
                    out.label_names.emplace_back(cell);
                }
                labels.push_back(it->second);
                continue;
            }
            out.values(r, f++) = parse_number(cell, table.line_numbers[r], c + 1);
        }
    }
    if (label_col) out.truth_labels = std::move(labels);
    return out;
}

DataMatrix load_dataset_file(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open input file '" + path + "'");
    return load_dataset(in, options);
}

SimilarityMatrix load_similarity(std::istream& source, bool header, double symmetry_tol) {
    RawTable table = read_table(source, header);
    const std::size_t n = table.rows.size();
    if (n < 2) throw Error(ErrorKind::Parse, "similarity matrix needs at least 2 rows");
    if (table.rows.front().size() != n) {
        std::ostringstream os;
        os << "similarity matrix is not square: " << n << " rows, "
           << table.rows.front().size() << " columns";
        throw Error(ErrorKind::Parse, os.str());
    }
    SimilarityMatrix out;
    out.s = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.s(i, j) = i == j ? 0.0 : parse_number(table.rows[i][j], table.line_numbers[i], j + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(out.s(i, j) - out.s(j, i)) > symmetry_tol) {
                std::ostringstream os;
                os << "similarity matrix is not symmetric at (" << i + 1 << ", " << j + 1 << ")";
                parse_error(table.line_numbers[i], j + 1, os.str());
            }
    out.pm = median_of_pairs(out.s);
    return out;
}

DataMatrix standardize(const DataMatrix& x) {
    validate(x);
    DataMatrix out = x;
    const std::size_t n = x.n();
    for (std::size_t c = 0; c < x.d(); ++c) {
        double mean = 0.0;
        for (std::size_t r = 0; r < n; ++r) mean += x.values(r, c);
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dv = x.values(r, c) - mean;
            var += dv * dv;
        }
        const double sd = std::sqrt(var / static_cast<double>(n));
        for (std::size_t r = 0; r < n; ++r)
            out.values(r, c) = sd > 0.0 ? (x.values(r, c) - mean) / sd : x.values(r, c) - mean;
    }
    return out;
}

SimilarityMatrix euclidean_similarity(const DataMatrix& x) {
    validate(x);
    const std::size_t n = x.n();
    SimilarityMatrix out;
    out.s = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.values.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto xj = x.values.row(j);
            double d2 = 0.0;
            for (std::size_t l = 0; l < xi.size(); ++l) {
                const double diff = xi[l] - xj[l];
                d2 += diff * diff;
            }
            out.s(i, j) = -d2;
            out.s(j, i) = -d2;
        }
    }
    out.pm = median_of_pairs(out.s);
    return out;
}

SimilarityMatrix pearson_similarity(const DataMatrix& x) {
    validate(x);
    const std::size_t n = x.n();
    const std::size_t d = x.d();
    Matrix centred(n, d);
    std::vector<double> norm(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto xi = x.values.row(i);
        double mean = 0.0;
        for (double v : xi) mean += v;
        mean /= static_cast<double>(d);
        double ss = 0.0;
        for (std::size_t l = 0; l < d; ++l) {
            centred(i, l) = xi[l] - mean;
            ss += centred(i, l) * centred(i, l);
        }
        if (!(ss > 0.0)) {
            std::ostringstream os;
            os << "row " << i + 1 << " has zero variance; Pearson correlation is undefined";
            throw Error(ErrorKind::Degenerate, os.str());
        }
        norm[i] = std::sqrt(ss);
    }
    SimilarityMatrix out;
    out.s = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t l = 0; l < d; ++l) dot += centred(i, l) * centred(j, l);
            const double r = std::clamp(dot / (norm[i] * norm[j]), -1.0, 1.0);
            // distance 1 - (1 + r)/2 mapped into [0, 1], similarity is its negation
            const double sim = -(1.0 - (1.0 + r) / 2.0);
            out.s(i, j) = sim;
            out.s(j, i) = sim;
        }
    }
    out.pm = median_of_pairs(out.s);
    return out;
}

double preference_median(const Matrix& s) {
    if (s.rows() < 2 || s.rows() != s.cols())
        throw Error(ErrorKind::Contract, "preference median needs a square matrix with n >= 2");
    bool all_zero = true;
    for (std::size_t i = 0; i < s.rows() && all_zero; ++i)
        for (std::size_t j = i + 1; j < s.rows(); ++j)
            if (s(i, j) != 0.0) {
                all_zero = false;
                break;
            }
    if (all_zero)
        throw Error(ErrorKind::Degenerate,
                    "all pairwise similarities are zero; the preference scale is degenerate");
    return median_of_pairs(s);
}

void set_preference(SimilarityMatrix& s, double p) {
    if (!std::isfinite(p)) throw Error(ErrorKind::Contract, "preference must be finite");
    for (std::size_t k = 0; k < s.n(); ++k) s.s(k, k) = p;
}

void add_jitter(SimilarityMatrix& s, unsigned long long seed, double scale) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < s.n(); ++i)
        for (std::size_t j = i + 1; j < s.n(); ++j) {
            const double v = s.s(i, j);
            const double noisy = v - (scale * std::abs(v) + 1e-300) * unit(rng);
            s.s(i, j) = noisy;
            s.s(j, i) = noisy;
        }
}

}  // namespace adap
