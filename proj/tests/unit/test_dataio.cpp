#include <doctest.h>

#include <random>
#include <sstream>

#include "adap/dataio.hpp"
#include "adap/error.hpp"
#include "oracles.hpp"

using namespace adap;

namespace {

DataMatrix rows(std::vector<std::vector<double>> v) {
    DataMatrix x;
    x.values = Matrix(v.size(), v.front().size());
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = 0; j < v[i].size(); ++j) x.values(i, j) = v[i][j];
    return x;
}

DataMatrix parse(const std::string& text, CsvOptions opts = {}) {
    std::istringstream in(text);
    return load_dataset(in, opts);
}

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected adap::Error");
    return ErrorKind::Contract;
}

}  // namespace

TEST_CASE("load_dataset parses plain and headed CSV") {
    auto x = parse("0,0\n3,4");
    REQUIRE(x.n() == 2);
    REQUIRE(x.d() == 2);
    CHECK(x.values(1, 0) == 3.0);
    CHECK(x.values(1, 1) == 4.0);
    CHECK_FALSE(x.truth_labels.has_value());

    auto h = parse("x,y\n0,0\n3,4\n", {true, {}});
    CHECK(h.values == x.values);
}

TEST_CASE("load_dataset splits out the label column") {
    auto x = parse("a,1,2\nb,3,4\na,5,6\r\n", {false, 0});
    REQUIRE(x.d() == 2);
    REQUIRE(x.truth_labels);
    CHECK(*x.truth_labels == std::vector<int>{0, 1, 0});
    CHECK(x.label_names == std::vector<std::string>{"a", "b"});
    CHECK(x.values(2, 1) == 6.0);

    auto last = parse("1,2,x\n3,4,y\n", {false, -1});
    CHECK(*last.truth_labels == std::vector<int>{0, 1});
    CHECK(last.values(1, 0) == 3.0);
}

TEST_CASE("load_dataset reports malformed input") {
    SUBCASE("ragged row names the row") {
        try {
            parse("0,0\n3");
            FAIL("no throw");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
            CHECK(std::string(e.what()).find("ragged row 2") != std::string::npos);
        }
    }
    SUBCASE("non-numeric cell names row and column") {
        try {
            parse("0,0\n3,abc\n");
            FAIL("no throw");
        } catch (const Error& e) {
            CHECK(std::string(e.what()).find("row 2, column 2") != std::string::npos);
        }
    }
    SUBCASE("fewer than two samples") {
        CHECK(kind_of([] { parse("1,2\n"); }) == ErrorKind::Parse);
    }
    SUBCASE("label column out of range") {
        CHECK(kind_of([] { parse("1,2\n3,4\n", {false, 5}); }) == ErrorKind::Parse);
    }
}

TEST_CASE("euclidean_similarity is the negated squared distance") {
    auto s = euclidean_similarity(rows({{0, 0}, {3, 4}}));
    CHECK(s.s(0, 1) == -25.0);
    CHECK(s.s(1, 0) == -25.0);

    auto same = euclidean_similarity(rows({{1, 1}, {1, 1}}));
    CHECK(same.s(0, 1) == 0.0);
    CHECK(same.pm == 0.0);

    // pairs: (0,1) -> 1, (0,3) -> 9, (1,3) -> 4
    auto line = euclidean_similarity(rows({{0}, {1}, {3}}));
    CHECK(line.s(0, 1) == -1.0);
    CHECK(line.s(0, 2) == -9.0);
    CHECK(line.s(1, 2) == -4.0);
    CHECK(line.pm == -4.0);
}

TEST_CASE("pearson_similarity maps correlation into [-1, 0]") {
    CHECK(pearson_similarity(rows({{1, 2, 3}, {2, 4, 6}})).s(0, 1) == doctest::Approx(0.0));
    CHECK(pearson_similarity(rows({{1, 2, 3}, {3, 2, 1}})).s(0, 1) == doctest::Approx(-1.0));

    const std::vector<double> a{1, 2, 3, 4}, b{1, 3, 2, 4};
    const double r = oracle::pearson(a, b);
    CHECK(r == doctest::Approx(0.8).epsilon(1e-12));
    const auto s = pearson_similarity(rows({a, b}));
    CHECK(s.s(0, 1) == doctest::Approx(-(1.0 - (1.0 + r) / 2.0)).epsilon(1e-12));
    CHECK(s.s(0, 1) == doctest::Approx(-0.1).epsilon(1e-12));
}

TEST_CASE("pearson_similarity rejects zero-variance rows") {
    try {
        pearson_similarity(rows({{1, 2, 3}, {5, 5, 5}}));
        FAIL("no throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Degenerate);
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
}

namespace {

Matrix from_pairs(std::size_t n, const std::vector<double>& pairs) {
    Matrix m(n, n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = pairs[idx++];
    return m;
}

}  // namespace

TEST_CASE("preference_median") {
    CHECK(preference_median(from_pairs(3, {-1, -9, -4})) == -4.0);
    // even count: {-1,-2,-3,-4} plus two more at the extremes
    CHECK(preference_median(from_pairs(4, {-1, -2, -3, -4, -0.5, -5})) == -2.5);
    CHECK(preference_median(from_pairs(4, {-1, -2, -3, -4, -4, -4})) == -3.5);

    auto ident = euclidean_similarity(rows({{2, 2}, {2, 2}, {2, 2}}));
    CHECK(kind_of([&] { preference_median(ident.s); }) == ErrorKind::Degenerate);
}

TEST_CASE("preference_median matches a sort-and-pick oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + rng() % 20;
        auto g = oracle::random_similarity(n, rng);
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) m(i, j) = m(j, i) = g[i][j];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g[i][j] = m(i, j);
        CHECK(preference_median(m) == oracle::median_offdiag(g));
    }
}

TEST_CASE("set_preference overwrites only the diagonal") {
    auto s = euclidean_similarity(rows({{0, 0}, {3, 4}, {1, 1}}));
    const Matrix before = s.s;
    set_preference(s, -4);
    CHECK(s.s(0, 0) == -4);
    CHECK(s.s(2, 2) == -4);
    set_preference(s, -7);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            if (i == j)
                CHECK(s.s(i, j) == -7);
            else
                CHECK(s.s(i, j) == before(i, j));
        }
    CHECK(kind_of([&] { set_preference(s, std::nan("")); }) == ErrorKind::Contract);
}

TEST_CASE("similarity properties: symmetry, range, permutation") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + rng() % 15;
        const std::size_t d = 2 + rng() % 5;
        DataMatrix x;
        x.values = Matrix(n, d);
        for (double& v : x.values.values()) v = g(rng);
        for (auto* build : {&euclidean_similarity, &pearson_similarity}) {
            const auto s = build(x);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j) continue;
                    CHECK(s.s(i, j) == s.s(j, i));
                    CHECK(s.s(i, j) <= 0.0);
                }
            if (build == &pearson_similarity)
                for (double v : s.s.values()) CHECK(v >= -1.0);

            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            DataMatrix y;
            y.values = Matrix(n, d);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t l = 0; l < d; ++l) y.values(i, l) = x.values(perm[i], l);
            const auto t = build(y);
            CHECK(t.pm == s.pm);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j) CHECK(t.s(i, j) == s.s(perm[i], perm[j]));
        }
    }
}

TEST_CASE("load_similarity validates square symmetric input") {
    std::istringstream ok("0,-1,-2\n-1,5,-3\n-2,-3,0\n");
    auto s = load_similarity(ok);
    CHECK(s.s(1, 1) == 0.0);
    CHECK(s.pm == -2.0);

    std::istringstream ragged("0,-1\n-1,0,3\n");
    CHECK(kind_of([&] { load_similarity(ragged); }) == ErrorKind::Parse);
    std::istringstream wide("0,-1,-2\n-1,0,-3\n");
    CHECK(kind_of([&] { load_similarity(wide); }) == ErrorKind::Parse);
    std::istringstream asym("0,-1\n-1.5,0\n");
    CHECK(kind_of([&] { load_similarity(asym); }) == ErrorKind::Parse);
}

TEST_CASE("standardize gives zero mean and unit variance columns") {
    auto z = standardize(rows({{1, 10}, {2, 10}, {3, 10}}));
    CHECK(z.values(0, 0) == doctest::Approx(-std::sqrt(1.5)));
    CHECK(z.values(1, 0) == doctest::Approx(0.0));
    CHECK(z.values(2, 1) == 0.0);
}

TEST_CASE("add_jitter is deterministic, symmetric and tiny") {
    auto s = euclidean_similarity(rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    auto a = s, b = s;
    add_jitter(a, 5);
    add_jitter(b, 5);
    CHECK(a.s == b.s);
    CHECK(a.s(0, 1) == a.s(1, 0));
    CHECK(a.s(0, 1) != s.s(0, 1));
    CHECK(a.s(0, 1) == doctest::Approx(s.s(0, 1)).epsilon(1e-10));
}
