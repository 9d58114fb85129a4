#pragma once

// Small synthetic datasets shared by the unit and acceptance tests.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "adap/dataio.hpp"

namespace fixture {

struct Labeled {
    adap::DataMatrix x;
    std::vector<std::size_t> truth;
};

// k isotropic 2-D Gaussian blobs on a square grid whose neighbouring centers
// are `spacing` standard deviations apart.
inline Labeled grid_blobs(std::size_t k, std::size_t per, double spacing, unsigned long long seed,
                          double sigma = 1.0) {
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(k))));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    Labeled out;
    out.x.values = adap::Matrix(k * per, 2);
    for (std::size_t c = 0; c < k; ++c) {
        const double cx = spacing * sigma * static_cast<double>(c % side);
        const double cy = spacing * sigma * static_cast<double>(c / side);
        for (std::size_t j = 0; j < per; ++j) {
            const std::size_t i = c * per + j;
            out.x.values(i, 0) = cx + noise(rng);
            out.x.values(i, 1) = cy + noise(rng);
            out.truth.push_back(c);
        }
    }
    return out;
}

inline adap::DataMatrix rows(const std::vector<std::vector<double>>& pts) {
    adap::DataMatrix x;
    x.values = adap::Matrix(pts.size(), pts.front().size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts[i].size(); ++j) x.values(i, j) = pts[i][j];
    return x;
}

inline adap::DataMatrix unit_square() { return rows({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace fixture
