#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tle/errors.hpp"

// Shared geometric and statistical primitives. All accumulations run in a
// fixed order (ascending index, ascending pair order) so results are
// bit-reproducible across runs.

namespace tle {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw ValidationError("euclidean_distance: dimension mismatch");
    return std::sqrt(squared_distance(a, b));
}

/// All C(n,2) unordered-pair distances in lexicographic pair order (i<j).
template <typename RowAccess>
std::vector<double> pairwise_distances_impl(std::size_t n, RowAccess row) {
    if (n < 2)
        throw ValidationError("pairwise_distances: need at least 2 rows");
    std::vector<double> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.push_back(euclidean_distance(row(i), row(j)));
    return out;
}

inline std::vector<double> pairwise_distances(const std::vector<std::vector<double>>& rows) {
    return pairwise_distances_impl(rows.size(), [&](std::size_t i) {
        return std::span<const double>(rows[i]);
    });
}

/// Per-dimension arithmetic mean of the given rows.
template <typename RowAccess>
std::vector<double> centroid_impl(std::size_t n, std::size_t dim, RowAccess row) {
    if (n == 0)
        throw ValidationError("centroid: empty input");
    std::vector<double> c(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = row(i);
        if (r.size() != dim)
            throw ValidationError("centroid: dimension mismatch");
        for (std::size_t k = 0; k < dim; ++k) c[k] += r[k];
    }
    for (std::size_t k = 0; k < dim; ++k) c[k] /= static_cast<double>(n);
    return c;
}

inline std::vector<double> centroid(const std::vector<std::vector<double>>& rows) {
    if (rows.empty())
        throw ValidationError("centroid: empty input");
    return centroid_impl(rows.size(), rows[0].size(), [&](std::size_t i) {
        return std::span<const double>(rows[i]);
    });
}

inline double mean(std::span<const double> xs) {
    if (xs.empty())
        throw ValidationError("mean: empty input");
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

/// Population standard deviation (divide by n, not n-1), so it is defined
/// for as few as one value.
inline double population_stddev(std::span<const double> xs) {
    const double mu = mean(xs);
    double acc = 0.0;
    for (double x : xs) {
        const double d = x - mu;
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

} // namespace tle
