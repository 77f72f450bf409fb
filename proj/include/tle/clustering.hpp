#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tle/dataset.hpp"

namespace tle {

struct KMeansParams {
    std::size_t k = 1;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 300;
    double tolerance = 1e-4;   // max centroid displacement for convergence
    std::size_t n_init = 10;   // restarts; best inertia wins
};

struct ClusterAssignment {
    std::vector<std::size_t> assignments;  // cluster index per row, in [0,k)
    Matrix centroids;                      // k x D
    std::size_t iterations_run = 0;
    bool converged = false;
    double inertia = 0.0;  // sum of squared distances to assigned centroids
};

/// Lloyd's algorithm with k-means++ initialization.
///
/// Deterministic for fixed (matrix, params): centers are seeded by the
/// k-means++ scheme driven by std::mt19937_64 (see rng.hpp for the exact
/// conversions), restarts consume one sequential engine stream, nearest-
/// centroid ties break toward the lower cluster index, and clusters that
/// empty out are repaired by reseeding them with the point farthest from
/// its current centroid (lowest index on ties).
ClusterAssignment kmeans(const Matrix& matrix, const KMeansParams& params);

/// Mean silhouette over all samples: s(i) = (b(i)-a(i)) / max(a(i),b(i))
/// with a(i) the mean intra-class distance (excluding self) and b(i) the
/// smallest mean distance to any other class. Samples in singleton classes
/// contribute 0. Result lies in [-1, 1].
///
/// Throws ValidationError when fewer than 2 samples or fewer than 2
/// distinct labels are present.
double silhouette(const Matrix& matrix, std::span<const int> labels);

/// Cluster purity: (1/N) * sum over clusters of the largest class count
/// inside the cluster. In (0, 1]; 1 iff every cluster is class-pure.
double purity(std::span<const std::size_t> predicted, std::span<const int> truth);

} // namespace tle
