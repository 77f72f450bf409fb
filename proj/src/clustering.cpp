#include "tle/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tle/errors.hpp"
#include "tle/geometry.hpp"
#include "tle/rng.hpp"

namespace tle {
namespace {

struct LloydResult {
    std::vector<std::size_t> assignments;
    Matrix centroids;
    std::size_t iterations = 0;
    bool converged = false;
    double inertia = 0.0;
};

std::vector<std::size_t> kmeanspp_init(const Matrix& m, std::size_t k, rng::Engine& eng) {
    const std::size_t n = m.rows();
    std::vector<std::size_t> centers;
    std::vector<bool> chosen(n, false);
    centers.reserve(k);

    auto pick_fallback = [&] {
        // All remaining weights zero: every point coincides with a center.
        for (std::size_t i = 0; i < n; ++i)
            if (!chosen[i]) return i;
        return std::size_t{0};
    };

    const std::size_t first = rng::uniform_index(eng, n);
    centers.push_back(first);
    chosen[first] = true;

    std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
    while (centers.size() < k) {
        const auto last = m.row(centers.back());
        for (std::size_t i = 0; i < n; ++i)
            min_sq[i] = std::min(min_sq[i], squared_distance(m.row(i), last));
        std::size_t next = rng::weighted_index(eng, min_sq);
        if (next == rng::npos || chosen[next]) next = pick_fallback();
        centers.push_back(next);
        chosen[next] = true;
    }
    return centers;
}

LloydResult lloyd(const Matrix& m, std::size_t k, std::size_t max_iterations, double tolerance,
                  rng::Engine& eng) {
    const std::size_t n = m.rows();
    const std::size_t d = m.cols();

    LloydResult res;
    res.centroids = Matrix(k, d);
    {
        const auto seeds = kmeanspp_init(m, k, eng);
        for (std::size_t c = 0; c < k; ++c) {
            auto src = m.row(seeds[c]);
            auto dst = res.centroids.row(c);
            std::copy(src.begin(), src.end(), dst.begin());
        }
    }
    res.assignments.assign(n, 0);

    std::vector<std::size_t> counts(k, 0);
    Matrix sums(k, d);
    for (std::size_t iter = 1; iter <= max_iterations; ++iter) {
        res.iterations = iter;

        // Assignment step; ties break toward the lower cluster index.
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t best_c = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double dist = squared_distance(m.row(i), res.centroids.row(c));
                if (dist < best) {
                    best = dist;
                    best_c = c;
                }
            }
            res.assignments[i] = best_c;
        }

        // Update step.
        std::fill(counts.begin(), counts.end(), 0);
        std::fill(sums.data().begin(), sums.data().end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = res.assignments[i];
            ++counts[c];
            auto row = m.row(i);
            auto acc = sums.row(c);
            for (std::size_t j = 0; j < d; ++j) acc[j] += row[j];
        }

        Matrix next(k, d);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // repaired below
            auto acc = sums.row(c);
            auto dst = next.row(c);
            for (std::size_t j = 0; j < d; ++j)
                dst[j] = acc[j] / static_cast<double>(counts[c]);
        }

        // Repair empty clusters: reseed with the point farthest from its
        // centroid; lowest index wins ties.
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] != 0) continue;
            double worst = -1.0;
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[res.assignments[i]] <= 1) continue;  // don't empty another cluster
                const double dist = squared_distance(m.row(i), next.row(res.assignments[i]));
                if (dist > worst) {
                    worst = dist;
                    worst_i = i;
                }
            }
            const std::size_t donor = res.assignments[worst_i];
            --counts[donor];
            counts[c] = 1;
            res.assignments[worst_i] = c;
            auto moved = m.row(worst_i);
            std::copy(moved.begin(), moved.end(), next.row(c).begin());
            // Recompute the donor centroid without the moved point.
            auto acc = sums.row(donor);
            auto dst = next.row(donor);
            for (std::size_t j = 0; j < d; ++j)
                dst[j] = (acc[j] - moved[j]) / static_cast<double>(counts[donor]);
        }

        double max_shift = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            max_shift = std::max(max_shift,
                                 std::sqrt(squared_distance(res.centroids.row(c), next.row(c))));
        res.centroids = std::move(next);
        if (max_shift < tolerance) {
            res.converged = true;
            break;
        }
    }

    res.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        res.inertia += squared_distance(m.row(i), res.centroids.row(res.assignments[i]));
    return res;
}

} // namespace

ClusterAssignment kmeans(const Matrix& matrix, const KMeansParams& params) {
    if (params.k < 1 || params.max_iterations < 1 || !(params.tolerance > 0.0) || params.n_init < 1)
        throw ValidationError("kmeans: invalid parameters");
    if (matrix.rows() < params.k)
        throw ValidationError("kmeans: fewer points (" + std::to_string(matrix.rows()) +
                              ") than clusters (" + std::to_string(params.k) + ")");
    for (double v : matrix.data())
        if (!std::isfinite(v))
            throw ValidationError("kmeans: non-finite input");

    rng::Engine eng = rng::make_engine(params.seed);
    LloydResult best;
    bool have = false;
    for (std::size_t r = 0; r < params.n_init; ++r) {
        LloydResult run = lloyd(matrix, params.k, params.max_iterations, params.tolerance, eng);
        if (!have || run.inertia < best.inertia) {
            best = std::move(run);
            have = true;
        }
    }

    ClusterAssignment out;
    out.assignments = std::move(best.assignments);
    out.centroids = std::move(best.centroids);
    out.iterations_run = best.iterations;
    out.converged = best.converged;
    out.inertia = best.inertia;
    return out;
}

double silhouette(const Matrix& matrix, std::span<const int> labels) {
    const std::size_t n = matrix.rows();
    if (n < 2)
        throw ValidationError("silhouette: need at least 2 samples");
    if (labels.size() != n)
        throw ValidationError("silhouette: label count != row count");

    // Compact the class ids; class sizes are needed for the means.
    std::map<int, std::size_t> ids;
    for (int l : labels) ids.emplace(l, ids.size());
    const std::size_t nc = ids.size();
    if (nc < 2)
        throw ValidationError("silhouette: need at least 2 distinct classes");
    std::vector<std::size_t> cls(n);
    std::vector<std::size_t> class_size(nc, 0);
    for (std::size_t i = 0; i < n; ++i) {
        cls[i] = ids.at(labels[i]);
        ++class_size[cls[i]];
    }

    double total = 0.0;
    std::vector<double> class_sum(nc);
    for (std::size_t i = 0; i < n; ++i) {
        if (class_size[cls[i]] == 1) continue;  // singleton contributes 0
        std::fill(class_sum.begin(), class_sum.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            class_sum[cls[j]] += euclidean_distance(matrix.row(i), matrix.row(j));
        }
        const double a = class_sum[cls[i]] / static_cast<double>(class_size[cls[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < nc; ++c) {
            if (c == cls[i] || class_size[c] == 0) continue;
            b = std::min(b, class_sum[c] / static_cast<double>(class_size[c]));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

double purity(std::span<const std::size_t> predicted, std::span<const int> truth) {
    if (predicted.empty())
        throw ValidationError("purity: empty input");
    if (predicted.size() != truth.size())
        throw ValidationError("purity: length mismatch");
    std::map<std::size_t, std::map<int, std::size_t>> contingency;
    for (std::size_t i = 0; i < predicted.size(); ++i)
        ++contingency[predicted[i]][truth[i]];
    std::size_t agree = 0;
    for (const auto& [cluster, counts] : contingency) {
        std::size_t best = 0;
        for (const auto& [cls, count] : counts) best = std::max(best, count);
        agree += best;
    }
    return static_cast<double>(agree) / static_cast<double>(predicted.size());
}

} // namespace tle
