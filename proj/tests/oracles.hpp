#pragma once

// Naive reference implementations, written straight from the metric
// definitions with their own arithmetic helpers. They deliberately share no
// code with src/ (beyond the PRNG conversion contract, which both sides must
// follow by definition), so agreement is a real cross-check rather than a
// tautology. Everything here is O(whatever) — clarity over speed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "tle/dataset.hpp"
#include "tle/rng.hpp"

namespace oracle {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(sq_dist(a, b));
}

inline double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double pop_sd(const std::vector<double>& xs) {
    const double mu = mean_of(xs);
    double s = 0.0;
    for (double x : xs) s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(xs.size()));
}

inline double silhouette(const tle::Matrix& m, const std::vector<int>& labels) {
    const std::size_t n = m.rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::map<int, std::vector<double>> per_class;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) per_class[labels[j]].push_back(dist(m.row(i), m.row(j)));
        const auto own = per_class.find(labels[i]);
        if (own == per_class.end()) continue;  // singleton: contributes 0
        const double a = mean_of(own->second);
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [cls, ds] : per_class)
            if (cls != labels[i]) b = std::min(b, mean_of(ds));
        if (std::max(a, b) > 0.0) total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

/// The documented clustering recipe, re-written plainly: sequential
/// k-means++ restarts on one engine, Lloyd with low-index tie-breaks,
/// farthest-point repair of emptied clusters, best inertia wins.
struct KmeansRun {
    std::vector<std::size_t> assign;
    double inertia = 0.0;
};

inline KmeansRun kmeans(const tle::Matrix& m, std::size_t k, std::uint64_t seed,
                        std::size_t n_init = 10, std::size_t max_iter = 300,
                        double tol = 1e-4) {
    const std::size_t n = m.rows(), d = m.cols();
    auto eng = tle::rng::make_engine(seed);
    KmeansRun best;
    bool have = false;

    for (std::size_t restart = 0; restart < n_init; ++restart) {
        // k-means++ seeding.
        std::vector<std::vector<double>> centers;
        std::vector<bool> used(n, false);
        std::vector<double> min_sq(n, std::numeric_limits<double>::infinity());
        const std::size_t first = tle::rng::uniform_index(eng, n);
        centers.emplace_back(m.row(first).begin(), m.row(first).end());
        used[first] = true;
        while (centers.size() < k) {
            for (std::size_t i = 0; i < n; ++i)
                min_sq[i] = std::min(min_sq[i], sq_dist(m.row(i), centers.back()));
            std::size_t next = tle::rng::weighted_index(eng, min_sq);
            if (next == tle::rng::npos || used[next])
                for (next = 0; next < n && used[next]; ++next) {}
            if (next >= n) next = 0;
            centers.emplace_back(m.row(next).begin(), m.row(next).end());
            used[next] = true;
        }

        // Lloyd iterations.
        std::vector<std::size_t> assign(n, 0);
        for (std::size_t iter = 0; iter < max_iter; ++iter) {
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t who = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (std::size_t c = 0; c < k; ++c) {
                    const double sq = sq_dist(m.row(i), centers[c]);
                    if (sq < best_d) {
                        best_d = sq;
                        who = c;
                    }
                }
                assign[i] = who;
            }
            std::vector<std::vector<double>> next(k, std::vector<double>(d, 0.0));
            std::vector<std::size_t> count(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                ++count[assign[i]];
                for (std::size_t j = 0; j < d; ++j) next[assign[i]][j] += m.at(i, j);
            }
            for (std::size_t c = 0; c < k; ++c)
                if (count[c] > 0)
                    for (std::size_t j = 0; j < d; ++j)
                        next[c][j] /= static_cast<double>(count[c]);
            for (std::size_t c = 0; c < k; ++c) {
                if (count[c] != 0) continue;
                double worst = -1.0;
                std::size_t worst_i = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (count[assign[i]] <= 1) continue;
                    const double sq = sq_dist(m.row(i), next[assign[i]]);
                    if (sq > worst) {
                        worst = sq;
                        worst_i = i;
                    }
                }
                const std::size_t donor = assign[worst_i];
                --count[donor];
                count[c] = 1;
                assign[worst_i] = c;
                for (std::size_t j = 0; j < d; ++j) next[c][j] = m.at(worst_i, j);
                // Donor centroid recomputed from the remaining members.
                std::vector<double> sum(d, 0.0);
                for (std::size_t i = 0; i < n; ++i)
                    if (assign[i] == donor)
                        for (std::size_t j = 0; j < d; ++j) sum[j] += m.at(i, j);
                for (std::size_t j = 0; j < d; ++j)
                    next[donor][j] = sum[j] / static_cast<double>(count[donor]);
            }
            double shift = 0.0;
            for (std::size_t c = 0; c < k; ++c) shift = std::max(shift, dist(centers[c], next[c]));
            centers = next;
            if (shift < tol) break;
        }

        double inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            inertia += sq_dist(m.row(i), centers[assign[i]]);
        if (!have || inertia < best.inertia) {
            best.assign = assign;
            best.inertia = inertia;
            have = true;
        }
    }
    return best;
}

// --- metric-level oracles; nullopt mirrors "undefined" ---

inline std::optional<double> global_silhouette(const tle::LatentDataset& ds) {
    std::set<int> classes;
    for (const auto& l : ds.labels()) classes.insert(l.descriptor);
    if (ds.size() < 2 || classes.size() < 2) return std::nullopt;
    std::vector<int> labels;
    for (const auto& l : ds.labels()) labels.push_back(l.descriptor);
    return silhouette(ds.embeddings(), labels);
}

inline std::optional<double> purity_metric(const tle::LatentDataset& ds, std::uint64_t seed) {
    std::set<int> classes;
    for (const auto& l : ds.labels()) classes.insert(l.descriptor);
    const std::size_t k = classes.size();
    if (k < 2 || ds.size() < k) return std::nullopt;
    const auto run = kmeans(ds.embeddings(), k, seed);
    std::map<std::size_t, std::map<int, std::size_t>> table;
    for (std::size_t i = 0; i < ds.size(); ++i)
        ++table[run.assign[i]][ds.labels()[i].descriptor];
    std::size_t hits = 0;
    for (const auto& [cl, counts] : table) {
        std::size_t top = 0;
        for (const auto& [cls, c] : counts) top = std::max(top, c);
        hits += top;
    }
    return static_cast<double>(hits) / static_cast<double>(ds.size());
}

inline std::vector<std::size_t> rows_where(const tle::LatentDataset& ds, int d, int m, int p) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& l = ds.labels()[i];
        if ((d < 0 || l.descriptor == d) && (m < 0 || l.magnitude == m) &&
            (p < 0 || l.pitch == p))
            out.push_back(i);
    }
    return out;
}

inline std::vector<double> mean_row(const tle::LatentDataset& ds,
                                    const std::vector<std::size_t>& rows) {
    std::vector<double> c(ds.dim(), 0.0);
    for (auto r : rows)
        for (std::size_t j = 0; j < ds.dim(); ++j) c[j] += ds.row(r)[j];
    for (auto& x : c) x /= static_cast<double>(rows.size());
    return c;
}

inline std::optional<double> compactness(const tle::LatentDataset& ds) {
    std::vector<double> scores;
    for (int d = 0; d < static_cast<int>(ds.schema().descriptors.size()); ++d) {
        const auto rows = rows_where(ds, d, -1, -1);
        if (rows.size() < 2) continue;
        std::vector<double> pairs;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j)
                pairs.push_back(dist(ds.row(rows[i]), ds.row(rows[j])));
        scores.push_back(1.0 / (1.0 + mean_of(pairs)));
    }
    if (scores.empty()) return std::nullopt;
    return mean_of(scores);
}

inline std::optional<double> magnitude_silhouette(const tle::LatentDataset& ds) {
    std::vector<double> scores;
    for (int d = 0; d < static_cast<int>(ds.schema().descriptors.size()); ++d) {
        const auto rows = rows_where(ds, d, -1, -1);
        std::set<int> levels;
        for (auto r : rows) levels.insert(ds.labels()[r].magnitude);
        if (levels.size() < 2) continue;
        tle::Matrix sub(rows.size(), ds.dim());
        std::vector<int> labels;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < ds.dim(); ++j) sub.at(i, j) = ds.row(rows[i])[j];
            labels.push_back(ds.labels()[rows[i]].magnitude);
        }
        scores.push_back(silhouette(sub, labels));
    }
    if (scores.empty()) return std::nullopt;
    return mean_of(scores);
}

inline std::optional<double> within_pitch_silhouette(const tle::LatentDataset& ds) {
    std::vector<double> scores;
    for (int p = 0; p < static_cast<int>(ds.schema().pitches.size()); ++p) {
        const auto rows = rows_where(ds, -1, -1, p);
        std::set<int> classes;
        for (auto r : rows) classes.insert(ds.labels()[r].descriptor);
        if (classes.size() < 2) continue;
        tle::Matrix sub(rows.size(), ds.dim());
        std::vector<int> labels;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < ds.dim(); ++j) sub.at(i, j) = ds.row(rows[i])[j];
            labels.push_back(ds.labels()[rows[i]].descriptor);
        }
        scores.push_back(silhouette(sub, labels));
    }
    if (scores.empty()) return std::nullopt;
    return mean_of(scores);
}

inline std::optional<double> cross_pitch_consistency(const tle::LatentDataset& ds) {
    std::vector<double> scores;
    const auto& s = ds.schema();
    for (int d = 0; d < static_cast<int>(s.descriptors.size()); ++d) {
        for (int m = 0; m < static_cast<int>(s.magnitudes.size()); ++m) {
            std::vector<std::vector<double>> cents;
            for (int p = 0; p < static_cast<int>(s.pitches.size()); ++p) {
                const auto rows = rows_where(ds, d, m, p);
                if (!rows.empty()) cents.push_back(mean_row(ds, rows));
            }
            if (cents.size() < 3) continue;
            std::vector<double> pairs;
            for (std::size_t i = 0; i < cents.size(); ++i)
                for (std::size_t j = i + 1; j < cents.size(); ++j)
                    pairs.push_back(dist(cents[i], cents[j]));
            scores.push_back(1.0 / (1.0 + pop_sd(pairs)));
        }
    }
    if (scores.empty()) return std::nullopt;
    return mean_of(scores);
}

/// Magnitude-ordered centroids of one trajectory; empty when a level is
/// missing.
inline std::vector<std::vector<double>> trajectory(const tle::LatentDataset& ds, int d, int p) {
    std::vector<std::vector<double>> cents;
    for (int m = 0; m < static_cast<int>(ds.schema().magnitudes.size()); ++m) {
        const auto rows = rows_where(ds, d, m, p);
        if (rows.empty()) return {};
        cents.push_back(mean_row(ds, rows));
    }
    return cents;
}

template <typename Score>
std::optional<double> trajectory_mean(const tle::LatentDataset& ds, bool per_pitch,
                                      Score score) {
    std::vector<double> scores;
    const auto& s = ds.schema();
    for (int d = 0; d < static_cast<int>(s.descriptors.size()); ++d) {
        if (per_pitch) {
            for (int p = 0; p < static_cast<int>(s.pitches.size()); ++p) {
                if (rows_where(ds, d, -1, p).empty()) continue;
                const auto t = trajectory(ds, d, p);
                if (!t.empty()) scores.push_back(score(t));
            }
        } else {
            if (rows_where(ds, d, -1, -1).empty()) continue;
            const auto t = trajectory(ds, d, -1);
            if (!t.empty()) scores.push_back(score(t));
        }
    }
    if (scores.empty()) return std::nullopt;
    return mean_of(scores);
}

inline std::optional<double> linearity(const tle::LatentDataset& ds, bool per_pitch) {
    return trajectory_mean(ds, per_pitch, [](const std::vector<std::vector<double>>& t) {
        double path = 0.0;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) path += dist(t[i], t[i + 1]);
        if (path == 0.0) return 1.0;
        return std::min(1.0, dist(t.front(), t.back()) / path);
    });
}

inline std::optional<double> step_consistency(const tle::LatentDataset& ds, bool per_pitch) {
    return trajectory_mean(ds, per_pitch, [](const std::vector<std::vector<double>>& t) {
        std::vector<double> steps;
        for (std::size_t i = 0; i + 1 < t.size(); ++i) steps.push_back(dist(t[i], t[i + 1]));
        if (steps.empty()) return 1.0;
        const double mu = mean_of(steps);
        if (mu == 0.0) return 1.0;
        return 1.0 / (1.0 + pop_sd(steps) / mu);
    });
}

} // namespace oracle
