#include "tle/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "tle/clustering.hpp"
#include "tle/errors.hpp"
#include "tle/geometry.hpp"

namespace tle {
namespace {

std::vector<int> descriptor_labels(const LatentDataset& ds) {
    std::vector<int> out(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i) out[i] = ds.labels()[i].descriptor;
    return out;
}

std::size_t count_descriptor_classes(const LatentDataset& ds) {
    std::set<int> seen;
    for (const auto& l : ds.labels()) seen.insert(l.descriptor);
    return seen.size();
}

std::string combo_key(const LabelSchema& s, int d, int m) {
    return s.descriptors[static_cast<std::size_t>(d)] + "@" +
           std::to_string(s.magnitude_percent(m));
}

std::string traj_key(const LabelSchema& s, int d, std::optional<int> p) {
    if (!p) return s.descriptors[static_cast<std::size_t>(d)];
    return s.descriptors[static_cast<std::size_t>(d)] + ":" +
           s.pitches[static_cast<std::size_t>(*p)];
}

MetricValue finish(MetricValue v, const char* empty_reason) {
    if (v.breakdown.empty())
        throw ValidationError(empty_reason);
    std::vector<double> vals;
    vals.reserve(v.breakdown.size());
    for (const auto& [key, x] : v.breakdown) vals.push_back(x);
    v.aggregate = mean(vals);
    v.defined = true;
    return v;
}

/// Magnitude-level centroids of one trajectory, in increasing magnitude
/// order, or nothing when a level has no samples.
std::optional<std::vector<std::vector<double>>> magnitude_centroids(
    const LatentDataset& ds, std::span<const std::size_t> rows) {
    const std::size_t nm = ds.schema().magnitudes.size();
    std::vector<std::vector<std::size_t>> by_mag(nm);
    for (std::size_t r : rows)
        by_mag[static_cast<std::size_t>(ds.labels()[r].magnitude)].push_back(r);
    std::vector<std::vector<double>> centroids;
    centroids.reserve(nm);
    for (const auto& members : by_mag) {
        if (members.empty()) return std::nullopt;
        centroids.push_back(centroid_impl(members.size(), ds.dim(),
                                          [&](std::size_t i) { return ds.row(members[i]); }));
    }
    return centroids;
}

template <typename PathScore>
MetricValue trajectory_metric(const LatentDataset& ds, TrajectoryMode mode,
                              const char* empty_reason, PathScore score) {
    MetricValue v;
    const auto axes = mode == TrajectoryMode::PerPitch
                          ? (GroupAxes::Descriptor | GroupAxes::Pitch)
                          : GroupAxes::Descriptor;
    for (const auto& g : group_by(ds, axes)) {
        const auto key = traj_key(ds.schema(), *g.key.descriptor, g.key.pitch);
        if (auto centroids = magnitude_centroids(ds, g.rows))
            v.breakdown.emplace_back(key, score(*centroids));
        else
            v.skipped.emplace_back(key, "incomplete magnitude coverage");
    }
    return finish(std::move(v), empty_reason);
}

} // namespace

std::string to_string(TrajectoryMode mode) {
    return mode == TrajectoryMode::PerPitch ? "per-pitch" : "pooled";
}

TrajectoryMode trajectory_mode_from_string(const std::string& s) {
    if (s == "per-pitch") return TrajectoryMode::PerPitch;
    if (s == "pooled") return TrajectoryMode::Pooled;
    throw ValidationError("unknown trajectory mode '" + s + "' (expected per-pitch or pooled)");
}

std::span<const std::string> metric_names() {
    static const std::array<std::string, kMetricCount> names = {
        "global_silhouette",  "purity",
        "compactness",        "magnitude_silhouette",
        "within_pitch_silhouette", "cross_pitch_consistency",
        "linearity",          "step_consistency",
    };
    return names;
}

std::span<const std::string> metric_headers() {
    static const std::array<std::string, kMetricCount> headers = {
        "Global Sil.", "Purity", "Compact.", "Magn. Sil.",
        "Within-Pitch Sil.", "Cross-Pitch Cons.", "Linearity", "Step Cons.",
    };
    return headers;
}

const MetricValue& metric_by_index(const MetricReport& r, std::size_t i) {
    return metric_by_index(const_cast<MetricReport&>(r), i);
}

MetricValue& metric_by_index(MetricReport& r, std::size_t i) {
    switch (i) {
        case 0: return r.global_silhouette;
        case 1: return r.purity;
        case 2: return r.compactness;
        case 3: return r.magnitude_silhouette;
        case 4: return r.within_pitch_silhouette;
        case 5: return r.cross_pitch_consistency;
        case 6: return r.linearity;
        case 7: return r.step_consistency;
        default: throw ValidationError("metric index out of range");
    }
}

MetricValue global_descriptor_silhouette(const LatentDataset& ds) {
    if (ds.size() < 2)
        throw ValidationError("global silhouette: fewer than 2 samples");
    if (count_descriptor_classes(ds) < 2)
        throw ValidationError("global silhouette: single descriptor class");
    MetricValue v;
    v.defined = true;
    const auto labels = descriptor_labels(ds);
    v.aggregate = silhouette(ds.embeddings(), labels);
    return v;
}

MetricValue descriptor_purity(const LatentDataset& ds, std::uint64_t seed) {
    const std::size_t k = count_descriptor_classes(ds);
    if (k < 2)
        throw ValidationError("purity: single descriptor class");
    if (ds.size() < k)
        throw ValidationError("purity: fewer samples than descriptor classes");
    KMeansParams params;
    params.k = k;
    params.seed = seed;
    const auto clustering = kmeans(ds.embeddings(), params);
    const auto truth = descriptor_labels(ds);
    MetricValue v;
    v.defined = true;
    v.aggregate = purity(clustering.assignments, truth);
    return v;
}

MetricValue compactness(const LatentDataset& ds) {
    MetricValue v;
    for (const auto& g : group_by(ds, GroupAxes::Descriptor)) {
        const auto& name = ds.schema().descriptors[static_cast<std::size_t>(*g.key.descriptor)];
        if (g.rows.size() < 2) {
            v.skipped.emplace_back(name, "insufficient samples");
            continue;
        }
        const auto dists = pairwise_distances_impl(
            g.rows.size(), [&](std::size_t i) { return ds.row(g.rows[i]); });
        v.breakdown.emplace_back(name, 1.0 / (1.0 + mean(dists)));
    }
    return finish(std::move(v), "compactness: no descriptor group with at least 2 samples");
}

MetricValue magnitude_silhouette(const LatentDataset& ds) {
    MetricValue v;
    for (const auto& g : group_by(ds, GroupAxes::Descriptor)) {
        const auto& name = ds.schema().descriptors[static_cast<std::size_t>(*g.key.descriptor)];
        std::set<int> levels;
        for (std::size_t r : g.rows) levels.insert(ds.labels()[r].magnitude);
        if (levels.size() < 2) {
            v.skipped.emplace_back(name, "fewer than 2 magnitude levels");
            continue;
        }
        std::vector<int> labels(g.rows.size());
        for (std::size_t i = 0; i < g.rows.size(); ++i)
            labels[i] = ds.labels()[g.rows[i]].magnitude;
        v.breakdown.emplace_back(name, silhouette(gather_rows(ds.embeddings(), g.rows), labels));
    }
    return finish(std::move(v), "magnitude silhouette: no descriptor spans 2 magnitude levels");
}

MetricValue within_pitch_silhouette(const LatentDataset& ds) {
    MetricValue v;
    for (const auto& g : group_by(ds, GroupAxes::Pitch)) {
        const auto& name = ds.schema().pitches[static_cast<std::size_t>(*g.key.pitch)];
        std::set<int> classes;
        for (std::size_t r : g.rows) classes.insert(ds.labels()[r].descriptor);
        if (classes.size() < 2) {
            v.skipped.emplace_back(name, "fewer than 2 descriptor classes");
            continue;
        }
        std::vector<int> labels(g.rows.size());
        for (std::size_t i = 0; i < g.rows.size(); ++i)
            labels[i] = ds.labels()[g.rows[i]].descriptor;
        v.breakdown.emplace_back(name, silhouette(gather_rows(ds.embeddings(), g.rows), labels));
    }
    return finish(std::move(v), "within-pitch silhouette: no pitch has 2 descriptor classes");
}

MetricValue cross_pitch_consistency(const LatentDataset& ds) {
    MetricValue v;
    const std::size_t np = ds.schema().pitches.size();
    for (const auto& g : group_by(ds, GroupAxes::Descriptor | GroupAxes::Magnitude)) {
        const auto key = combo_key(ds.schema(), *g.key.descriptor, *g.key.magnitude);
        std::vector<std::vector<std::size_t>> by_pitch(np);
        for (std::size_t r : g.rows)
            by_pitch[static_cast<std::size_t>(ds.labels()[r].pitch)].push_back(r);
        std::vector<std::vector<double>> centroids;
        for (const auto& members : by_pitch)
            if (!members.empty())
                centroids.push_back(centroid_impl(members.size(), ds.dim(),
                                                  [&](std::size_t i) { return ds.row(members[i]); }));
        if (centroids.size() < 3) {
            v.skipped.emplace_back(key, "present in fewer than 3 pitches");
            continue;
        }
        v.breakdown.emplace_back(key, consistency_from_distances(pairwise_distances(centroids)));
    }
    return finish(std::move(v),
                  "cross-pitch consistency: no descriptor-magnitude combination spans 3 pitches");
}

MetricValue trajectory_linearity(const LatentDataset& ds, TrajectoryMode mode) {
    return trajectory_metric(ds, mode, "linearity: no trajectory covers all magnitude levels",
                             linearity_of_path);
}

MetricValue step_consistency(const LatentDataset& ds, TrajectoryMode mode) {
    return trajectory_metric(ds, mode, "step consistency: no trajectory covers all magnitude levels",
                             step_consistency_of_path);
}

MetricReport evaluate_all(const LatentDataset& ds, const EvalConfig& config) {
    MetricReport r;
    r.model_name = ds.model_name();
    r.config.seed = config.seed;
    r.config.trajectory_mode = config.trajectory_mode;
    r.config.kmeans_k = count_descriptor_classes(ds);

    auto run = [](MetricValue& slot, auto&& fn) {
        try {
            slot = fn();
        } catch (const ValidationError& e) {
            slot = MetricValue::undefined(e.what());
        }
    };
    run(r.global_silhouette, [&] { return global_descriptor_silhouette(ds); });
    run(r.purity, [&] { return descriptor_purity(ds, config.seed); });
    run(r.compactness, [&] { return compactness(ds); });
    run(r.magnitude_silhouette, [&] { return magnitude_silhouette(ds); });
    run(r.within_pitch_silhouette, [&] { return within_pitch_silhouette(ds); });
    run(r.cross_pitch_consistency, [&] { return cross_pitch_consistency(ds); });
    run(r.linearity, [&] { return trajectory_linearity(ds, config.trajectory_mode); });
    run(r.step_consistency, [&] { return step_consistency(ds, config.trajectory_mode); });

    r.dataset_summary.n = ds.size();
    r.dataset_summary.d = ds.dim();
    const auto& s = ds.schema();
    std::vector<std::size_t> dc(s.descriptors.size(), 0), mc(s.magnitudes.size(), 0),
        pc(s.pitches.size(), 0);
    for (const auto& l : ds.labels()) {
        ++dc[static_cast<std::size_t>(l.descriptor)];
        ++mc[static_cast<std::size_t>(l.magnitude)];
        ++pc[static_cast<std::size_t>(l.pitch)];
    }
    for (std::size_t i = 0; i < s.descriptors.size(); ++i)
        r.dataset_summary.descriptor_counts.emplace_back(s.descriptors[i], dc[i]);
    for (std::size_t i = 0; i < s.magnitudes.size(); ++i)
        r.dataset_summary.magnitude_counts.emplace_back(
            std::to_string(s.magnitude_percent(static_cast<int>(i))), mc[i]);
    for (std::size_t i = 0; i < s.pitches.size(); ++i)
        r.dataset_summary.pitch_counts.emplace_back(s.pitches[i], pc[i]);
    return r;
}

double consistency_from_distances(std::span<const double> distances) {
    if (distances.empty())
        throw ValidationError("consistency: empty distance list");
    return 1.0 / (1.0 + population_stddev(distances));
}

double linearity_of_path(const std::vector<std::vector<double>>& points) {
    if (points.empty())
        throw ValidationError("linearity: empty path");
    double path = 0.0;
    for (std::size_t t = 0; t + 1 < points.size(); ++t)
        path += euclidean_distance(points[t], points[t + 1]);
    if (path == 0.0) return 1.0;
    // The chord never exceeds the path mathematically; clamp away the few
    // ulps of rounding slack so the (0,1] range holds bit-for-bit.
    return std::min(1.0, euclidean_distance(points.front(), points.back()) / path);
}

double step_consistency_of_path(const std::vector<std::vector<double>>& points) {
    if (points.empty())
        throw ValidationError("step consistency: empty path");
    std::vector<double> steps;
    steps.reserve(points.size());
    for (std::size_t t = 0; t + 1 < points.size(); ++t)
        steps.push_back(euclidean_distance(points[t], points[t + 1]));
    if (steps.empty()) return 1.0;  // single-level trajectory
    const double mu = mean(steps);
    if (mu == 0.0) return 1.0;  // all steps identically zero
    return 1.0 / (1.0 + population_stddev(steps) / mu);
}

} // namespace tle
