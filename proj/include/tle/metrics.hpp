#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tle/dataset.hpp"

namespace tle {

inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

/// One evaluated metric. `aggregate` is always the unweighted mean of the
/// breakdown values when the breakdown is non-empty; groups that failed a
/// metric's eligibility rule are listed in `skipped` and never aggregated.
struct MetricValue {
    bool defined = false;
    std::string reason;  // why the metric is undefined; empty otherwise
    double aggregate = 0.0;
    std::vector<std::pair<std::string, double>> breakdown;        // key -> value, schema order
    std::vector<std::pair<std::string, std::string>> skipped;     // key -> reason, schema order

    static MetricValue undefined(std::string why) {
        MetricValue v;
        v.reason = std::move(why);
        return v;
    }

    bool operator==(const MetricValue&) const = default;
};

enum class TrajectoryMode { PerPitch, Pooled };

std::string to_string(TrajectoryMode mode);
TrajectoryMode trajectory_mode_from_string(const std::string& s);

struct EvalConfig {
    std::uint64_t seed = kDefaultSeed;
    TrajectoryMode trajectory_mode = TrajectoryMode::PerPitch;
};

/// Evaluation configuration echoed into every report so results stay
/// auditable (the clustering behind purity is not standardized anywhere).
struct ReportConfig {
    std::uint64_t seed = kDefaultSeed;
    TrajectoryMode trajectory_mode = TrajectoryMode::PerPitch;
    std::size_t kmeans_k = 0;  // descriptor classes present
    std::size_t kmeans_n_init = 10;
    std::size_t kmeans_max_iterations = 300;
    double kmeans_tolerance = 1e-4;

    bool operator==(const ReportConfig&) const = default;
};

struct DatasetSummary {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<std::pair<std::string, std::size_t>> descriptor_counts;
    std::vector<std::pair<std::string, std::size_t>> magnitude_counts;  // key = percent string
    std::vector<std::pair<std::string, std::size_t>> pitch_counts;

    bool operator==(const DatasetSummary&) const = default;
};

struct MetricReport {
    std::string model_name;
    MetricValue global_silhouette;
    MetricValue purity;
    MetricValue compactness;
    MetricValue magnitude_silhouette;
    MetricValue within_pitch_silhouette;
    MetricValue cross_pitch_consistency;
    MetricValue linearity;
    MetricValue step_consistency;
    ReportConfig config;
    DatasetSummary dataset_summary;

    bool operator==(const MetricReport&) const = default;
};

inline constexpr std::size_t kMetricCount = 8;
/// Stable machine names, in column order.
std::span<const std::string> metric_names();
/// Human-readable column headers, same order.
std::span<const std::string> metric_headers();
const MetricValue& metric_by_index(const MetricReport& r, std::size_t i);
MetricValue& metric_by_index(MetricReport& r, std::size_t i);

// The metric suite. Each operation throws ValidationError when its
// precondition fails; evaluate_all instead records the failure in the
// report. All are pure functions of the dataset.

/// Silhouette of the full embedding labeled by timbre descriptor.
MetricValue global_descriptor_silhouette(const LatentDataset& ds);

/// K-means (k = descriptor classes present) followed by purity against the
/// descriptor labels. Deterministic for a fixed seed.
MetricValue descriptor_purity(const LatentDataset& ds, std::uint64_t seed);

/// Per descriptor: 1 / (1 + mean pairwise distance among its samples).
MetricValue compactness(const LatentDataset& ds);

/// Per descriptor: silhouette of its samples (all pitches pooled) labeled
/// by magnitude level.
MetricValue magnitude_silhouette(const LatentDataset& ds);

/// Per pitch: silhouette of that pitch's samples labeled by descriptor.
MetricValue within_pitch_silhouette(const LatentDataset& ds);

/// Per (descriptor, magnitude): the combination's centroid is found in each
/// pitch where it occurs; the score is 1 / (1 + population stddev of the
/// pairwise distances among those per-pitch centroids). Combinations seen
/// in fewer than 3 pitches are skipped.
MetricValue cross_pitch_consistency(const LatentDataset& ds);

/// Per trajectory (a (descriptor, pitch) pair, or a descriptor in pooled
/// mode): straight-line distance between the first and last magnitude
/// centroids divided by the path length through the intermediate ones.
/// Trajectories missing any magnitude level are skipped.
MetricValue trajectory_linearity(const LatentDataset& ds, TrajectoryMode mode);

/// Same trajectories; 1 / (1 + CV) of the consecutive centroid distances,
/// where CV is the coefficient of variation (population stddev / mean).
MetricValue step_consistency(const LatentDataset& ds, TrajectoryMode mode);

/// Run the full suite. Metrics whose preconditions fail are recorded as
/// undefined with the failing reason instead of aborting the report.
MetricReport evaluate_all(const LatentDataset& ds, const EvalConfig& config = {});

// Scalar building blocks, exposed for direct use and testing.

/// 1 / (1 + population stddev of the given distances).
double consistency_from_distances(std::span<const double> distances);
/// Chord-to-path-length ratio of an ordered point sequence; 1 when the
/// path length is zero.
double linearity_of_path(const std::vector<std::vector<double>>& points);
/// 1 / (1 + CV) of consecutive distances of an ordered point sequence;
/// 1 when the mean step is zero.
double step_consistency_of_path(const std::vector<std::vector<double>>& points);

} // namespace tle
