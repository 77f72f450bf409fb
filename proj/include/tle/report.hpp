#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tle/metrics.hpp"

namespace tle {

/// Multi-model comparison: one row per model, one column per metric, with
/// the best defined aggregate marked per column. Every metric is
/// higher-is-better (for the silhouettes, least negative wins).
struct ComparisonTable {
    std::vector<MetricReport> rows;
    /// Winning row index per column (metric_names order); empty when no row
    /// defines that metric.
    std::array<std::optional<std::size_t>, kMetricCount> best_per_column{};

    bool operator==(const ComparisonTable&) const = default;
};

/// Assemble a comparison: computes best_per_column (maximum aggregate among
/// defined values; earlier row wins ties). Throws ValidationError when rows
/// is empty.
ComparisonTable make_comparison(std::vector<MetricReport> rows);

/// Fixed-width text table, 4-decimal values, best cell per column tagged
/// with `marker`. Undefined cells render as an em dash with the reason in a
/// footnote. Byte-identical output for identical input.
std::string render_table(const ComparisonTable& cmp, const std::string& marker = "*");

// JSON forms. Stable key ordering; breakdowns keep schema order; numbers
// round-trip exactly (shortest-representation doubles), so
// from_json(to_json(x)) == x holds bit-for-bit.
std::string to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& text);
std::string to_json(const ComparisonTable& cmp);
ComparisonTable comparison_from_json(const std::string& text);

} // namespace tle
