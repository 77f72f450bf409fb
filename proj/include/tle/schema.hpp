#pragma once

#include <optional>
#include <string>
#include <vector>

namespace tle {

/// The label vocabulary of a dataset: which timbre descriptors, magnitude
/// levels, and pitches may appear. Datasets store label indices into these
/// lists, so two datasets are comparable only if their schemas are equal.
///
/// Magnitudes are fractional levels in (0,1], strictly increasing. Metrics
/// treat magnitude ordinally; the fractional values live only here.
struct LabelSchema {
    std::vector<std::string> descriptors;
    std::vector<double> magnitudes;
    std::vector<std::string> pitches;

    /// Throws ValidationError on empty lists, duplicates, or
    /// non-increasing / out-of-range magnitudes.
    void validate() const;

    std::optional<int> descriptor_index(const std::string& name) const;
    std::optional<int> pitch_index(const std::string& name) const;
    /// Index of the magnitude level whose rounded percent equals `percent`.
    std::optional<int> magnitude_index_by_percent(long percent) const;

    /// Rounded integer percent of a magnitude level (0.5 -> 50). Used by the
    /// CSV formats and breakdown keys. Throws ValidationError if two levels
    /// collide at percent resolution, since the text formats could not
    /// distinguish them.
    long magnitude_percent(int magnitude_id) const;

    bool operator==(const LabelSchema&) const = default;
};

/// The built-in schema: 19 timbre descriptors, magnitude levels
/// 25/50/75/100%, and the 23 chromatic pitches E4..D6.
const LabelSchema& default_schema();

} // namespace tle
