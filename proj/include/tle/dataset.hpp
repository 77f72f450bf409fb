#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tle/schema.hpp"

namespace tle {

/// Dense row-major matrix of 64-bit floats.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    /// Throws ValidationError if the rows are ragged or empty.
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<double> row(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }

    double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

struct SampleLabel {
    std::int32_t descriptor = 0;
    std::int32_t magnitude = 0;
    std::int32_t pitch = 0;

    bool operator==(const SampleLabel&) const = default;
};

/// A labeled latent embedding matrix: the universal input of every metric.
/// Immutable after construction; all operations over it are pure and safe
/// to call concurrently.
class LatentDataset {
public:
    /// Validates shape, finiteness, and label bounds; throws ValidationError.
    LatentDataset(Matrix embeddings, std::vector<SampleLabel> labels,
                  LabelSchema schema, std::string model_name);

    std::size_t size() const { return embeddings_.rows(); }
    std::size_t dim() const { return embeddings_.cols(); }

    const Matrix& embeddings() const { return embeddings_; }
    std::span<const double> row(std::size_t i) const { return embeddings_.row(i); }
    const std::vector<SampleLabel>& labels() const { return labels_; }
    const LabelSchema& schema() const { return schema_; }
    const std::string& model_name() const { return model_name_; }

private:
    Matrix embeddings_;
    std::vector<SampleLabel> labels_;
    LabelSchema schema_;
    std::string model_name_;
};

enum class GroupAxes : unsigned {
    None = 0,
    Descriptor = 1,
    Magnitude = 2,
    Pitch = 4,
};

constexpr GroupAxes operator|(GroupAxes a, GroupAxes b) {
    return static_cast<GroupAxes>(static_cast<unsigned>(a) | static_cast<unsigned>(b));
}
constexpr bool has_axis(GroupAxes set, GroupAxes axis) {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(axis)) != 0;
}

/// Key of one group: indices are set only for the axes that were grouped on.
struct GroupKey {
    std::optional<int> descriptor;
    std::optional<int> magnitude;
    std::optional<int> pitch;

    bool operator==(const GroupKey&) const = default;
};

struct GroupIndex {
    GroupKey key;
    std::vector<std::size_t> rows;  // unique, ascending
};

/// Exhaustive, disjoint partition of the dataset's rows by the selected
/// label axes. Groups appear in schema index order (descriptor outermost,
/// then magnitude, then pitch); empty groups are omitted.
std::vector<GroupIndex> group_by(const LatentDataset& ds, GroupAxes axes);

/// Gather a row subset into a dense matrix (copy, schema-free helper).
Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows);

} // namespace tle
