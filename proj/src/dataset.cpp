#include "tle/dataset.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "tle/errors.hpp"

namespace tle {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty())
        throw ValidationError("matrix: no rows");
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols())
            throw ValidationError("matrix: ragged rows");
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = rows[i][j];
    }
    return m;
}

LatentDataset::LatentDataset(Matrix embeddings, std::vector<SampleLabel> labels,
                             LabelSchema schema, std::string model_name)
    : embeddings_(std::move(embeddings)),
      labels_(std::move(labels)),
      schema_(std::move(schema)),
      model_name_(std::move(model_name)) {
    schema_.validate();
    if (embeddings_.rows() == 0 || embeddings_.cols() == 0)
        throw ValidationError("dataset: embeddings must be at least 1x1");
    if (labels_.size() != embeddings_.rows())
        throw ValidationError("dataset: embedding row count (" + std::to_string(embeddings_.rows()) +
                              ") != label row count (" + std::to_string(labels_.size()) + ")");
    for (std::size_t i = 0; i < embeddings_.rows(); ++i)
        for (double v : embeddings_.row(i))
            if (!std::isfinite(v))
                throw ValidationError("dataset: non-finite embedding entry at row " + std::to_string(i));
    const auto nd = static_cast<std::int32_t>(schema_.descriptors.size());
    const auto nm = static_cast<std::int32_t>(schema_.magnitudes.size());
    const auto np = static_cast<std::int32_t>(schema_.pitches.size());
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        const auto& l = labels_[i];
        if (l.descriptor < 0 || l.descriptor >= nd || l.magnitude < 0 || l.magnitude >= nm ||
            l.pitch < 0 || l.pitch >= np)
            throw ValidationError("dataset: label index out of schema bounds at row " + std::to_string(i));
    }
}

std::vector<GroupIndex> group_by(const LatentDataset& ds, GroupAxes axes) {
    if (axes == GroupAxes::None)
        throw ValidationError("group_by: at least one axis required");
    const bool by_d = has_axis(axes, GroupAxes::Descriptor);
    const bool by_m = has_axis(axes, GroupAxes::Magnitude);
    const bool by_p = has_axis(axes, GroupAxes::Pitch);

    // Composite key in canonical axis order; std::map keeps schema order.
    std::map<std::tuple<int, int, int>, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& l = ds.labels()[i];
        buckets[{by_d ? l.descriptor : -1, by_m ? l.magnitude : -1, by_p ? l.pitch : -1}]
            .push_back(i);
    }

    std::vector<GroupIndex> out;
    out.reserve(buckets.size());
    for (auto& [key, rows] : buckets) {
        GroupIndex g;
        if (by_d) g.key.descriptor = std::get<0>(key);
        if (by_m) g.key.magnitude = std::get<1>(key);
        if (by_p) g.key.pitch = std::get<2>(key);
        g.rows = std::move(rows);
        out.push_back(std::move(g));
    }
    return out;
}

Matrix gather_rows(const Matrix& m, std::span<const std::size_t> rows) {
    Matrix out(rows.size(), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto src = m.row(rows[i]);
        auto dst = out.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) dst[j] = src[j];
    }
    return out;
}

} // namespace tle
