#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "tle/dataset.hpp"

namespace tle {

// Two on-disk layouts:
//
//  combined CSV   a single .csv file
//                   id,descriptor,magnitude,pitch,z0,...,z{D-1}
//                 magnitude written as an integer percent (25|50|75|100),
//                 embeddings as shortest round-trip decimals
//
//  split          a directory holding
//                   labels.csv        id,descriptor,magnitude,pitch
//                   embeddings.f64    N x D little-endian doubles, row-major
//                   meta.json         {"n": N, "d": D}
//                 when meta.json is absent, D must come from `dims`
//
// load(save(ds)) reproduces embeddings bit-exactly and labels exactly.

/// Load a dataset. A directory is read as split format, a file as combined
/// CSV. `schema` defaults to the built-in one; `dims` is only consulted for
/// split inputs without meta.json. The model name defaults to the path stem.
LatentDataset load_dataset(const std::filesystem::path& path,
                           std::optional<LabelSchema> schema = std::nullopt,
                           std::optional<std::size_t> dims = std::nullopt,
                           std::optional<std::string> model_name = std::nullopt);

/// Save a dataset: paths ending in .csv are written as combined CSV,
/// anything else becomes a split-format directory.
void save_dataset(const LatentDataset& ds, const std::filesystem::path& path);

/// Read a schema file: {"descriptors":[...],"magnitudes":[...],"pitches":[...]}.
LabelSchema load_schema(const std::filesystem::path& path);
void save_schema(const LabelSchema& schema, const std::filesystem::path& path);

} // namespace tle
