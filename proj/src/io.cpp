#include "tle/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "tle/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "embeddings.f64 is little-endian; big-endian hosts are not supported");

namespace tle {
namespace {

using nlohmann::json;

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no, std::size_t col) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v))
        throw ValidationError("line " + std::to_string(line_no) + ": column " + std::to_string(col + 1) +
                              ": '" + s + "' is not a finite number");
    return v;
}

long parse_percent(const std::string& s, std::size_t line_no) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ValidationError("line " + std::to_string(line_no) + ": magnitude '" + s +
                              "' is not a percent integer");
    return v;
}

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

SampleLabel parse_label(const LabelSchema& schema, const std::string& desc,
                        const std::string& mag, const std::string& pitch,
                        std::size_t line_no) {
    SampleLabel l;
    if (auto d = schema.descriptor_index(desc))
        l.descriptor = *d;
    else
        throw ValidationError("line " + std::to_string(line_no) + ": unknown descriptor '" + desc + "'");
    if (auto m = schema.magnitude_index_by_percent(parse_percent(mag, line_no)))
        l.magnitude = *m;
    else
        throw ValidationError("line " + std::to_string(line_no) + ": unknown magnitude '" + mag + "'");
    if (auto p = schema.pitch_index(pitch))
        l.pitch = *p;
    else
        throw ValidationError("line " + std::to_string(line_no) + ": unknown pitch '" + pitch + "'");
    return l;
}

void check_name_writable(const std::string& name) {
    if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos)
        throw ValidationError("label name '" + name + "' contains a comma or newline and cannot be written to CSV");
}

LatentDataset load_combined_csv(const std::filesystem::path& path, LabelSchema schema,
                                std::string model_name) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");

    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(path.string() + ": empty file");
    auto header = split_line(strip_cr(line));
    if (header.size() < 5 || header[0] != "id" || header[1] != "descriptor" ||
        header[2] != "magnitude" || header[3] != "pitch")
        throw ValidationError(path.string() + ": header must be id,descriptor,magnitude,pitch,z0,...");
    const std::size_t dim = header.size() - 4;
    for (std::size_t j = 0; j < dim; ++j)
        if (header[4 + j] != "z" + std::to_string(j))
            throw ValidationError(path.string() + ": embedding column " + std::to_string(j) +
                                  " must be named z" + std::to_string(j));

    std::vector<std::vector<double>> rows;
    std::vector<SampleLabel> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        auto fields = split_line(line);
        if (fields.size() != header.size())
            throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " columns, got " +
                                  std::to_string(fields.size()));
        labels.push_back(parse_label(schema, fields[1], fields[2], fields[3], line_no));
        std::vector<double> row(dim);
        for (std::size_t j = 0; j < dim; ++j) row[j] = parse_double(fields[4 + j], line_no, 4 + j);
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ValidationError(path.string() + ": no data rows");
    return LatentDataset(Matrix::from_rows(rows), std::move(labels), std::move(schema),
                         std::move(model_name));
}

LatentDataset load_split(const std::filesystem::path& dir, LabelSchema schema,
                         std::optional<std::size_t> dims, std::string model_name) {
    const auto labels_path = dir / "labels.csv";
    const auto embed_path = dir / "embeddings.f64";
    const auto meta_path = dir / "meta.json";
    if (!std::filesystem::exists(labels_path))
        throw IoError("cannot open '" + labels_path.string() + "'");
    if (!std::filesystem::exists(embed_path))
        throw IoError("cannot open '" + embed_path.string() + "'");

    std::ifstream in(labels_path);
    if (!in)
        throw IoError("cannot open '" + labels_path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(labels_path.string() + ": empty file");
    auto header = split_line(strip_cr(line));
    if (header != std::vector<std::string>{"id", "descriptor", "magnitude", "pitch"})
        throw ValidationError(labels_path.string() + ": header must be id,descriptor,magnitude,pitch");

    std::vector<SampleLabel> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        auto fields = split_line(line);
        if (fields.size() != 4)
            throw ValidationError("line " + std::to_string(line_no) + ": expected 4 columns, got " +
                                  std::to_string(fields.size()));
        labels.push_back(parse_label(schema, fields[1], fields[2], fields[3], line_no));
    }
    if (labels.empty())
        throw ValidationError(labels_path.string() + ": no data rows");
    const std::size_t n = labels.size();

    std::size_t d = 0;
    if (std::filesystem::exists(meta_path)) {
        std::ifstream meta_in(meta_path);
        json meta;
        try {
            meta = json::parse(meta_in);
        } catch (const json::exception& e) {
            throw ValidationError(meta_path.string() + ": " + e.what());
        }
        if (!meta.contains("n") || !meta.contains("d"))
            throw ValidationError(meta_path.string() + ": expected keys \"n\" and \"d\"");
        if (meta["n"].get<std::size_t>() != n)
            throw ValidationError(meta_path.string() + ": n=" + meta["n"].dump() + " but labels.csv has " +
                                  std::to_string(n) + " rows");
        d = meta["d"].get<std::size_t>();
    } else if (dims) {
        d = *dims;
    } else {
        throw ValidationError(dir.string() + ": no meta.json; embedding dimensionality required (--dims)");
    }
    if (d == 0)
        throw ValidationError(dir.string() + ": embedding dimensionality must be positive");

    const auto bytes = std::filesystem::file_size(embed_path);
    if (bytes != n * d * sizeof(double))
        throw ValidationError(embed_path.string() + ": has " + std::to_string(bytes) +
                              " bytes, expected " + std::to_string(n * d * sizeof(double)) + " (" +
                              std::to_string(n) + "x" + std::to_string(d) + " doubles)");

    Matrix m(n, d);
    std::ifstream emb(embed_path, std::ios::binary);
    if (!emb)
        throw IoError("cannot open '" + embed_path.string() + "'");
    emb.read(reinterpret_cast<char*>(m.data().data()),
             static_cast<std::streamsize>(n * d * sizeof(double)));
    if (!emb)
        throw IoError("short read from '" + embed_path.string() + "'");

    return LatentDataset(std::move(m), std::move(labels), std::move(schema), std::move(model_name));
}

void write_label_fields(std::ostream& out, const LatentDataset& ds, std::size_t i) {
    const auto& s = ds.schema();
    const auto& l = ds.labels()[i];
    out << i << ',' << s.descriptors[static_cast<std::size_t>(l.descriptor)] << ','
        << s.magnitude_percent(l.magnitude) << ','
        << s.pitches[static_cast<std::size_t>(l.pitch)];
}

void save_combined_csv(const LatentDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out << "id,descriptor,magnitude,pitch";
    for (std::size_t j = 0; j < ds.dim(); ++j) out << ",z" << j;
    out << '\n';
    for (std::size_t i = 0; i < ds.size(); ++i) {
        write_label_fields(out, ds, i);
        for (double v : ds.row(i)) out << ',' << format_double(v);
        out << '\n';
    }
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

void save_split(const LatentDataset& ds, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

    {
        std::ofstream out(dir / "labels.csv");
        if (!out)
            throw IoError("cannot write '" + (dir / "labels.csv").string() + "'");
        out << "id,descriptor,magnitude,pitch\n";
        for (std::size_t i = 0; i < ds.size(); ++i) {
            write_label_fields(out, ds, i);
            out << '\n';
        }
        if (!out)
            throw IoError("write failed for '" + (dir / "labels.csv").string() + "'");
    }
    {
        std::ofstream out(dir / "embeddings.f64", std::ios::binary);
        if (!out)
            throw IoError("cannot write '" + (dir / "embeddings.f64").string() + "'");
        out.write(reinterpret_cast<const char*>(ds.embeddings().data().data()),
                  static_cast<std::streamsize>(ds.size() * ds.dim() * sizeof(double)));
        if (!out)
            throw IoError("write failed for '" + (dir / "embeddings.f64").string() + "'");
    }
    {
        std::ofstream out(dir / "meta.json");
        if (!out)
            throw IoError("cannot write '" + (dir / "meta.json").string() + "'");
        out << json{{"n", ds.size()}, {"d", ds.dim()}}.dump() << '\n';
    }
}

} // namespace

LatentDataset load_dataset(const std::filesystem::path& path, std::optional<LabelSchema> schema,
                           std::optional<std::size_t> dims, std::optional<std::string> model_name) {
    LabelSchema s = schema ? std::move(*schema) : default_schema();
    s.validate();
    std::string name = model_name ? std::move(*model_name) : path.stem().string();
    if (!std::filesystem::exists(path))
        throw IoError("no such file or directory: '" + path.string() + "'");
    if (std::filesystem::is_directory(path))
        return load_split(path, std::move(s), dims, std::move(name));
    return load_combined_csv(path, std::move(s), std::move(name));
}

void save_dataset(const LatentDataset& ds, const std::filesystem::path& path) {
    for (const auto& n : ds.schema().descriptors) check_name_writable(n);
    for (const auto& n : ds.schema().pitches) check_name_writable(n);
    // Fail early if the percent encoding cannot represent the schema.
    for (std::size_t m = 0; m < ds.schema().magnitudes.size(); ++m)
        ds.schema().magnitude_index_by_percent(ds.schema().magnitude_percent(static_cast<int>(m)));
    if (path.extension() == ".csv")
        save_combined_csv(ds, path);
    else
        save_split(ds, path);
}

LabelSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    LabelSchema s;
    try {
        s.descriptors = j.at("descriptors").get<std::vector<std::string>>();
        s.magnitudes = j.at("magnitudes").get<std::vector<double>>();
        s.pitches = j.at("pitches").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
    s.validate();
    return s;
}

void save_schema(const LabelSchema& schema, const std::filesystem::path& path) {
    schema.validate();
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write '" + path.string() + "'");
    out << nlohmann::json{{"descriptors", schema.descriptors},
                          {"magnitudes", schema.magnitudes},
                          {"pitches", schema.pitches}}
               .dump(2)
        << '\n';
    if (!out)
        throw IoError("write failed for '" + path.string() + "'");
}

} // namespace tle
