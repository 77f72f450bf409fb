#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tle/dataset.hpp"
#include "tle/rng.hpp"
#include "tle/schema.hpp"

namespace testutil {

inline tle::Matrix matrix_of(const std::vector<std::vector<double>>& rows) {
    return tle::Matrix::from_rows(rows);
}

/// Small-vocabulary schema for hand-built fixtures.
inline tle::LabelSchema tiny_schema() {
    tle::LabelSchema s;
    s.descriptors = {"bright", "dark", "warm"};
    s.magnitudes = {0.25, 0.5, 0.75, 1.0};
    s.pitches = {"E4", "A4", "D5"};
    return s;
}

struct LabeledRow {
    std::vector<double> z;
    int d, m, p;
};

inline tle::LatentDataset make_dataset(const tle::LabelSchema& schema,
                                       const std::vector<LabeledRow>& rows,
                                       std::string model_name = "fixture") {
    std::vector<std::vector<double>> z;
    std::vector<tle::SampleLabel> labels;
    for (const auto& r : rows) {
        z.push_back(r.z);
        labels.push_back({r.d, r.m, r.p});
    }
    return tle::LatentDataset(tle::Matrix::from_rows(z), std::move(labels), schema,
                              std::move(model_name));
}

/// Random dataset with loose class structure: descriptor centers plus noise,
/// random label assignment per sample (cells may be missing, exercising the
/// skip paths). Schema sizes are drawn too.
inline tle::LatentDataset random_dataset(tle::rng::Engine& eng, std::size_t max_n = 150,
                                         std::size_t max_d = 16) {
    const std::size_t nd = 2 + tle::rng::uniform_index(eng, 5);   // 2..6 descriptors
    const std::size_t nm = 2 + tle::rng::uniform_index(eng, 3);   // 2..4 magnitudes
    const std::size_t np = 2 + tle::rng::uniform_index(eng, 4);   // 2..5 pitches
    const std::size_t dim = 2 + tle::rng::uniform_index(eng, max_d - 1);
    const std::size_t n = 10 + tle::rng::uniform_index(eng, max_n - 9);

    tle::LabelSchema schema;
    for (std::size_t i = 0; i < nd; ++i) schema.descriptors.push_back("d" + std::to_string(i));
    for (std::size_t i = 0; i < np; ++i) schema.pitches.push_back("p" + std::to_string(i));
    // Increasing levels on a 5% grid keeps percent round-trips unambiguous.
    std::size_t step = 1 + tle::rng::uniform_index(eng, 20 / nm);
    for (std::size_t i = 0; i < nm; ++i)
        schema.magnitudes.push_back(0.05 * static_cast<double>((i + 1) * step));

    std::vector<std::vector<double>> centers(nd);
    for (auto& c : centers) {
        c = tle::rng::gaussian_vector(eng, dim);
        for (auto& x : c) x *= 3.0;
    }

    std::vector<std::vector<double>> rows;
    std::vector<tle::SampleLabel> labels;
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = static_cast<int>(tle::rng::uniform_index(eng, nd));
        auto z = tle::rng::gaussian_vector(eng, dim);
        for (std::size_t k = 0; k < dim; ++k) z[k] += centers[static_cast<std::size_t>(d)][k];
        rows.push_back(std::move(z));
        labels.push_back({d, static_cast<int>(tle::rng::uniform_index(eng, nm)),
                          static_cast<int>(tle::rng::uniform_index(eng, np))});
    }
    return tle::LatentDataset(tle::Matrix::from_rows(rows), std::move(labels),
                              std::move(schema), "random");
}

/// Random orthonormal matrix (Gram-Schmidt over Gaussian draws), for
/// rigid-motion invariance checks.
inline std::vector<std::vector<double>> random_rotation(tle::rng::Engine& eng, std::size_t d) {
    std::vector<std::vector<double>> q;
    while (q.size() < d) {
        auto v = tle::rng::gaussian_vector(eng, d);
        for (const auto& u : q) {
            double dot = 0.0;
            for (std::size_t k = 0; k < d; ++k) dot += v[k] * u[k];
            for (std::size_t k = 0; k < d; ++k) v[k] -= dot * u[k];
        }
        double norm2 = 0.0;
        for (double x : v) norm2 += x * x;
        if (norm2 < 1e-12) continue;  // regenerate a degenerate draw
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
        q.push_back(std::move(v));
    }
    return q;
}

/// Rows mapped through x -> Q x + t.
inline tle::Matrix transform_rows(const tle::Matrix& m,
                                  const std::vector<std::vector<double>>& q,
                                  const std::vector<double>& t) {
    tle::Matrix out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t r = 0; r < m.cols(); ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < m.cols(); ++c) acc += q[r][c] * m.at(i, c);
            out.at(i, r) = acc + t[r];
        }
    }
    return out;
}

inline tle::LatentDataset transform_dataset(const tle::LatentDataset& ds,
                                            const std::vector<std::vector<double>>& q,
                                            const std::vector<double>& t) {
    return tle::LatentDataset(transform_rows(ds.embeddings(), q, t), ds.labels(), ds.schema(),
                              ds.model_name());
}

inline tle::LatentDataset scale_dataset(const tle::LatentDataset& ds, double c) {
    tle::Matrix m = ds.embeddings();
    for (auto& x : m.data()) x *= c;
    return tle::LatentDataset(std::move(m), ds.labels(), ds.schema(), ds.model_name());
}

/// Unique scratch directory under the system temp dir, removed on scope exit.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("tle_test_" + tag + "_" + std::to_string(++counter) + "_" +
                 std::to_string(static_cast<unsigned>(::getpid())));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout and stderr interleaved
};

/// Run the real CLI binary with output captured via a scratch file.
/// `env` is prepended to the shell command (e.g. "TLE_SEED=5").
inline CliResult run_cli(const std::string& args, const std::string& env = {}) {
    static int counter = 0;
    const auto capture = std::filesystem::temp_directory_path() /
                         ("tle_cli_out_" + std::to_string(::getpid()) + "_" +
                          std::to_string(++counter));
    const std::string cmd = (env.empty() ? std::string() : env + " ") +
                            std::string(TLE_CLI_PATH) + " " + args + " > " +
                            capture.string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    res.output = read_file(capture);
    std::filesystem::remove(capture);
    return res;
}

} // namespace testutil
