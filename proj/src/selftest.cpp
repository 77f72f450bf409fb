#include "tle/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "tle/clustering.hpp"
#include "tle/dataset.hpp"
#include "tle/geometry.hpp"
#include "tle/metrics.hpp"
#include "tle/report.hpp"
#include "tle/rng.hpp"
#include "tle/synth.hpp"

namespace tle {
namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Matrix column(std::vector<double> xs) {
    Matrix m(xs.size(), 1);
    for (std::size_t i = 0; i < xs.size(); ++i) m.at(i, 0) = xs[i];
    return m;
}

/// Written straight from the silhouette definition, sharing no code with
/// the production path, so the two implementations check each other.
double naive_silhouette(const Matrix& m, const std::vector<int>& labels) {
    const std::size_t n = m.rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::map<int, std::vector<double>> dists_by_class;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dists_by_class[labels[j]].push_back(euclidean_distance(m.row(i), m.row(j)));
        }
        const auto own = dists_by_class.find(labels[i]);
        if (own == dists_by_class.end()) continue;  // singleton class: term 0
        double a = 0.0;
        for (double d : own->second) a += d;
        a /= static_cast<double>(own->second.size());
        double b = std::numeric_limits<double>::infinity();
        for (const auto& [cls, ds] : dists_by_class) {
            if (cls == labels[i]) continue;
            double s = 0.0;
            for (double d : ds) s += d;
            b = std::min(b, s / static_cast<double>(ds.size()));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

struct Check {
    const char* name;
    std::function<bool(std::string&)> run;
};

const std::vector<Check>& checks() {
    static const std::vector<Check> list = {
        {"pairwise-distance-order",
         [](std::string&) {
             const auto d = pairwise_distances({{0.0}, {1.0}, {2.0}});
             return d == std::vector<double>{1.0, 2.0, 1.0};
         }},
        {"centroid-mean",
         [](std::string&) {
             const auto c = centroid({{1.0, 2.0}, {3.0, 6.0}});
             return c == std::vector<double>{2.0, 4.0};
         }},
        {"silhouette-two-pairs",
         [](std::string& detail) {
             const std::vector<int> labels = {0, 0, 1, 1};
             const double s = silhouette(column({0.0, 0.1, 10.0, 10.1}), labels);
             detail = std::to_string(s);
             return near(s, 0.990000, 1e-6);
         }},
        {"silhouette-brute-force",
         [](std::string& detail) {
             auto eng = rng::make_engine(11);
             Matrix m(60, 3);
             std::vector<int> labels(60);
             for (std::size_t i = 0; i < 60; ++i) {
                 labels[i] = static_cast<int>(i % 4);
                 for (std::size_t k = 0; k < 3; ++k)
                     m.at(i, k) = rng::gaussian(eng) + labels[i];
             }
             const double fast = silhouette(m, labels);
             const double slow = naive_silhouette(m, labels);
             detail = std::to_string(fast - slow);
             return near(fast, slow, 1e-9);
         }},
        {"kmeans-two-blobs",
         [](std::string&) {
             KMeansParams params;
             params.k = 2;
             params.seed = kDefaultSeed;
             const auto r = kmeans(column({0.0, 0.1, 10.0, 10.1}), params);
             std::vector<double> centers = {r.centroids.at(0, 0), r.centroids.at(1, 0)};
             std::sort(centers.begin(), centers.end());
             return r.assignments[0] == r.assignments[1] &&
                    r.assignments[2] == r.assignments[3] &&
                    r.assignments[0] != r.assignments[2] &&
                    near(centers[0], 0.05, 1e-12) && near(centers[1], 10.05, 1e-12);
         }},
        {"kmeans-deterministic",
         [](std::string&) {
             auto eng = rng::make_engine(5);
             Matrix m(40, 2);
             for (auto& x : m.data()) x = rng::gaussian(eng);
             KMeansParams params;
             params.k = 3;
             params.seed = 99;
             const auto a = kmeans(m, params);
             const auto b = kmeans(m, params);
             return a.assignments == b.assignments && a.centroids == b.centroids &&
                    a.inertia == b.inertia;
         }},
        {"purity-hand-counts",
         [](std::string& detail) {
             const std::vector<std::size_t> pred = {0, 0, 0, 1, 1, 1};
             const std::vector<int> truth = {0, 0, 1, 0, 1, 1};
             const double p = purity(pred, truth);
             detail = std::to_string(p);
             const std::vector<int> same = {0, 0, 1, 0, 1, 1};
             const std::vector<std::size_t> identical = {0, 0, 1, 0, 1, 1};
             return near(p, 4.0 / 6.0, 1e-4) && purity(identical, same) == 1.0;
         }},
        {"compactness-three-points",
         [](std::string& detail) {
             const auto d = pairwise_distances({{0.0}, {1.0}, {2.0}});
             const double c = 1.0 / (1.0 + mean(d));
             detail = std::to_string(c);
             return near(c, 3.0 / 7.0, 1e-4);
         }},
        {"consistency-centroid-spread",
         [](std::string& detail) {
             const auto d = pairwise_distances({{0.0}, {1.0}, {2.0}});
             const double c = consistency_from_distances(d);
             detail = std::to_string(c);
             return near(c, 0.6796, 1e-3);
         }},
        {"linearity-right-angle",
         [](std::string& detail) {
             const double l =
                 linearity_of_path({{0, 0}, {1, 0}, {1, 1}, {2, 1}});
             detail = std::to_string(l);
             return near(l, std::sqrt(5.0) / 3.0, 1e-4) &&
                    linearity_of_path({{0, 0}, {1, 0}, {2, 0}, {3, 0}}) == 1.0;
         }},
        {"step-consistency-uneven",
         [](std::string& detail) {
             const double s = step_consistency_of_path({{0.0}, {1.0}, {2.0}, {4.0}});
             detail = std::to_string(s);
             return near(s, 0.7388, 1e-3) &&
                    step_consistency_of_path({{0.0}, {1.0}, {2.0}, {3.0}}) == 1.0;
         }},
        {"synth-deterministic",
         [](std::string&) {
             SynthConfig cfg;
             cfg.dims = 24;
             cfg.samples_per_cell = 1;
             cfg.seed = 77;
             const auto a = generate(cfg);
             const auto b = generate(cfg);
             return a.embeddings() == b.embeddings() && a.labels() == b.labels();
         }},
        {"synth-cross-pitch-exact",
         [](std::string& detail) {
             SynthConfig cfg;
             cfg.dims = 32;
             cfg.samples_per_cell = 1;
             cfg.pitch_coupling = 0.0;
             cfg.noise_sigma = 0.0;
             const auto v = cross_pitch_consistency(generate(cfg));
             detail = std::to_string(v.aggregate);
             return v.defined && near(v.aggregate, 1.0, 1e-9);
         }},
        {"report-best-column",
         [](std::string&) {
             auto row = [](const std::string& name, double purity_value) {
                 MetricReport r;
                 r.model_name = name;
                 r.purity.defined = true;
                 r.purity.aggregate = purity_value;
                 return r;
             };
             const auto cmp =
                 make_comparison({row("a", 0.1016), row("b", 0.1090), row("c", 0.1383)});
             if (cmp.best_per_column[1] != std::size_t{2}) return false;
             const auto text = render_table(cmp);
             return text.find("0.1383*") != std::string::npos &&
                    text.find("0.1016*") == std::string::npos;
         }},
        {"report-json-roundtrip",
         [](std::string&) {
             SynthConfig cfg;
             cfg.dims = 8;
             cfg.schema.descriptors = {"bright", "dark", "warm"};
             cfg.schema.magnitudes = {0.5, 1.0};
             cfg.schema.pitches = {"E4", "A4", "D5"};
             cfg.samples_per_cell = 2;
             const auto report = evaluate_all(generate(cfg));
             return report_from_json(to_json(report)) == report;
         }},
    };
    return list;
}

} // namespace

int run_selftest(std::ostream& out) {
    int failures = 0;
    for (const auto& check : checks()) {
        std::string detail;
        bool ok = false;
        try {
            ok = check.run(detail);
        } catch (const std::exception& e) {
            detail = e.what();
        }
        if (ok) {
            out << "ok   " << check.name << "\n";
        } else {
            ++failures;
            out << "FAIL " << check.name;
            if (!detail.empty()) out << " (" << detail << ")";
            out << "\n";
        }
    }
    out << (failures == 0 ? "all checks passed" : "SELFTEST FAILED") << " ("
        << checks().size() - static_cast<std::size_t>(failures) << "/" << checks().size()
        << ")\n";
    return failures;
}

} // namespace tle
