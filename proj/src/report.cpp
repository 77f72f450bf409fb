#include "tle/report.hpp"

#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "tle/errors.hpp"

namespace tle {
namespace {

using nlohmann::ordered_json;

std::string format4(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", x);
    return buf;
}

ordered_json pairs_to_object(const std::vector<std::pair<std::string, double>>& pairs) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : pairs) obj[k] = v;
    return obj;
}

ordered_json pairs_to_object(const std::vector<std::pair<std::string, std::string>>& pairs) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : pairs) obj[k] = v;
    return obj;
}

ordered_json counts_to_object(const std::vector<std::pair<std::string, std::size_t>>& pairs) {
    ordered_json obj = ordered_json::object();
    for (const auto& [k, v] : pairs) obj[k] = v;
    return obj;
}

ordered_json metric_to_json(const MetricValue& v) {
    ordered_json obj = ordered_json::object();
    obj["defined"] = v.defined;
    if (!v.defined) {
        obj["reason"] = v.reason;
        return obj;
    }
    obj["aggregate"] = v.aggregate;
    obj["breakdown"] = pairs_to_object(v.breakdown);
    obj["skipped"] = pairs_to_object(v.skipped);
    return obj;
}

MetricValue metric_from_json(const ordered_json& obj) {
    MetricValue v;
    v.defined = obj.at("defined").get<bool>();
    if (!v.defined) {
        v.reason = obj.at("reason").get<std::string>();
        return v;
    }
    v.aggregate = obj.at("aggregate").get<double>();
    for (const auto& [k, val] : obj.at("breakdown").items())
        v.breakdown.emplace_back(k, val.get<double>());
    for (const auto& [k, val] : obj.at("skipped").items())
        v.skipped.emplace_back(k, val.get<std::string>());
    return v;
}

ordered_json report_to_json_value(const MetricReport& r) {
    ordered_json j;
    j["model_name"] = r.model_name;
    j["config"] = {
        {"seed", r.config.seed},
        {"trajectory_mode", to_string(r.config.trajectory_mode)},
        {"kmeans", {{"k", r.config.kmeans_k},
                    {"n_init", r.config.kmeans_n_init},
                    {"max_iterations", r.config.kmeans_max_iterations},
                    {"tolerance", r.config.kmeans_tolerance}}},
    };
    j["dataset"] = {
        {"n", r.dataset_summary.n},
        {"d", r.dataset_summary.d},
        {"descriptor_counts", counts_to_object(r.dataset_summary.descriptor_counts)},
        {"magnitude_counts", counts_to_object(r.dataset_summary.magnitude_counts)},
        {"pitch_counts", counts_to_object(r.dataset_summary.pitch_counts)},
    };
    ordered_json metrics = ordered_json::object();
    const auto names = metric_names();
    for (std::size_t i = 0; i < kMetricCount; ++i)
        metrics[names[i]] = metric_to_json(metric_by_index(r, i));
    j["metrics"] = metrics;
    return j;
}

MetricReport report_from_json_value(const ordered_json& j) {
    MetricReport r;
    r.model_name = j.at("model_name").get<std::string>();
    const auto& cfg = j.at("config");
    r.config.seed = cfg.at("seed").get<std::uint64_t>();
    r.config.trajectory_mode =
        trajectory_mode_from_string(cfg.at("trajectory_mode").get<std::string>());
    const auto& km = cfg.at("kmeans");
    r.config.kmeans_k = km.at("k").get<std::size_t>();
    r.config.kmeans_n_init = km.at("n_init").get<std::size_t>();
    r.config.kmeans_max_iterations = km.at("max_iterations").get<std::size_t>();
    r.config.kmeans_tolerance = km.at("tolerance").get<double>();
    const auto& ds = j.at("dataset");
    r.dataset_summary.n = ds.at("n").get<std::size_t>();
    r.dataset_summary.d = ds.at("d").get<std::size_t>();
    for (const auto& [k, v] : ds.at("descriptor_counts").items())
        r.dataset_summary.descriptor_counts.emplace_back(k, v.get<std::size_t>());
    for (const auto& [k, v] : ds.at("magnitude_counts").items())
        r.dataset_summary.magnitude_counts.emplace_back(k, v.get<std::size_t>());
    for (const auto& [k, v] : ds.at("pitch_counts").items())
        r.dataset_summary.pitch_counts.emplace_back(k, v.get<std::size_t>());
    const auto& metrics = j.at("metrics");
    const auto names = metric_names();
    for (std::size_t i = 0; i < kMetricCount; ++i)
        metric_by_index(r, i) = metric_from_json(metrics.at(names[i]));
    return r;
}

ordered_json parse_json(const std::string& text, const char* what) {
    try {
        return ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ValidationError(std::string(what) + ": invalid JSON: " + e.what());
    }
}

} // namespace

ComparisonTable make_comparison(std::vector<MetricReport> rows) {
    if (rows.empty())
        throw ValidationError("comparison: no rows");
    ComparisonTable cmp;
    cmp.rows = std::move(rows);
    for (std::size_t col = 0; col < kMetricCount; ++col) {
        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
            const MetricValue& v = metric_by_index(cmp.rows[i], col);
            if (!v.defined) continue;
            if (!best || v.aggregate > metric_by_index(cmp.rows[*best], col).aggregate)
                best = i;
        }
        cmp.best_per_column[col] = best;
    }
    return cmp;
}

std::string render_table(const ComparisonTable& cmp, const std::string& marker) {
    if (cmp.rows.empty())
        throw ValidationError("comparison: no rows");

    const auto headers = metric_headers();
    const std::string pad(marker.size(), ' ');

    // Cell texts first; best cells carry the marker, the rest matching
    // blanks so digits stay aligned within a column.
    std::vector<std::string> models;
    std::vector<std::array<std::string, kMetricCount>> cells(cmp.rows.size());
    std::vector<std::pair<std::string, std::string>> footnotes;  // model -> note
    for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
        models.push_back(cmp.rows[i].model_name);
        for (std::size_t col = 0; col < kMetricCount; ++col) {
            const MetricValue& v = metric_by_index(cmp.rows[i], col);
            if (!v.defined) {
                cells[i][col] = "—" + pad;
                footnotes.emplace_back(cmp.rows[i].model_name,
                                       headers[col] + ": " + v.reason);
                continue;
            }
            const bool best = cmp.best_per_column[col] == i;
            cells[i][col] = format4(v.aggregate) + (best ? marker : pad);
        }
    }

    std::size_t model_width = std::string("Model").size();
    for (const auto& m : models) model_width = std::max(model_width, m.size());
    std::array<std::size_t, kMetricCount> width{};
    for (std::size_t col = 0; col < kMetricCount; ++col) {
        width[col] = headers[col].size();
        for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
            // The em dash is 3 bytes but 1 column; measure display width.
            const auto& cell = cells[i][col];
            const std::size_t display = cell.size() - (cell.find("—") == 0 ? 2 : 0);
            width[col] = std::max(width[col], display);
        }
    }

    std::string out;
    auto emit_row = [&](const std::string& model, auto cell_text) {
        std::string line = model;
        line.append(model_width - model.size(), ' ');
        for (std::size_t col = 0; col < kMetricCount; ++col) {
            const std::string cell = cell_text(col);
            const std::size_t display = cell.size() - (cell.find("—") == 0 ? 2 : 0);
            line += "  ";
            line.append(width[col] - display, ' ');
            line += cell;
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line;
        out += '\n';
    };

    emit_row("Model", [&](std::size_t col) { return headers[col]; });
    for (std::size_t i = 0; i < cmp.rows.size(); ++i)
        emit_row(models[i], [&](std::size_t col) { return cells[i][col]; });

    if (!footnotes.empty()) {
        out += '\n';
        for (const auto& [model, note] : footnotes)
            out += "— " + model + ": " + note + '\n';
    }
    return out;
}

std::string to_json(const MetricReport& report) {
    return report_to_json_value(report).dump(2) + "\n";
}

MetricReport report_from_json(const std::string& text) {
    try {
        return report_from_json_value(parse_json(text, "report"));
    } catch (const ordered_json::exception& e) {
        throw ValidationError(std::string("report: ") + e.what());
    }
}

std::string to_json(const ComparisonTable& cmp) {
    ordered_json j;
    const auto names = metric_names();
    j["columns"] = std::vector<std::string>(names.begin(), names.end());
    ordered_json rows = ordered_json::array();
    for (const auto& r : cmp.rows) rows.push_back(report_to_json_value(r));
    j["rows"] = std::move(rows);
    ordered_json best = ordered_json::object();
    for (std::size_t col = 0; col < kMetricCount; ++col)
        if (cmp.best_per_column[col]) best[names[col]] = *cmp.best_per_column[col];
    j["best_per_column"] = std::move(best);
    return j.dump(2) + "\n";
}

ComparisonTable comparison_from_json(const std::string& text) {
    const ordered_json j = parse_json(text, "comparison");
    ComparisonTable cmp;
    try {
        const auto names = metric_names();
        const auto columns = j.at("columns").get<std::vector<std::string>>();
        if (!std::equal(columns.begin(), columns.end(), names.begin(), names.end()))
            throw ValidationError("comparison: unexpected column list");
        for (const auto& row : j.at("rows"))
            cmp.rows.push_back(report_from_json_value(row));
        const auto& best = j.at("best_per_column");
        for (std::size_t col = 0; col < kMetricCount; ++col) {
            if (auto it = best.find(names[col]); it != best.end()) {
                const auto idx = it->get<std::size_t>();
                if (idx >= cmp.rows.size())
                    throw ValidationError("comparison: best_per_column index out of range");
                cmp.best_per_column[col] = idx;
            }
        }
    } catch (const ordered_json::exception& e) {
        throw ValidationError(std::string("comparison: ") + e.what());
    }
    return cmp;
}

} // namespace tle
