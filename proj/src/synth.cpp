#include "tle/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "tle/errors.hpp"
#include "tle/rng.hpp"

namespace tle {
namespace {

using nlohmann::ordered_json;

void require_scale(double value, const char* name) {
    if (!std::isfinite(value) || value < 0.0)
        throw ValidationError(std::string("synth config: ") + name +
                              " must be finite and >= 0");
}

/// Unit vector orthogonal to `u`, built from the raw direction `r`.
std::vector<double> orthogonalize(const std::vector<double>& r,
                                  const std::vector<double>& u) {
    double dot = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) dot += r[k] * u[k];
    std::vector<double> w(r.size());
    double norm2 = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
        w[k] = r[k] - dot * u[k];
        norm2 += w[k] * w[k];
    }
    if (norm2 < 1e-24) {
        // r was (anti)parallel to u; fall back to the coordinate axis where
        // u is smallest, which cannot itself be parallel to u for dims >= 2.
        std::size_t axis = 0;
        for (std::size_t k = 1; k < u.size(); ++k)
            if (std::abs(u[k]) < std::abs(u[axis])) axis = k;
        std::fill(w.begin(), w.end(), 0.0);
        w[axis] = 1.0;
        dot = u[axis];
        norm2 = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            w[k] -= dot * u[k];
            norm2 += w[k] * w[k];
        }
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : w) x *= inv;
    return w;
}

} // namespace

void SynthConfig::validate() const {
    if (dims < 2)
        throw ValidationError("synth config: dims must be >= 2");
    if (samples_per_cell < 1)
        throw ValidationError("synth config: samples_per_cell must be >= 1");
    require_scale(pitch_spread, "pitch_spread");
    require_scale(descriptor_offset, "descriptor_offset");
    require_scale(curvature, "curvature");
    require_scale(step_jitter, "step_jitter");
    require_scale(noise_sigma, "noise_sigma");
    if (!std::isfinite(pitch_coupling) || pitch_coupling < 0.0 || pitch_coupling > 1.0)
        throw ValidationError("synth config: pitch_coupling must be in [0,1]");
    if (model_name.empty())
        throw ValidationError("synth config: model_name must not be empty");
    schema.validate();
}

SynthConfig synth_config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ValidationError(std::string("synth config: invalid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ValidationError("synth config: top level must be a JSON object");

    SynthConfig cfg;
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "dims") cfg.dims = value.get<std::size_t>();
            else if (key == "samples_per_cell") cfg.samples_per_cell = value.get<std::size_t>();
            else if (key == "pitch_spread") cfg.pitch_spread = value.get<double>();
            else if (key == "descriptor_offset") cfg.descriptor_offset = value.get<double>();
            else if (key == "curvature") cfg.curvature = value.get<double>();
            else if (key == "step_jitter") cfg.step_jitter = value.get<double>();
            else if (key == "pitch_coupling") cfg.pitch_coupling = value.get<double>();
            else if (key == "noise_sigma") cfg.noise_sigma = value.get<double>();
            else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
            else if (key == "model_name") cfg.model_name = value.get<std::string>();
            else if (key == "schema") {
                cfg.schema.descriptors = value.at("descriptors").get<std::vector<std::string>>();
                cfg.schema.magnitudes = value.at("magnitudes").get<std::vector<double>>();
                cfg.schema.pitches = value.at("pitches").get<std::vector<std::string>>();
            } else {
                throw ValidationError("synth config: unknown key '" + key + "'");
            }
        }
    } catch (const ordered_json::exception& e) {
        throw ValidationError(std::string("synth config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

std::string to_json(const SynthConfig& config) {
    ordered_json j;
    j["dims"] = config.dims;
    j["samples_per_cell"] = config.samples_per_cell;
    j["pitch_spread"] = config.pitch_spread;
    j["descriptor_offset"] = config.descriptor_offset;
    j["curvature"] = config.curvature;
    j["step_jitter"] = config.step_jitter;
    j["pitch_coupling"] = config.pitch_coupling;
    j["noise_sigma"] = config.noise_sigma;
    j["seed"] = config.seed;
    j["model_name"] = config.model_name;
    j["schema"] = {{"descriptors", config.schema.descriptors},
                   {"magnitudes", config.schema.magnitudes},
                   {"pitches", config.schema.pitches}};
    return j.dump(2) + "\n";
}

SynthConfig load_synth_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open synth config '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError("failed reading synth config '" + path.string() + "'");
    try {
        return synth_config_from_json(buf.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

LatentDataset generate(const SynthConfig& config) {
    config.validate();
    const LabelSchema& s = config.schema;
    const std::size_t nd = s.descriptors.size();
    const std::size_t nm = s.magnitudes.size();
    const std::size_t np = s.pitches.size();
    const std::size_t dim = config.dims;

    rng::Engine eng = rng::make_engine(config.seed);

    // Stage 1: pitch centers. When the space has an axis to spare for every
    // pitch, each center sits on its own randomly signed coordinate axis, so
    // all centers are pairwise equidistant (sqrt(2) * pitch_spread). That
    // exactness is what lets pitch structure cancel out of the cross-pitch
    // distance lists. Low-dimensional spaces fall back to Gaussian centers.
    std::vector<std::vector<double>> pitch_center(np);
    if (dim >= np) {
        std::vector<std::size_t> axes(dim);
        std::iota(axes.begin(), axes.end(), std::size_t{0});
        for (std::size_t p = 0; p < np; ++p) {
            const std::size_t pick = rng::uniform_index(eng, axes.size());
            const std::size_t axis = axes[pick];
            axes.erase(axes.begin() + static_cast<std::ptrdiff_t>(pick));
            const double sign = rng::uniform01(eng) < 0.5 ? 1.0 : -1.0;
            pitch_center[p].assign(dim, 0.0);
            pitch_center[p][axis] = sign * config.pitch_spread;
        }
    } else {
        for (std::size_t p = 0; p < np; ++p) {
            pitch_center[p] = rng::gaussian_vector(eng, dim);
            for (auto& x : pitch_center[p]) x *= config.pitch_spread;
        }
    }

    // Stage 2: descriptor base directions and their curvature companions.
    std::vector<std::vector<double>> u(nd), w(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        u[d] = rng::unit_vector(eng, dim);
        w[d] = orthogonalize(rng::unit_vector(eng, dim), u[d]);
    }

    // Stage 3: per-pitch blend directions.
    std::vector<std::vector<std::vector<double>>> v(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        v[d].resize(np);
        for (std::size_t p = 0; p < np; ++p) v[d][p] = rng::unit_vector(eng, dim);
    }

    // Stage 4: per-cell step jitter scalars, addressed [d][m][p].
    std::vector<double> jitter(nd * nm * np);
    for (auto& x : jitter) x = rng::gaussian(eng);

    // Effective directions (no draws): dir_dp = normalize((1-c)u_d + c*v_dp).
    const double c = config.pitch_coupling;
    std::vector<std::vector<std::vector<double>>> dir(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        dir[d].resize(np);
        for (std::size_t p = 0; p < np; ++p) {
            std::vector<double> mix(dim);
            double norm2 = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                mix[k] = (1.0 - c) * u[d][k] + c * v[d][p][k];
                norm2 += mix[k] * mix[k];
            }
            if (norm2 < 1e-24) {
                dir[d][p] = u[d];  // opposing blend collapsed; keep the base
            } else {
                const double inv = 1.0 / std::sqrt(norm2);
                for (auto& x : mix) x *= inv;
                dir[d][p] = std::move(mix);
            }
        }
    }

    // Stage 5: emit samples, one cell at a time.
    const std::size_t n = nd * nm * np * config.samples_per_cell;
    Matrix embeddings(n, dim);
    std::vector<SampleLabel> labels;
    labels.reserve(n);
    std::size_t row = 0;
    for (std::size_t d = 0; d < nd; ++d) {
        for (std::size_t m = 0; m < nm; ++m) {
            const double m_frac = s.magnitudes[m];
            const double bump = config.curvature * m_frac * (1.0 - m_frac);
            for (std::size_t p = 0; p < np; ++p) {
                const double along = config.descriptor_offset *
                    (m_frac + jitter[(d * nm + m) * np + p] * config.step_jitter);
                std::vector<double> center(dim);
                for (std::size_t k = 0; k < dim; ++k)
                    center[k] = pitch_center[p][k] + along * dir[d][p][k] + bump * w[d][k];
                for (std::size_t i = 0; i < config.samples_per_cell; ++i, ++row) {
                    auto out = embeddings.row(row);
                    const auto noise = rng::gaussian_vector(eng, dim);
                    for (std::size_t k = 0; k < dim; ++k)
                        out[k] = center[k] + config.noise_sigma * noise[k];
                    labels.push_back({static_cast<std::int32_t>(d),
                                      static_cast<std::int32_t>(m),
                                      static_cast<std::int32_t>(p)});
                }
            }
        }
    }
    return LatentDataset(std::move(embeddings), std::move(labels), s, config.model_name);
}

} // namespace tle
