#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tle/dataset.hpp"
#include "tle/metrics.hpp"

namespace tle {

/// Ground-truth knobs for the synthetic latent-space generator. Each knob
/// controls exactly one structural property, so the metric suite can be
/// validated against datasets whose "right answer" is known by construction.
///
/// Every knob is a pure multiplier on draws that are always consumed, so two
/// configs differing only in knob values share all underlying random
/// structure (same pitch centers, same directions, same noise directions).
/// That is what makes seed-fixed knob sweeps meaningful.
struct SynthConfig {
    std::size_t dims = 128;
    std::size_t samples_per_cell = 2;   // per (descriptor, magnitude, pitch)
    double pitch_spread = 10.0;         // distance scale between pitch centers
    double descriptor_offset = 1.0;     // length of each descriptor direction
    double curvature = 0.0;             // bends magnitude trajectories
    double step_jitter = 0.0;           // randomizes per-step magnitudes
    double pitch_coupling = 0.0;        // 0 = shared directions, 1 = independent per pitch
    double noise_sigma = 0.05;          // isotropic per-sample Gaussian noise
    std::uint64_t seed = kDefaultSeed;
    std::string model_name = "synthetic";
    LabelSchema schema = default_schema();

    /// Throws ValidationError: dims >= 2, samples_per_cell >= 1, all scale
    /// knobs finite and >= 0, pitch_coupling in [0,1], schema valid.
    void validate() const;

    bool operator==(const SynthConfig&) const = default;
};

/// Parse a config from JSON text. Every field is optional and falls back to
/// the defaults above; unknown keys are rejected. The schema may be embedded
/// as {"descriptors": [...], "magnitudes": [...], "pitches": [...]}.
SynthConfig synth_config_from_json(const std::string& text);
std::string to_json(const SynthConfig& config);

/// Read a config file (IoError if unreadable, ValidationError if malformed).
SynthConfig load_synth_config(const std::filesystem::path& path);

/// Build the dataset described by the config. Deterministic: the same config
/// always yields the bit-identical dataset.
///
/// Generative model, in draw order:
///   1. pitch centers P_p        distinct signed coordinate axes scaled by
///                               pitch_spread when dims allows (this makes all
///                               centers exactly equidistant), otherwise
///                               Gaussian at scale pitch_spread
///   2. per descriptor           base unit direction u_d, plus a unit
///                               direction w_d orthogonalized against u_d
///                               (carries the curvature bump)
///   3. per (descriptor, pitch)  blend unit direction v_dp; the effective
///                               direction is the normalized mix
///                               (1-coupling)*u_d + coupling*v_dp
///   4. per cell (d, m, p)       one Gaussian jitter scalar (step_jitter)
///   5. per sample               one Gaussian noise vector (noise_sigma)
///
/// Cell centroid:
///   P_p + offset*(m_frac + jitter*step_jitter)*dir_dp
///       + curvature*m_frac*(1-m_frac)*w_d
/// where m_frac is the fractional magnitude level. Rows are emitted one cell
/// at a time, descriptors outermost, then magnitudes, then pitches, with
/// samples_per_cell consecutive rows per cell.
LatentDataset generate(const SynthConfig& config);

} // namespace tle
