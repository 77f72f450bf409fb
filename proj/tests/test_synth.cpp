#include <doctest.h>

#include <cmath>
#include <map>
#include <tuple>

#include "tle/errors.hpp"
#include "tle/metrics.hpp"
#include "tle/synth.hpp"

#include "helpers.hpp"

using namespace tle;
using namespace testutil;

namespace {

bool same_dataset(const LatentDataset& a, const LatentDataset& b) {
    return a.embeddings() == b.embeddings() && a.labels() == b.labels() &&
           a.model_name() == b.model_name();
}

} // namespace

TEST_CASE("synth config validation") {
    SynthConfig cfg;
    CHECK_NOTHROW(cfg.validate());

    SUBCASE("dims") { cfg.dims = 1; }
    SUBCASE("samples per cell") { cfg.samples_per_cell = 0; }
    SUBCASE("negative noise") { cfg.noise_sigma = -0.1; }
    SUBCASE("non-finite spread") { cfg.pitch_spread = std::nan(""); }
    SUBCASE("coupling above 1") { cfg.pitch_coupling = 1.5; }
    SUBCASE("coupling below 0") { cfg.pitch_coupling = -0.25; }
    SUBCASE("empty model name") { cfg.model_name = ""; }
    SUBCASE("broken schema") { cfg.schema.magnitudes = {0.5, 0.5}; }
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("synth config json round-trip") {
    SynthConfig cfg;
    cfg.dims = 12;
    cfg.samples_per_cell = 3;
    cfg.pitch_spread = 4.5;
    cfg.descriptor_offset = 2.0;
    cfg.curvature = 0.7;
    cfg.step_jitter = 0.05;
    cfg.pitch_coupling = 0.3;
    cfg.noise_sigma = 0.2;
    cfg.seed = 99;
    cfg.model_name = "probe";
    cfg.schema = tiny_schema();
    CHECK(synth_config_from_json(to_json(cfg)) == cfg);
}

TEST_CASE("synth config json accepts partial input and rejects unknown keys") {
    CHECK(synth_config_from_json("{}") == SynthConfig{});

    const auto cfg = synth_config_from_json(R"({"dims": 16, "noise_sigma": 0.5})");
    CHECK(cfg.dims == 16);
    CHECK(cfg.noise_sigma == 0.5);
    CHECK(cfg.pitch_spread == SynthConfig{}.pitch_spread);

    CHECK_THROWS_WITH_AS(synth_config_from_json(R"({"dims": 16, "spreed": 1.0})"),
                         doctest::Contains("spreed"), ValidationError);
}

TEST_CASE("load_synth_config reports missing files") {
    CHECK_THROWS_WITH_AS(load_synth_config("/nonexistent/cfg.json"),
                         doctest::Contains("/nonexistent/cfg.json"), IoError);

    TempDir tmp("synthcfg");
    const auto path = tmp.file("cfg.json");
    write_file(path, "{\"dims\": 3");
    CHECK_THROWS_AS(load_synth_config(path), ValidationError);
}

TEST_CASE("generate is deterministic and covers every cell") {
    SynthConfig cfg;
    cfg.dims = 6;
    cfg.samples_per_cell = 3;
    cfg.schema = tiny_schema();
    cfg.seed = 123;
    const auto a = generate(cfg);
    const auto b = generate(cfg);
    CHECK(same_dataset(a, b));

    const auto& s = cfg.schema;
    CHECK(a.size() == s.descriptors.size() * s.magnitudes.size() * s.pitches.size() *
                          cfg.samples_per_cell);
    CHECK(a.dim() == cfg.dims);
    CHECK(a.model_name() == "synthetic");

    std::map<std::tuple<int, int, int>, std::size_t> cells;
    for (const auto& l : a.labels()) ++cells[{l.descriptor, l.magnitude, l.pitch}];
    CHECK(cells.size() == s.descriptors.size() * s.magnitudes.size() * s.pitches.size());
    for (const auto& [cell, count] : cells) CHECK(count == cfg.samples_per_cell);

    cfg.seed = 124;
    CHECK_FALSE(same_dataset(a, generate(cfg)));
}

TEST_CASE("generate works when dims is smaller than the pitch count") {
    SynthConfig cfg;
    cfg.dims = 2;  // fewer axes than the 3 pitches -> random centers
    cfg.schema = tiny_schema();
    cfg.samples_per_cell = 1;
    const auto ds = generate(cfg);
    CHECK(ds.dim() == 2);
    CHECK(same_dataset(ds, generate(cfg)));
}

TEST_CASE("benign knobs give perfectly clean geometry") {
    SynthConfig cfg;
    cfg.dims = 24;
    cfg.samples_per_cell = 1;
    cfg.schema = tiny_schema();
    cfg.curvature = 0.0;
    cfg.step_jitter = 0.0;
    cfg.pitch_coupling = 0.0;
    cfg.noise_sigma = 0.0;
    const auto ds = generate(cfg);

    const auto lin = trajectory_linearity(ds, TrajectoryMode::PerPitch);
    for (const auto& [key, v] : lin.breakdown) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    const auto step = step_consistency(ds, TrajectoryMode::PerPitch);
    for (const auto& [key, v] : step.breakdown)
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    // Pitch centers sit on distinct signed axes, all sqrt(2)*spread apart.
    const auto cross = cross_pitch_consistency(ds);
    CHECK(cross.aggregate == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("default geometry is pitch-dominated") {
    SynthConfig cfg;
    cfg.dims = 32;
    cfg.samples_per_cell = 1;
    const auto ds = generate(cfg);
    CHECK(global_descriptor_silhouette(ds).aggregate < 0.0);
    CHECK(within_pitch_silhouette(ds).aggregate > 0.0);
}

TEST_CASE("each knob degrades its metric") {
    SynthConfig base;
    base.dims = 16;
    base.samples_per_cell = 2;
    base.schema = tiny_schema();

    const auto eval = [](const SynthConfig& cfg) { return evaluate_all(generate(cfg)); };
    const auto clean = eval(base);

    auto noisy = base;
    noisy.noise_sigma = 1.0;
    CHECK(eval(noisy).compactness.aggregate < clean.compactness.aggregate);

    auto coupled = base;
    coupled.pitch_coupling = 0.8;
    CHECK(eval(coupled).cross_pitch_consistency.aggregate <
          clean.cross_pitch_consistency.aggregate);

    auto curved = base;
    curved.curvature = 2.0;
    CHECK(eval(curved).linearity.aggregate < clean.linearity.aggregate);

    auto jittered = base;
    jittered.step_jitter = 0.3;
    CHECK(eval(jittered).step_consistency.aggregate < clean.step_consistency.aggregate);

    auto separated = base;
    separated.descriptor_offset = 4.0;
    CHECK(eval(separated).within_pitch_silhouette.aggregate >
          clean.within_pitch_silhouette.aggregate);
}
