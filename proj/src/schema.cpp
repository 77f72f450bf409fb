#include "tle/schema.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tle/errors.hpp"

namespace tle {

void LabelSchema::validate() const {
    if (descriptors.empty() || magnitudes.empty() || pitches.empty())
        throw ValidationError("schema: descriptor, magnitude, and pitch lists must all be non-empty");

    auto check_unique = [](const std::vector<std::string>& names, const char* what) {
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (n.empty())
                throw ValidationError(std::string("schema: empty ") + what + " name");
            if (!seen.insert(n).second)
                throw ValidationError(std::string("schema: duplicate ") + what + " '" + n + "'");
        }
    };
    check_unique(descriptors, "descriptor");
    check_unique(pitches, "pitch");

    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        const double m = magnitudes[i];
        if (!(m > 0.0) || !(m <= 1.0) || !std::isfinite(m))
            throw ValidationError("schema: magnitude levels must lie in (0,1]");
        if (i > 0 && !(m > magnitudes[i - 1]))
            throw ValidationError("schema: magnitude levels must be strictly increasing");
    }
}

std::optional<int> LabelSchema::descriptor_index(const std::string& name) const {
    auto it = std::find(descriptors.begin(), descriptors.end(), name);
    if (it == descriptors.end()) return std::nullopt;
    return static_cast<int>(it - descriptors.begin());
}

std::optional<int> LabelSchema::pitch_index(const std::string& name) const {
    auto it = std::find(pitches.begin(), pitches.end(), name);
    if (it == pitches.end()) return std::nullopt;
    return static_cast<int>(it - pitches.begin());
}

long LabelSchema::magnitude_percent(int magnitude_id) const {
    return std::lround(magnitudes.at(static_cast<std::size_t>(magnitude_id)) * 100.0);
}

std::optional<int> LabelSchema::magnitude_index_by_percent(long percent) const {
    std::optional<int> found;
    for (std::size_t i = 0; i < magnitudes.size(); ++i) {
        if (std::lround(magnitudes[i] * 100.0) == percent) {
            if (found)
                throw ValidationError("schema: two magnitude levels collide at percent resolution");
            found = static_cast<int>(i);
        }
    }
    return found;
}

const LabelSchema& default_schema() {
    static const LabelSchema schema = [] {
        LabelSchema s;
        s.descriptors = {
            "aggressive", "bright", "crunchy", "dark",   "fuzzy",  "harsh",
            "hollow",     "metallic", "muddy", "nasal",  "punchy", "resonant",
            "rich",       "sharp",  "smooth",  "thick",  "thin",   "warm",
            "wobbly",
        };
        s.magnitudes = {0.25, 0.50, 0.75, 1.00};
        s.pitches = {
            "E4", "F4", "F#4", "G4", "G#4", "A4", "A#4", "B4",
            "C5", "C#5", "D5", "D#5", "E5", "F5", "F#5", "G5", "G#5", "A5", "A#5", "B5",
            "C6", "C#6", "D6",
        };
        s.validate();
        return s;
    }();
    return schema;
}

} // namespace tle
