#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

// Deterministic random machinery. The generator is the standard 64-bit
// Mersenne Twister (std::mt19937_64), whose raw integer stream is fixed by
// the C++ standard and therefore identical on every platform. All
// conversions to doubles are written out here rather than taken from
// <random> distributions, because the standard library distributions are
// implementation-defined and would break seed-for-seed reproducibility
// across toolchains.
//
// Conversions:
//   uniform01      u = (x >> 11) * 2^-53, in [0,1)
//   gaussian       Box-Muller: sqrt(-2 ln(1-u1)) * cos(2*pi*u2),
//                  exactly two engine draws per deviate
//   uniform_index  floor(u * n), clamped to n-1
//   weighted_index cumulative-sum walk against u * total

namespace tle::rng {

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Derive a decorrelated stream seed (SplitMix64 finalizer).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double uniform01(Engine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

inline double gaussian(Engine& eng) {
    const double u1 = uniform01(eng);
    const double u2 = uniform01(eng);
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
}

inline std::size_t uniform_index(Engine& eng, std::size_t n) {
    auto idx = static_cast<std::size_t>(uniform01(eng) * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

/// Index drawn with probability weights[i] / sum(weights). Returns npos when
/// the total weight is not positive; the caller decides the fallback.
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline std::size_t weighted_index(Engine& eng, std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) return npos;
    const double target = uniform01(eng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (target < acc) return i;
    }
    // Rounding can push the target past the last positive weight.
    for (std::size_t i = weights.size(); i-- > 0;)
        if (weights[i] > 0.0) return i;
    return npos;
}

inline std::vector<double> gaussian_vector(Engine& eng, std::size_t dim) {
    std::vector<double> v(dim);
    for (auto& x : v) x = gaussian(eng);
    return v;
}

/// Uniform direction on the unit sphere via a normalized Gaussian draw.
inline std::vector<double> unit_vector(Engine& eng, std::size_t dim) {
    std::vector<double> v = gaussian_vector(eng, dim);
    double norm2 = 0.0;
    for (double x : v) norm2 += x * x;
    if (norm2 < 1e-300) {  // astronomically unlikely; keep deterministic anyway
        v.assign(dim, 0.0);
        v[0] = 1.0;
        return v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
    return v;
}

} // namespace tle::rng
