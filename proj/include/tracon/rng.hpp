#ifndef TRACON_RNG_HPP
#define TRACON_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace tracon {

// Seeded randomness helpers. Everything here is fully specified by the
// standard (mt19937_64) or by the constants below, so a fixed seed gives the
// same stream on every platform.

/// FNV-1a over the bytes of a string. Stable across runs and platforms.
constexpr std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

/// SplitMix64 output function; the standard way to spread a counter into
/// independent-looking 64-bit seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Substream splitting rule: master seed XOR a stable hash of the label,
/// scrambled through splitmix64 so nearby master seeds give uncorrelated
/// engine states. Adding a labelled substream never perturbs any other
/// substream.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::string_view label) {
    return splitmix64(master ^ fnv1a64(label));
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi], each value exactly equiprobable (rejection).
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return lo + static_cast<std::int64_t>(draw % span);
}

}  // namespace tracon

#endif  // TRACON_RNG_HPP
