#ifndef NOVARCH_RNG_HPP
#define NOVARCH_RNG_HPP

// Deterministic randomness helpers. Distribution sampling is implemented by
// hand (instead of <random> distributions) so that identical seeds produce
// identical streams on every standard library implementation.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

namespace novarch {

using RandomEngine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stable 64-bit string hash (FNV-1a); used to derive per-key noise streams.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(RandomEngine& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). n must be positive.
inline std::size_t uniform_index(RandomEngine& eng, std::size_t n) {
    auto idx = static_cast<std::size_t>(uniform01(eng) * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

// Standard normal deviate via Box-Muller; consumes exactly two draws.
inline double gaussian(RandomEngine& eng) {
    double u1 = 1.0 - uniform01(eng); // (0, 1]
    double u2 = uniform01(eng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

} // namespace novarch

#endif
