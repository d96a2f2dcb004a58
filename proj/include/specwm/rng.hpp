#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace specwm {

// All simulation randomness comes from std::mt19937_64, whose output stream
// is pinned by the C++ standard. The standard *distributions* are not pinned,
// so uniforms, bounded ints and shuffles are built by hand below.
using Rng = std::mt19937_64;

// Map a 64-bit word to [0, 1) using the top 53 bits.
inline double unit_double(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

template <class Urbg>
double next_unit(Urbg& g) {
    return unit_double(static_cast<std::uint64_t>(g()));
}

// Unbiased draw from {0, ..., bound-1} by rejection. bound must be >= 1.
template <class Urbg>
std::uint64_t next_below(Urbg& g, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = static_cast<std::uint64_t>(g());
        if (x >= threshold) {
            return x % bound;
        }
    }
}

// Fisher-Yates shuffle on top of next_below.
template <class Urbg, class T>
void shuffle_inplace(std::vector<T>& v, Urbg& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[next_below(g, i)]);
    }
}

// splitmix64 finalizer; used to spread user seeds before feeding mt19937_64.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace specwm
