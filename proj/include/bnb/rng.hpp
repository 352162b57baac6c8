#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace bnb {

using Rng = std::mt19937_64;

// Seed derivation. Every draw below is written out by hand rather than via
// <random> distributions so sequences do not depend on the standard library.

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0)
{
    return splitmix64(splitmix64(splitmix64(base) ^ a) ^ b);
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Uniform integer in [0, n).
inline std::size_t uniform_index(std::size_t n, Rng& rng)
{
    const unsigned __int128 wide = static_cast<unsigned __int128>(rng()) * n;
    return static_cast<std::size_t>(wide >> 64);
}

// Index k drawn with probability probs[k]; probs must sum to ~1.
inline std::size_t sample_categorical(std::span<const double> probs, Rng& rng)
{
    double u = uniform01(rng);
    for (std::size_t k = 0; k + 1 < probs.size(); ++k) {
        if (u < probs[k]) {
            return k;
        }
        u -= probs[k];
    }
    return probs.size() - 1;
}

// Draw from the flat Dirichlet Dir(1, ..., 1) into `out`.
inline void sample_flat_dirichlet(std::span<double> out, Rng& rng)
{
    double total = 0.0;
    for (double& v : out) {
        v = -std::log1p(-uniform01(rng));
        total += v;
    }
    for (double& v : out) {
        v /= total;
    }
}

} // namespace bnb
