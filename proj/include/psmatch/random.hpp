#pragma once

#include <cstdint>
#include <random>

// Portable random helpers. std::mt19937_64 output is fixed by the standard;
// the distributions in <random> are not, so the conversions live here.
namespace psmatch::rng {

using Engine = std::mt19937_64;

/// Uniform on the open interval (0, 1) with 53 bits of resolution.
inline double uniform_open01(Engine& engine) {
    return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform integer in [0, bound) by rejection; bound must be positive.
inline std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw = engine();
    while (draw >= limit) draw = engine();
    return draw % bound;
}

/// SplitMix64 finalizer; used to derive independent per-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace psmatch::rng
