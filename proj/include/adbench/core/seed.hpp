#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace adbench {

using Seed = std::uint64_t;

// SplitMix64 finalizer. Full-avalanche 64-bit mixing; the building block for
// the splittable seed tree below.
constexpr Seed mix64(Seed z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic child-seed derivation: a pure function of (master, path).
// The empty path is the identity, and distinct paths land on distinct seeds
// with overwhelming probability, so grid cells can draw independent streams
// without shared RNG state.
constexpr Seed derive_seed(Seed master, std::span<const std::uint64_t> path) noexcept {
    Seed h = master;
    for (std::uint64_t element : path)
        h = mix64(h ^ mix64(element + 0x632BE59BD9B4E019ULL));
    return h;
}

inline Seed derive_seed(Seed master, std::initializer_list<std::uint64_t> path) noexcept {
    return derive_seed(master, std::span<const std::uint64_t>(path.begin(), path.size()));
}

// Grid coordinates of one experiment cell under a master seed.
struct SeedPath {
    Seed master = 0;
    std::vector<std::uint64_t> path;

    Seed resolve() const noexcept { return derive_seed(master, path); }
};

} // namespace adbench
