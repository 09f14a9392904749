#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "adbench/core/seed.hpp"

namespace adbench {

// Deterministic random stream. mt19937_64 is pinned by the standard, and all
// variate transforms are written out here instead of using std::*_distribution,
// whose algorithms are implementation-defined. Same seed, same sequence.
class Rng {
public:
    explicit Rng(Seed seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n). n must be >= 1.
    std::size_t uniform_index(std::size_t n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t threshold = (0 - bound) % bound; // 2^64 mod n
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return static_cast<std::size_t>(r % bound);
        }
    }

    // Box-Muller without caching: consumes exactly two uniforms per call.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        shuffle(idx);
        return idx;
    }

    // k distinct indices from [0, n), in random order.
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx = permutation(n);
        idx.resize(k);
        return idx;
    }

    // Child stream for a sub-task (tree index, restart index, ...).
    Rng spawn(std::uint64_t key) { return Rng(derive_seed(next_u64(), {key})); }

private:
    std::mt19937_64 engine_;
};

} // namespace adbench
