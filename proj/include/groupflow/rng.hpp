#pragma once

// Seeded randomness helpers. Draws go through rng_below (plain rejection-free
// modulo on the raw 64-bit stream) instead of std::uniform_int_distribution,
// whose algorithm is implementation-defined; identical seeds must reproduce
// identical artifacts everywhere.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace groupflow {

using Rng = std::mt19937_64;

inline Rng seeded_rng(std::uint64_t seed) { return Rng(seed); }

inline std::uint64_t rng_below(Rng& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("rng_below: empty range");
    return rng() % n;
}

/// k distinct values from [0, n), in increasing order.
inline std::vector<int> rng_distinct(Rng& rng, int n, int k) {
    if (k > n) throw std::invalid_argument("rng_distinct: k > n");
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
        auto j = static_cast<std::size_t>(rng_below(rng, pool.size()));
        out.push_back(pool[j]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(j));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace groupflow
