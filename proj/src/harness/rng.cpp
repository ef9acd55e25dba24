#include "forge/harness.hpp"

namespace forge {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t SplitMix64::next() {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) { return next() % n; }

double SplitMix64::unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

SplitMix64 row_rng(std::uint64_t seed, std::uint64_t row) {
    return SplitMix64(mix64(seed ^ mix64(row + 1)));
}

WeightedFunction random_subset(const GroupSpec& g, double delta, SplitMix64& rng) {
    const std::uint64_t cut =
        delta >= 1.0 ? (1ull << 53)
                     : static_cast<std::uint64_t>(delta * 9007199254740992.0);
    std::vector<std::int64_t> counts(g.size(), 0);
    for (Elem x = 0; x < g.size(); ++x) {
        counts[x] = (rng.next() >> 11) < cut ? 1 : 0;
    }
    return WeightedFunction(g, std::move(counts));
}

}  // namespace forge
