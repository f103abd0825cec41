#pragma once

#include <cassert>
#include <cstdint>
#include <random>

namespace wealthsim {

// SplitMix64 finalizer. Bijective on uint64, used to decorrelate seeds.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Seed for (stream, substream) under a master seed. In this project stream is
// the sweep-grid index and substream the realization index. For a fixed master
// seed the map is injective as long as stream and substream fit in 32 bits:
// the packed word is unique per pair and splitmix64_mix is a bijection.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::uint32_t stream,
                                 std::uint32_t substream) {
    const std::uint64_t packed =
        (static_cast<std::uint64_t>(stream) << 32) | substream;
    return splitmix64_mix(master_seed) ^
           splitmix64_mix(0x9E3779B97F4A7C15ULL ^ packed);
}

// Deterministic random stream: mt19937_64 engine (bit-reproducible across
// standard libraries) with hand-rolled mappings to bounded ints and doubles,
// because the std::*_distribution adapters are not portable.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound). Lemire's multiply-shift with rejection,
    // exactly uniform; consumes a variable (but seed-determined) number of
    // engine outputs.
    std::uint32_t uniform_index(std::uint32_t bound) {
        assert(bound >= 1);
        std::uint64_t x = next_u64();
        unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t threshold = (0 - std::uint64_t{bound}) % bound;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<unsigned __int128>(x) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 64);
    }

private:
    std::mt19937_64 engine_;
};

// Random unordered pair of distinct indices in [0, n). The second draw picks
// among the n-1 remaining agents, so every unordered pair has probability
// 2/(n(n-1)) and each trade consumes exactly two bounded draws.
inline std::pair<std::uint32_t, std::uint32_t> sample_pair(RandomStream& rng,
                                                           std::uint32_t n) {
    assert(n >= 2);
    const std::uint32_t i = rng.uniform_index(n);
    std::uint32_t j = rng.uniform_index(n - 1);
    if (j >= i) ++j;
    return {i, j};
}

}  // namespace wealthsim
