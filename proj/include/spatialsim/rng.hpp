#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace spatialsim {

// All randomness in the project flows through this generator so that datasets
// and training runs are reproducible from a single 64-bit seed, independent of
// the platform's std::uniform_* implementations.
//
// Core generator: xoshiro256++ seeded through a splitmix64 chain. Substreams
// for sample i of a dataset are derived as Rng(mix(stream_seed ^ i)), which
// keeps per-sample generation order-independent and parallelizable.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// One-shot avalanche of a 64-bit value (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) word = splitmix64(s);
    }

    // xoshiro256++
    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in [0, 1), 53 usable bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    // Uniform integer in [0, n). Multiply-high mapping, deterministic across
    // platforms (no rejection loop).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * n) >> 64);
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> state_;
};

// Derives the seed of a named part (train/valid/test/...) of a dataset bundle.
inline std::uint64_t part_seed(std::uint64_t seed, std::uint64_t part_tag) {
    return mix64(seed ^ (0xA0761D6478BD642Full * (part_tag + 1)));
}

// Substream for sample i of a part: the "seed xor i" convention.
inline Rng sample_rng(std::uint64_t part_seed_value, std::uint64_t sample_index) {
    return Rng(mix64(part_seed_value ^ sample_index));
}

}  // namespace spatialsim
