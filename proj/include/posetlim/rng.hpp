#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace posetlim {

/// splitmix64 finalizer; used for seeding and for deriving substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ generator with explicit 64-bit seeding.
///
/// All randomness in the library flows through this type so results are
/// reproducible across platforms (the standard <random> distributions are
/// implementation defined and are deliberately not used).
///
/// Substreams: parallel loops derive one independent stream per work item
/// via `substream(seed, index)`; the derivation combines seed and stream
/// index before state expansion, so streams with distinct indices under a
/// common seed never share state.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            word = mix64(s);
        }
    }

    /// Seed of the substream `stream` under `seed`.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
        return mix64(seed ^ mix64(stream));
    }

    static Rng substream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(derive_seed(seed, stream));
    }

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

    /// Uniform double in [0, 1) with 53 random bits.
    double u01() { return double(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), n >= 1. Masked rejection, exactly uniform.
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t mask = ~std::uint64_t(0) >> countl_zero64(n - 1);
        std::uint64_t x;
        do {
            x = next() & mask;
        } while (x >= n);
        return x;
    }

    bool bernoulli(double p) { return u01() < p; }

    template <class RandomIt>
    void shuffle(RandomIt first, RandomIt last) {
        const auto n = static_cast<std::uint64_t>(last - first);
        for (std::uint64_t i = n; i > 1; --i) {
            std::swap(first[i - 1], first[below(i)]);
        }
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    static int countl_zero64(std::uint64_t x) {
        if (x == 0) return 64;
        return __builtin_clzll(x);
    }

    std::array<std::uint64_t, 4> state_{};
};

} // namespace posetlim
