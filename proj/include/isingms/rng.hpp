#pragma once

#include <cstdint>
#include <random>

namespace isingms {

// Deterministic RNG wrapper. Uniform doubles and bounded integers are drawn
// with explicit bit manipulation so that identical seeds give identical
// streams independent of the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        for (;;) {
            const std::uint64_t r = eng_();
            if (r < limit) return r % n;
        }
    }

    bool coin() { return (eng_() & 1u) != 0; }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

// splitmix64 step; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace isingms
