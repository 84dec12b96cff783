#pragma once

#include <cstdint>
#include <random>

namespace hyperdm {

// Deterministic random source. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the sampling helpers below are
// implemented here so that results never depend on the standard library's
// distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [lo, hi], inclusive, via rejection sampling.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t range = static_cast<uint64_t>(hi) - static_cast<uint64_t>(lo) + 1;
        if (range == 0) return static_cast<int64_t>(engine_());
        uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return lo + static_cast<int64_t>(x % range);
    }

    bool bernoulli(double p) { return uniform01() < p; }

    // Uniform in [-bound, bound].
    double uniform_symmetric(double bound) { return (2.0 * uniform01() - 1.0) * bound; }

private:
    std::mt19937_64 engine_;
};

// Stable substream derivation (splitmix64 finalizer). Used to fan a single
// global seed out to labeled streams so components can be re-run in
// isolation.
inline uint64_t derive_seed(uint64_t seed, uint64_t stream) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Labels for the toolkit's top-level substreams.
enum class Stream : uint64_t {
    Generation = 1,
    Exploration = 2,
    Validation = 3,
    Sir = 4,
    Init = 5,
    Dismantle = 6,
};

inline uint64_t derive_seed(uint64_t seed, Stream s) {
    return derive_seed(seed, static_cast<uint64_t>(s));
}

}  // namespace hyperdm
