#pragma once

#include <cstdint>

namespace fgt {

/// Seed of one Monte Carlo trial: (base_seed, stream_index) fully determines
/// every random draw of the trial, independent of worker scheduling.
struct SampleSeed {
    uint64_t base_seed = 0;
    uint64_t stream_index = 0;
};

namespace rng {

// SplitMix64 finalizer; full 64-bit avalanche.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline double to_unit(uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

// Draw domains keep point, flat, and sampling-position counters disjoint.
constexpr uint64_t kDomainPoint = 0;
constexpr uint64_t kDomainFlat = uint64_t(1) << 32;
constexpr uint64_t kDomainShuffle = uint64_t(1) << 33;

}  // namespace rng

/// Counter-based generator: the draw at a counter is a pure function of
/// (base_seed, stream_index, counter), so trials are reproducible and
/// coupled across theta (one uniform per object, thresholded at theta).
class TrialRng {
public:
    explicit TrialRng(SampleSeed seed)
        : state_(rng::mix64(rng::mix64(seed.base_seed) ^ seed.stream_index)) {}

    uint64_t bits(uint64_t counter) const { return rng::mix64(state_ ^ counter); }
    double uniform(uint64_t counter) const { return rng::to_unit(bits(counter)); }

private:
    uint64_t state_;
};

}  // namespace fgt
