#pragma once

#include <cstdint>

namespace gchain {

// Counter-based deterministic generator: every draw is a pure function of
// (seed, stream, counter), so replicas can run in any order or in parallel
// and still produce identical results. No global state anywhere.
namespace rng {

inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline uint64_t derive(uint64_t seed, uint64_t stream) {
    return mix64(mix64(seed) ^ (0x6a09e667f3bcc909ull + stream * 0x9e3779b97f4a7c15ull));
}

}  // namespace rng

class Rng {
public:
    explicit Rng(uint64_t key) : key_(key) {}
    Rng(uint64_t seed, uint64_t stream) : key_(rng::derive(seed, stream)) {}

    uint64_t next_u64() { return rng::mix64(key_ ^ rng::mix64(counter_++)); }

    // Uniform in [0, 1) with 53-bit resolution; platform independent.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in {0, ..., n-1}.
    uint64_t next_below(uint64_t n) {
        // 64-bit multiply-shift; bias is negligible for the n used here.
        return static_cast<uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace gchain
