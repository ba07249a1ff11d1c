#pragma once

#include <cstdint>

namespace addnet {

// Deterministic counter-splittable generator (SplitMix64 core). One master
// seed fans out into independent per-node, per-round streams so that a
// protocol draw never depends on scheduling order.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) { next_u64(); }

    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 0x632be59bd9b4e019ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Stream for a (seed, node, round, tag) coordinate.
    static Rng at(uint64_t seed, uint64_t node, uint64_t round, uint64_t tag) {
        return Rng(mix(mix(mix(seed, node), round), tag));
    }

    Rng split(uint64_t tag) { return Rng(mix(next_u64(), tag)); }

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    bool coin() { return next_u64() & 1; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return double(next_u64() >> 11) * 0x1.0p-53 < p;
    }

    // Uniform in [0, n).
    uint64_t below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t lim = ~uint64_t(0) - ~uint64_t(0) % n;
        uint64_t v;
        do { v = next_u64(); } while (v >= lim);
        return v % n;
    }

    // Uniform in [lo, hi] inclusive.
    uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

    // Geometric level: P(r = j) = 2^-j for j >= 1.
    uint32_t geometric_level() {
        uint32_t r = 1;
        for (;;) {
            uint64_t w = next_u64();
            for (int i = 0; i < 64; ++i) {
                if ((w >> i) & 1) return r;
                ++r;
            }
        }
    }

private:
    uint64_t state_;
};

} // namespace addnet
