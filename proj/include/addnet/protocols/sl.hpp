#pragma once

#include <cstdint>

#include "addnet/rng.hpp"

namespace addnet {

// Select-level draw: a geometric primary level and a uniform secondary tag.
// No communication involved. r_raw is the unclamped geometric draw; r is
// clamped to r_cap for the wire, and the z-range to 2^min(8r, z_bits_cap) so
// the tag fits a fixed codebook.
struct SlDraw {
    uint32_t r = 1;     // clamped level, >= 1
    uint32_t r_raw = 1; // P(r_raw = j) = 2^-j
    uint64_t z = 1;     // uniform in [1, 2^min(8r, z_bits_cap)]

    bool beats(const SlDraw& o) const {
        if (r != o.r) return r > o.r;
        return z > o.z;
    }
};

SlDraw sl_draw(Rng& rng, uint32_t r_cap = 64, uint32_t z_bits_cap = 20);

} // namespace addnet
