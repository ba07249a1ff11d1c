#include "addnet/protocols/sl.hpp"

#include <algorithm>

namespace addnet {

SlDraw sl_draw(Rng& rng, uint32_t r_cap, uint32_t z_bits_cap) {
    SlDraw d;
    d.r_raw = rng.geometric_level();
    d.r = std::min(d.r_raw, r_cap);
    uint32_t bits = std::min(8 * d.r, z_bits_cap);
    d.z = rng.below(uint64_t(1) << bits) + 1;
    return d;
}

} // namespace addnet
