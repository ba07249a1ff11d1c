#include "addnet/gf2k.hpp"

#include <array>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace addnet {

namespace {

// Primitive polynomials over GF(2), degree 1..30 (bit k is the leading term).
constexpr std::array<uint32_t, 31> kPrimPoly = {
    0,          // unused
    0x3,        // x + 1
    0x7,        // x^2 + x + 1
    0xB,        // x^3 + x + 1
    0x13,       // x^4 + x + 1
    0x25,       // x^5 + x^2 + 1
    0x43,       // x^6 + x + 1
    0x89,       // x^7 + x^3 + 1
    0x11D,      // x^8 + x^4 + x^3 + x^2 + 1
    0x211,      // x^9 + x^4 + 1
    0x409,      // x^10 + x^3 + 1
    0x805,      // x^11 + x^2 + 1
    0x1053,     // x^12 + x^6 + x^4 + x + 1
    0x201B,     // x^13 + x^4 + x^3 + x + 1
    0x4443,     // x^14 + x^10 + x^6 + x + 1
    0x8003,     // x^15 + x + 1
    0x1100B,    // x^16 + x^12 + x^3 + x + 1
    0x20009,    // x^17 + x^3 + 1
    0x40081,    // x^18 + x^7 + 1
    0x80027,    // x^19 + x^5 + x^2 + x + 1
    0x100009,   // x^20 + x^3 + 1
    0x200005,   // x^21 + x^2 + 1
    0x400003,   // x^22 + x + 1
    0x800021,   // x^23 + x^5 + 1
    0x1000087,  // x^24 + x^7 + x^2 + x + 1
    0x2000009,  // x^25 + x^3 + 1
    0x4000047,  // x^26 + x^6 + x^2 + x + 1
    0x8000027,  // x^27 + x^5 + x^2 + x + 1
    0x10000009, // x^28 + x^3 + 1
    0x20000005, // x^29 + x^2 + 1
    0x40800007, // x^30 + x^23 + x^2 + x + 1
};

std::vector<std::pair<uint32_t, int>> prime_power_factors(uint32_t n) {
    std::vector<std::pair<uint32_t, int>> out;
    for (uint32_t d = 3; d <= 65535 && uint64_t(d) * d <= n; d += 2) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            out.emplace_back(d, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1); // no factor <= 2^16 => prime (n < 2^32)
    return out;
}

} // namespace

struct Gf2k::BsgsTable {
    uint32_t q = 0;          // subgroup prime order
    uint32_t m = 0;          // baby count, ceil(sqrt(q))
    uint32_t gamma = 0;      // subgroup generator, order q
    uint32_t giant = 0;      // gamma^-m
    std::unordered_map<uint32_t, uint32_t> baby; // gamma^j -> j
};

Gf2k::Gf2k(int k) : k_(k) {
    if (k < 1 || k > 30) throw std::invalid_argument("Gf2k: k out of range [1,30]");
    poly_ = kPrimPoly[size_t(k)];
    order_ = (k == 32) ? ~0u : ((uint32_t(1) << k) - 1);

    auto pp = prime_power_factors(order_);
    for (auto& [q, e] : pp) factors_.push_back(q);

    if (k <= GF_TABLE_MAX_K) {
        exp_.resize(order_);
        log_.assign(size_t(order_) + 1, 0);
        uint32_t x = 1;
        for (uint32_t i = 0; i < order_; ++i) {
            exp_[i] = x;
            log_[x] = i;
            x = mul_soft(x, 2u);
        }
        if (x != 1) throw std::logic_error("Gf2k: generator order check failed");
    } else {
        // Verify alpha really generates the multiplicative group.
        if (pow(2u, order_) != 1) throw std::logic_error("Gf2k: alpha^order != 1");
        for (uint32_t q : factors_)
            if (pow(2u, order_ / q) == 1)
                throw std::logic_error("Gf2k: alpha order divides a proper factor");
        for (auto& [q, e] : pp) {
            auto t = std::make_unique<BsgsTable>();
            t->q = q;
            t->gamma = pow(2u, order_ / q);
            uint32_t m = 1;
            while (uint64_t(m) * m < q) ++m;
            t->m = m;
            uint32_t cur = 1;
            t->baby.reserve(m * 2);
            for (uint32_t j = 0; j < m; ++j) {
                t->baby.emplace(cur, j);
                cur = mul(cur, t->gamma);
            }
            t->giant = inv(pow(t->gamma, m));
            bsgs_.push_back(std::move(t));
        }
    }
}

uint32_t Gf2k::mul_soft(uint32_t a, uint32_t b) const {
    uint64_t acc = 0;
    uint64_t aa = a;
    while (b) {
        if (b & 1) acc ^= aa;
        aa <<= 1;
        b >>= 1;
    }
    // Reduce modulo the field polynomial.
    for (int bit = 2 * k_ - 2; bit >= k_; --bit)
        if ((acc >> bit) & 1) acc ^= uint64_t(poly_) << (bit - k_);
    return uint32_t(acc);
}

uint32_t Gf2k::pow(uint32_t a, uint64_t e) const {
    if (a == 0) return e == 0 ? 1u : 0u;
    e %= order_;
    uint32_t result = 1, base = a;
    while (e) {
        if (e & 1) result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

uint32_t Gf2k::inv(uint32_t a) const {
    if (a == 0) throw std::domain_error("Gf2k::inv(0)");
    if (!log_.empty()) return exp_[(order_ - log_[a]) % order_];
    return pow(a, order_ - 1); // a^(2^k - 2)
}

uint32_t Gf2k::dlog(uint32_t a) const {
    if (a == 0) throw std::domain_error("Gf2k::dlog(0)");
    if (!log_.empty()) return log_[a];
    return dlog_ph(a);
}

uint32_t Gf2k::dlog_ph(uint32_t a) const {
    auto pp = prime_power_factors(order_);
    // Solve x mod q^e per component, then CRT.
    uint64_t x = 0, modulus = 1;
    for (size_t idx = 0; idx < pp.size(); ++idx) {
        auto [q, e] = pp[idx];
        const BsgsTable& tab = *bsgs_[idx];
        uint64_t qe = 1;
        for (int i = 0; i < e; ++i) qe *= q;
        uint32_t gi = pow(2u, order_ / qe);      // order q^e
        uint32_t ai = pow(a, order_ / qe);
        uint64_t xi = 0, qj = 1;
        for (int j = 0; j < e; ++j) {
            // Peel digit j: h has order dividing q.
            uint32_t h = mul(ai, inv(pow(gi, xi)));
            h = pow(h, qe / (qj * q));
            // BSGS for h = gamma^d in the order-q subgroup.
            uint64_t d = 0;
            bool found = false;
            uint32_t y = h;
            for (uint32_t giant = 0; giant * uint64_t(tab.m) <= tab.q; ++giant) {
                auto it = tab.baby.find(y);
                if (it != tab.baby.end()) {
                    d = uint64_t(giant) * tab.m + it->second;
                    found = true;
                    break;
                }
                y = mul(y, tab.giant);
            }
            if (!found) throw std::logic_error("Gf2k::dlog: BSGS miss");
            xi += (d % q) * qj;
            qj *= q;
        }
        // CRT: combine x (mod modulus) with xi (mod qe).
        if (modulus == 1) {
            x = xi;
            modulus = qe;
        } else {
            // Find t with x + modulus*t == xi (mod qe).
            uint64_t mm = modulus % qe;
            // Modular inverse of mm mod qe by extended Euclid.
            int64_t t0 = 0, t1 = 1;
            int64_t r0 = int64_t(qe), r1 = int64_t(mm);
            while (r1 != 0) {
                int64_t qq = r0 / r1;
                int64_t tmp = r0 - qq * r1; r0 = r1; r1 = tmp;
                tmp = t0 - qq * t1; t0 = t1; t1 = tmp;
            }
            if (r0 != 1) throw std::logic_error("Gf2k::dlog: CRT moduli not coprime");
            uint64_t inv_mm = uint64_t((t0 % int64_t(qe) + int64_t(qe)) % int64_t(qe));
            uint64_t diff = (xi + qe - x % qe) % qe;
            uint64_t t = (unsigned __int128)(diff) * inv_mm % qe;
            x = x + modulus * t;
            modulus *= qe;
        }
    }
    return uint32_t(x % order_);
}

const Gf2k& Gf2k::get(int k) {
    static std::mutex mu;
    static std::array<std::unique_ptr<Gf2k>, 31> cache;
    std::lock_guard<std::mutex> lock(mu);
    if (k < 1 || k > 30) throw std::invalid_argument("Gf2k::get: k out of range");
    if (!cache[size_t(k)]) cache[size_t(k)] = std::make_unique<Gf2k>(k);
    return *cache[size_t(k)];
}

} // namespace addnet
