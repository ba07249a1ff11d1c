#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace addnet {

// GF(2^k) in polynomial basis, 1 <= k <= 30. Elements are uint32_t with the
// low k bits in use. Fields with k <= GF_TABLE_MAX_K carry full log/antilog
// tables; larger fields multiply by carryless shift-reduce and take discrete
// logs via Pohlig-Hellman (the group order 2^k - 1 factors into small primes
// for every k in range).
class Gf2k {
public:
    static constexpr int GF_TABLE_MAX_K = 21;

    explicit Gf2k(int k);

    int k() const { return k_; }
    uint32_t order() const { return order_; } // 2^k - 1
    uint32_t generator() const { return 2u; } // alpha = x

    static uint32_t add(uint32_t a, uint32_t b) { return a ^ b; }

    uint32_t mul(uint32_t a, uint32_t b) const {
        if (!a || !b) return 0;
        if (!log_.empty()) {
            uint64_t s = uint64_t(log_[a]) + log_[b];
            if (s >= order_) s -= order_;
            return exp_[s];
        }
        return mul_soft(a, b);
    }

    uint32_t sqr(uint32_t a) const { return mul(a, a); }

    uint32_t pow(uint32_t a, uint64_t e) const;
    uint32_t inv(uint32_t a) const;

    // alpha^e for e in [0, order).
    uint32_t exp(uint64_t e) const {
        e %= order_;
        if (!exp_.empty()) return exp_[e];
        return pow(2u, e);
    }

    // e with alpha^e == a; a must be nonzero.
    uint32_t dlog(uint32_t a) const;

    const std::vector<uint32_t>& order_factors() const { return factors_; }

    // Shared immutable instance per k.
    static const Gf2k& get(int k);

private:
    uint32_t mul_soft(uint32_t a, uint32_t b) const;
    uint32_t dlog_ph(uint32_t a) const;

    int k_;
    uint32_t order_;
    uint32_t poly_;           // primitive polynomial, bit k set
    std::vector<uint32_t> exp_;
    std::vector<uint32_t> log_;
    std::vector<uint32_t> factors_; // distinct prime factors of order_

    // Baby-step tables for Pohlig-Hellman, one per prime factor.
    struct BsgsTable;
    std::vector<std::unique_ptr<BsgsTable>> bsgs_;
};

} // namespace addnet
