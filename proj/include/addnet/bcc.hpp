#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "addnet/bitvec.hpp"
#include "addnet/gf2k.hpp"

namespace addnet {

// Sorted set of decoded values.
using ValueSet = std::vector<uint64_t>;

// Decode outcome: nullopt means DecodeFailure. Failure is a value, not an
// error: it signals that more than `a` distinct codewords were XORed, which
// the overflow-detection layer turns into a verdict.
using DecodeResult = std::optional<ValueSet>;

// Deterministic bounded-contention code over value space [0, M): the XOR of
// any <= a distinct codewords decodes uniquely back to the value set.
//
// Construction: value x maps to the element alpha^x of GF(2^k) with
// 2^k - 1 >= M, and the codeword is the limb sequence
//   (alpha^x)^1, (alpha^x)^3, ..., (alpha^x)^(2a-1),
// i.e. a column of a parity-check matrix with minimum distance >= 2a+1.
class BccCode {
public:
    static constexpr std::size_t kDefaultBitCap = std::size_t(1) << 21;

    // Throws std::invalid_argument on M == 0 or when a*k exceeds the cap.
    static BccCode construct(uint64_t M, uint32_t a,
                             std::size_t max_codeword_bits = kDefaultBitCap);

    uint64_t value_space() const { return M_; }
    uint32_t bound() const { return a_; }
    int field_degree() const { return k_; }
    std::size_t codeword_bits() const { return m_; }
    uint64_t code_id() const { return id_; }

    BitVector encode(uint64_t x) const;

    // Algebraic decode: power-sum syndromes -> Berlekamp-Massey -> roots.
    // Roots are located by Chien search over the M valid positions when M is
    // small, and by trace-based factoring plus discrete logs for large M.
    DecodeResult decode(const BitVector& received) const;

    // Test oracle: exhaustive search for the unique subset of size <= bound
    // whose XOR equals `received`. Guarded by an enumeration cap; throws
    // std::invalid_argument when the search space exceeds it.
    DecodeResult decode_bruteforce(const BitVector& received, uint32_t bound,
                                   uint64_t enum_cap = uint64_t(1) << 22) const;

private:
    BccCode() = default;

    uint64_t M_ = 0;
    uint32_t a_ = 0;
    int k_ = 0;
    std::size_t m_ = 0;
    uint64_t id_ = 0;
    const Gf2k* gf_ = nullptr;
};

// Memo for block decodes, keyed by code identity and block content. Lives in
// the simulation layer so codec objects stay immutable and shareable.
class DecodeCache {
public:
    explicit DecodeCache(std::size_t max_entries = std::size_t(1) << 16)
        : cap_(max_entries) {}

    const DecodeResult* lookup(const BccCode& code, const BitVector& block) const;
    void insert(const BccCode& code, const BitVector& block, DecodeResult result);

    // Decode through the cache.
    DecodeResult decode(const BccCode& code, const BitVector& block);

    std::size_t size() const { return entries_; }

private:
    struct Slot {
        BitVector block;
        DecodeResult result;
    };
    std::unordered_map<uint64_t, std::vector<Slot>> map_;
    std::size_t cap_;
    std::size_t entries_ = 0;
};

} // namespace addnet
