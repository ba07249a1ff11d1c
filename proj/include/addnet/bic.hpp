#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "addnet/bcc.hpp"
#include "addnet/rng.hpp"

namespace addnet {

// Randomized bounded-information code layered over a shared BCC base: the
// codeword is k' blocks, each independently carrying the base codeword with
// probability 1/2 (and zeros otherwise), so that the same value sent by
// several nodes survives XOR cancellation in some block w.h.p.
struct BicCode {
    std::shared_ptr<const BccCode> base;
    uint32_t num_blocks = 0;  // k'
    std::size_t block_len = 0;
    std::size_t total_len = 0;

    static BicCode make(std::shared_ptr<const BccCode> base, uint32_t num_blocks);

    // k' = ceil(c * log2(n)); the paper's constant c defaults to 4 and may be
    // lowered only for stress tests.
    static uint32_t blocks_for(double c, uint64_t n);
};

using BicMask = std::vector<uint8_t>; // one flag per block

BicMask bic_fresh_mask(const BicCode& code, Rng& rng);

// Each call is an independent random instance over the shared base code.
BitVector bic_encode(const BicCode& code, uint64_t x, Rng& rng);
BitVector bic_encode_masked(const BicCode& code, uint64_t x, const BicMask& mask);

struct BicDecodeInfo {
    ValueSet values;          // union of successful per-block decodes
    uint32_t failed_blocks = 0;
    uint32_t max_block_values = 0;
};

// Union of per-block base decodes; failed blocks contribute nothing but are
// counted for overflow detection.
BicDecodeInfo bic_decode_full(const BicCode& code, const BitVector& received,
                              DecodeCache* cache = nullptr);
ValueSet bic_decode(const BicCode& code, const BitVector& received,
                    DecodeCache* cache = nullptr);

struct OverflowVerdict {
    bool detected = false;
    ValueSet values; // valid only when detected == false
};

// Information-overflow detection: the base code must support decoding bound
// 2K. Any block that fails to decode or decodes to more than K values flags
// the verdict; otherwise the union of block decodes is the exact sent set.
OverflowVerdict overflow_detect(const BicCode& code, const BitVector& received,
                                uint64_t K, DecodeCache* cache = nullptr);

// Fixed multi-field frame layout: disjoint contiguous fields, XOR of frames
// distributes field-by-field.
class MessageLayout {
public:
    struct Field {
        std::string name;
        std::size_t bits;
    };

    MessageLayout() = default;
    explicit MessageLayout(std::vector<Field> fields);

    std::size_t field_count() const { return fields_.size(); }
    std::size_t total_bits() const { return total_; }
    std::size_t offset(std::size_t i) const { return offsets_.at(i); }
    std::size_t width(std::size_t i) const { return fields_.at(i).bits; }
    const std::string& name(std::size_t i) const { return fields_.at(i).name; }
    std::size_t index_of(const std::string& name) const;

    BitVector blank() const { return BitVector(total_); }

    // Writes `content` into field i; throws on width overflow.
    void pack(BitVector& frame, std::size_t i, const BitVector& content) const;
    BitVector unpack(const BitVector& frame, std::size_t i) const;

private:
    std::vector<Field> fields_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ = 0;
};

} // namespace addnet
