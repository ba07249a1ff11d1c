#include "addnet/bic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace addnet {

BicCode BicCode::make(std::shared_ptr<const BccCode> base, uint32_t num_blocks) {
    if (!base) throw std::invalid_argument("BicCode: null base");
    if (num_blocks == 0) throw std::invalid_argument("BicCode: zero blocks");
    BicCode c;
    c.block_len = base->codeword_bits();
    c.num_blocks = num_blocks;
    c.total_len = c.block_len * num_blocks;
    c.base = std::move(base);
    return c;
}

uint32_t BicCode::blocks_for(double c, uint64_t n) {
    double lg = std::log2(double(std::max<uint64_t>(n, 2)));
    return uint32_t(std::ceil(c * lg));
}

BicMask bic_fresh_mask(const BicCode& code, Rng& rng) {
    BicMask mask(code.num_blocks);
    for (auto& b : mask) b = rng.coin() ? 1 : 0;
    return mask;
}

BitVector bic_encode_masked(const BicCode& code, uint64_t x, const BicMask& mask) {
    if (mask.size() != code.num_blocks)
        throw std::invalid_argument("bic_encode_masked: mask size");
    BitVector out(code.total_len);
    BitVector cw = code.base->encode(x);
    for (uint32_t i = 0; i < code.num_blocks; ++i)
        if (mask[i]) out.xor_window(std::size_t(i) * code.block_len, cw);
    return out;
}

BitVector bic_encode(const BicCode& code, uint64_t x, Rng& rng) {
    return bic_encode_masked(code, x, bic_fresh_mask(code, rng));
}

BicDecodeInfo bic_decode_full(const BicCode& code, const BitVector& received,
                              DecodeCache* cache) {
    if (received.size() != code.total_len)
        throw std::invalid_argument("bic_decode: width mismatch");
    BicDecodeInfo info;
    for (uint32_t i = 0; i < code.num_blocks; ++i) {
        BitVector block = received.slice(std::size_t(i) * code.block_len, code.block_len);
        if (block.is_zero()) continue;
        DecodeResult r = cache ? cache->decode(*code.base, block)
                               : code.base->decode(block);
        if (!r) {
            ++info.failed_blocks;
            continue;
        }
        info.max_block_values = std::max<uint32_t>(info.max_block_values,
                                                   uint32_t(r->size()));
        ValueSet merged;
        merged.reserve(info.values.size() + r->size());
        std::set_union(info.values.begin(), info.values.end(), r->begin(), r->end(),
                       std::back_inserter(merged));
        info.values = std::move(merged);
    }
    return info;
}

ValueSet bic_decode(const BicCode& code, const BitVector& received, DecodeCache* cache) {
    return bic_decode_full(code, received, cache).values;
}

OverflowVerdict overflow_detect(const BicCode& code, const BitVector& received,
                                uint64_t K, DecodeCache* cache) {
    if (received.size() != code.total_len)
        throw std::invalid_argument("overflow_detect: width mismatch");
    if (code.base->bound() < 2 * K)
        throw std::invalid_argument("overflow_detect: base bound below 2K");
    OverflowVerdict v;
    for (uint32_t i = 0; i < code.num_blocks; ++i) {
        BitVector block = received.slice(std::size_t(i) * code.block_len, code.block_len);
        if (block.is_zero()) continue;
        DecodeResult r = cache ? cache->decode(*code.base, block)
                               : code.base->decode(block);
        if (!r || r->size() > K) {
            v.detected = true;
            v.values.clear();
            return v;
        }
        ValueSet merged;
        merged.reserve(v.values.size() + r->size());
        std::set_union(v.values.begin(), v.values.end(), r->begin(), r->end(),
                       std::back_inserter(merged));
        v.values = std::move(merged);
    }
    return v;
}

MessageLayout::MessageLayout(std::vector<Field> fields) : fields_(std::move(fields)) {
    std::size_t off = 0;
    offsets_.reserve(fields_.size());
    for (const Field& f : fields_) {
        offsets_.push_back(off);
        off += f.bits;
    }
    total_ = off;
}

std::size_t MessageLayout::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < fields_.size(); ++i)
        if (fields_[i].name == name) return i;
    throw std::invalid_argument("MessageLayout: unknown field " + name);
}

void MessageLayout::pack(BitVector& frame, std::size_t i, const BitVector& content) const {
    if (frame.size() != total_)
        throw std::invalid_argument("MessageLayout::pack: frame width");
    if (content.size() > fields_.at(i).bits)
        throw std::invalid_argument("MessageLayout::pack: field width overflow");
    frame.xor_window(offsets_[i], content);
}

BitVector MessageLayout::unpack(const BitVector& frame, std::size_t i) const {
    if (frame.size() != total_)
        throw std::invalid_argument("MessageLayout::unpack: frame width");
    return frame.slice(offsets_[i], fields_.at(i).bits);
}

} // namespace addnet
