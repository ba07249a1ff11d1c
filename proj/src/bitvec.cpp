#include "addnet/bitvec.hpp"

#include <stdexcept>

namespace addnet {

uint64_t BitVector::get_bits(std::size_t pos, unsigned len) const {
    if (len == 0) return 0;
    if (pos + len > size_) throw std::out_of_range("BitVector::get_bits");
    std::size_t w = pos >> 6;
    unsigned off = pos & 63;
    uint64_t v = words_[w] >> off;
    if (off + len > 64) v |= words_[w + 1] << (64 - off);
    if (len < 64) v &= (uint64_t(1) << len) - 1;
    return v;
}

void BitVector::set_bits(std::size_t pos, unsigned len, uint64_t val) {
    if (len == 0) return;
    if (pos + len > size_) throw std::out_of_range("BitVector::set_bits");
    if (len < 64) val &= (uint64_t(1) << len) - 1;
    std::size_t w = pos >> 6;
    unsigned off = pos & 63;
    uint64_t lo_mask = (len < 64 ? ((uint64_t(1) << len) - 1) : ~uint64_t(0)) << off;
    words_[w] = (words_[w] & ~lo_mask) | (val << off);
    if (off + len > 64) {
        unsigned hi = off + len - 64;
        uint64_t hi_mask = (uint64_t(1) << hi) - 1;
        words_[w + 1] = (words_[w + 1] & ~hi_mask) | (val >> (64 - off));
    }
}

void BitVector::xor_inplace(const BitVector& o) {
    if (o.size_ != size_) throw std::invalid_argument("BitVector xor: width mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= o.words_[i];
}

void BitVector::xor_window(std::size_t pos, const BitVector& o) {
    if (pos + o.size_ > size_) throw std::out_of_range("BitVector::xor_window");
    // Word-aligned fast path.
    if ((pos & 63) == 0) {
        std::size_t w = pos >> 6;
        for (std::size_t i = 0; i < o.words_.size(); ++i) words_[w + i] ^= o.words_[i];
        return;
    }
    std::size_t done = 0;
    while (done < o.size_) {
        unsigned chunk = unsigned(std::min<std::size_t>(64, o.size_ - done));
        set_bits(pos + done, chunk, get_bits(pos + done, chunk) ^ o.get_bits(done, chunk));
        done += chunk;
    }
}

BitVector BitVector::slice(std::size_t pos, std::size_t len) const {
    if (pos + len > size_) throw std::out_of_range("BitVector::slice");
    BitVector out(len);
    std::size_t done = 0;
    while (done < len) {
        unsigned chunk = unsigned(std::min<std::size_t>(64, len - done));
        out.set_bits(done, chunk, get_bits(pos + done, chunk));
        done += chunk;
    }
    return out;
}

uint64_t BitVector::hash() const {
    uint64_t h = 0xcbf29ce484222325ull ^ (uint64_t(size_) * 0x100000001b3ull);
    for (uint64_t w : words_) {
        h ^= w;
        h *= 0x100000001b3ull;
        h ^= h >> 29;
    }
    return h;
}

std::string BitVector::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::size_t nibbles = (size_ + 3) / 4;
    std::string s(nibbles, '0');
    for (std::size_t i = 0; i < nibbles; ++i) {
        unsigned len = unsigned(std::min<std::size_t>(4, size_ - 4 * i));
        s[nibbles - 1 - i] = digits[get_bits(4 * i, len)];
    }
    return s;
}

BitVector BitVector::from_hex(const std::string& hex, std::size_t bits) {
    BitVector v(bits);
    std::size_t nibbles = (bits + 3) / 4;
    if (hex.size() != nibbles) throw std::invalid_argument("BitVector::from_hex: length");
    for (std::size_t i = 0; i < nibbles; ++i) {
        char c = hex[nibbles - 1 - i];
        unsigned d;
        if (c >= '0' && c <= '9') d = unsigned(c - '0');
        else if (c >= 'a' && c <= 'f') d = unsigned(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') d = unsigned(c - 'A' + 10);
        else throw std::invalid_argument("BitVector::from_hex: digit");
        unsigned len = unsigned(std::min<std::size_t>(4, bits - 4 * i));
        v.set_bits(4 * i, len, d);
    }
    return v;
}

} // namespace addnet
