#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

namespace addnet {

// Fixed-length bit string. The channel XORs these; all codec layers are
// built on top. Bit 0 is the lowest bit of word 0.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t bits)
        : size_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool is_zero() const {
        for (uint64_t w : words_)
            if (w) return false;
        return true;
    }

    bool get(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool v) {
        uint64_t mask = uint64_t(1) << (i & 63);
        if (v) words_[i >> 6] |= mask;
        else   words_[i >> 6] &= ~mask;
    }

    // Reads `len` bits (len <= 64) starting at bit `pos`.
    uint64_t get_bits(std::size_t pos, unsigned len) const;
    // Writes the low `len` bits of `val` at bit `pos`.
    void set_bits(std::size_t pos, unsigned len, uint64_t val);

    void xor_inplace(const BitVector& o);

    // XOR of o into the window [pos, pos+o.size()).
    void xor_window(std::size_t pos, const BitVector& o);

    BitVector slice(std::size_t pos, std::size_t len) const;

    bool operator==(const BitVector& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }
    bool operator!=(const BitVector& o) const { return !(*this == o); }
    bool operator<(const BitVector& o) const {
        if (size_ != o.size_) return size_ < o.size_;
        return words_ < o.words_;
    }

    uint64_t hash() const;

    std::string to_hex() const;
    static BitVector from_hex(const std::string& hex, std::size_t bits);

    const std::vector<uint64_t>& words() const { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<uint64_t> words_;
};

inline BitVector operator^(BitVector a, const BitVector& b) {
    a.xor_inplace(b);
    return a;
}

} // namespace addnet
