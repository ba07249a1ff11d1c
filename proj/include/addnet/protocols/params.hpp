#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace addnet {

inline uint32_t ceil_log2(uint64_t n) {
    uint32_t k = 0;
    uint64_t v = 1;
    while (v < n) {
        v <<= 1;
        ++k;
    }
    return k;
}

// One record of the w.h.p. constants shared by the protocols. Defaults follow
// the analysis; every value can be overridden per run (CLI --params).
struct ProtocolParams {
    // BIC block-count constant: k' = ceil(c_bic * log2 N).
    double c_bic = 4.0;
    // Per-protocol BCC decoding bound default: a = ceil(a_mult * log2 N).
    double a_mult = 2.0;
    // Half-duplex subrounds per full-duplex round: ceil(beta * log2 n).
    double beta = 8.0;
    // Presence-detection field width: lambda = ceil(lambda_mult * log2 n).
    double lambda_mult = 2.0;
    // Select-level clamps: r is clamped to r_cap = 3*ceil(log2 n)+1 and the
    // z-range to 2^min(8r, z_bits_cap) so the z codebook stays decodable.
    uint32_t z_bits_cap = 20;
    // Degree approximation: information bound K = c_deg * ceil(log2 N);
    // matrix sizes a = 40*ceil(log2 N), b = 2*ceil(log2 N); threshold 0.2*a.
    double c_deg = 4.0;
    double deg_threshold = 0.2;
    // MIS: marking probability 1/(2*c_mark*delta); S' filter at log2 N;
    // announcement-code bound ceil(4*c_deg*log2 N).
    double c_mark = 2.0;
    // Size approximation: convergecast code bound ceil(size_a_mult * log2 N).
    double size_a_mult = 4.0;
    // Max computation: tau = ceil(c_tau*log2 n / log2 log2 n); single-hop
    // transmit coefficient 4*c_tau*log2^2 n and code bound 32*c_tau*log2^2 n.
    double c_tau = 2.0;

    uint32_t r_cap(uint64_t n) const { return 3 * std::max<uint32_t>(ceil_log2(n), 1) + 1; }
    uint32_t z_bits(uint32_t r) const { return std::min<uint32_t>(8 * r, z_bits_cap); }
    uint64_t z_space() const { return (uint64_t(1) << z_bits_cap) + 1; }
    uint32_t bic_blocks(uint64_t N) const {
        return uint32_t(std::ceil(c_bic * std::max<double>(1.0, std::log2(double(N)))));
    }
    uint32_t bound_default(uint64_t N) const {
        return std::max<uint32_t>(4, uint32_t(std::ceil(a_mult * std::log2(double(std::max<uint64_t>(N, 2))))));
    }
    uint32_t lambda(uint64_t n) const {
        return std::max<uint32_t>(8, uint32_t(std::ceil(lambda_mult * std::log2(double(std::max<uint64_t>(n, 2))))));
    }
    uint32_t deg_K(uint64_t N) const { return uint32_t(c_deg * std::max<uint32_t>(ceil_log2(N), 1)); }
    uint32_t deg_a(uint64_t N) const { return 40 * std::max<uint32_t>(ceil_log2(N), 1); }
    uint32_t deg_b(uint64_t N) const { return std::max<uint32_t>(2, 2 * ceil_log2(N)); }
    uint32_t tau(uint64_t n) const {
        double lg = std::log2(double(std::max<uint64_t>(n, 4)));
        double lglg = std::log2(lg);
        return uint32_t(std::ceil(c_tau * lg / std::max(1.0, lglg)));
    }

    void set(const std::string& key, double value);
    static ProtocolParams from_overrides(const std::map<std::string, double>& kv);
    std::map<std::string, double> as_map() const;
};

} // namespace addnet
