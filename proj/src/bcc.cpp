#include "addnet/bcc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

namespace addnet {

namespace {

std::atomic<uint64_t> g_next_code_id{1};

// Dense polynomials over GF(2^k), coeffs[i] is the z^i coefficient.
using Poly = std::vector<uint32_t>;

int degree(const Poly& p) {
    for (int i = int(p.size()) - 1; i >= 0; --i)
        if (p[size_t(i)]) return i;
    return -1;
}

void trim(Poly& p) { p.resize(size_t(degree(p) + 1)); }

// r = r mod d (d nonzero).
void poly_mod_inplace(const Gf2k& gf, Poly& r, const Poly& d) {
    int dd = degree(d);
    uint32_t lead_inv = gf.inv(d[size_t(dd)]);
    for (int i = degree(r); i >= dd; i = degree(r)) {
        uint32_t c = gf.mul(r[size_t(i)], lead_inv);
        int shift = i - dd;
        for (int j = 0; j <= dd; ++j)
            r[size_t(j + shift)] ^= gf.mul(c, d[size_t(j)]);
    }
    trim(r);
}

Poly poly_gcd(const Gf2k& gf, Poly a, Poly b) {
    trim(a);
    trim(b);
    while (degree(b) >= 0) {
        poly_mod_inplace(gf, a, b);
        std::swap(a, b);
    }
    // Normalize monic.
    int da = degree(a);
    if (da >= 0) {
        uint32_t inv = gf.inv(a[size_t(da)]);
        for (auto& c : a) c = gf.mul(c, inv);
    }
    return a;
}

// q = a / b, exact division.
Poly poly_divexact(const Gf2k& gf, Poly a, const Poly& b) {
    int db = degree(b);
    int da = degree(a);
    Poly q(size_t(std::max(0, da - db) + 1), 0);
    uint32_t lead_inv = gf.inv(b[size_t(db)]);
    for (int i = da; i >= db; i = degree(a)) {
        uint32_t c = gf.mul(a[size_t(i)], lead_inv);
        int shift = i - db;
        q[size_t(shift)] = c;
        for (int j = 0; j <= db; ++j)
            a[size_t(j + shift)] ^= gf.mul(c, b[size_t(j)]);
    }
    trim(q);
    return q;
}

// p^2 mod d. In characteristic 2 squaring maps z^i -> z^(2i) with squared
// coefficients.
Poly poly_sqr_mod(const Gf2k& gf, const Poly& p, const Poly& d) {
    Poly s(2 * p.size(), 0);
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i]) s[2 * i] = gf.sqr(p[i]);
    poly_mod_inplace(gf, s, d);
    return s;
}

// Tr(beta * z) mod sigma = sum_{i=0}^{k-1} (beta z)^(2^i) mod sigma.
Poly trace_poly_mod(const Gf2k& gf, uint32_t beta, const Poly& sigma) {
    Poly term = {0, beta}; // beta * z
    poly_mod_inplace(gf, term, sigma);
    Poly acc = term;
    acc.resize(sigma.size(), 0);
    for (int i = 1; i < gf.k(); ++i) {
        term = poly_sqr_mod(gf, term, sigma);
        if (term.size() < acc.size()) term.resize(acc.size(), 0);
        else if (acc.size() < term.size()) acc.resize(term.size(), 0);
        for (std::size_t j = 0; j < term.size(); ++j) acc[j] ^= term[j];
    }
    trim(acc);
    return acc;
}

// Splits a monic squarefree product of linear factors into its roots via
// gcds with trace polynomials over the polynomial basis. Returns false if
// the input fails to split completely (not a product of distinct linear
// factors over this field).
bool trace_split_roots(const Gf2k& gf, Poly sigma, int basis_from,
                       std::vector<uint32_t>& roots) {
    int deg = degree(sigma);
    if (deg <= 0) return deg == 0;
    if (deg == 1) {
        // c0 + c1 z = 0 -> z = c0 / c1
        roots.push_back(gf.mul(sigma[0], gf.inv(sigma[1])));
        return true;
    }
    for (int i = basis_from; i < gf.k(); ++i) {
        uint32_t beta = i == 0 ? 1u : (uint32_t(1) << i);
        Poly t = trace_poly_mod(gf, beta, sigma);
        if (degree(t) < 0) continue;
        Poly g = poly_gcd(gf, sigma, t);
        int dg = degree(g);
        if (dg <= 0 || dg >= deg) continue;
        Poly rest = poly_divexact(gf, sigma, g);
        return trace_split_roots(gf, std::move(g), i + 1, roots) &&
               trace_split_roots(gf, std::move(rest), i + 1, roots);
    }
    return false;
}

// Berlekamp-Massey over GF(2^k); synd is 1-based conceptually (synd[0] =
// S_1). Returns the connection polynomial sigma (sigma[0] == 1) or nullopt
// once the LFSR length exceeds `bound`.
std::optional<Poly> berlekamp_massey(const Gf2k& gf,
                                     const std::vector<uint32_t>& synd,
                                     uint32_t bound) {
    const std::size_t n = synd.size();
    Poly C = {1}, B = {1};
    uint32_t b = 1;
    int L = 0, m = 1;
    for (std::size_t i = 0; i < n; ++i) {
        uint32_t delta = synd[i];
        for (int j = 1; j <= L && size_t(j) < C.size(); ++j)
            if (C[size_t(j)] && synd[i - size_t(j)])
                delta ^= gf.mul(C[size_t(j)], synd[i - size_t(j)]);
        if (delta == 0) {
            ++m;
        } else if (2 * L <= int(i)) {
            Poly T = C;
            uint32_t coef = gf.mul(delta, gf.inv(b));
            if (C.size() < B.size() + size_t(m)) C.resize(B.size() + size_t(m), 0);
            for (std::size_t j = 0; j < B.size(); ++j)
                C[j + size_t(m)] ^= gf.mul(coef, B[j]);
            L = int(i) + 1 - L;
            if (uint32_t(L) > bound) return std::nullopt;
            B = std::move(T);
            b = delta;
            m = 1;
        } else {
            uint32_t coef = gf.mul(delta, gf.inv(b));
            if (C.size() < B.size() + size_t(m)) C.resize(B.size() + size_t(m), 0);
            for (std::size_t j = 0; j < B.size(); ++j)
                C[j + size_t(m)] ^= gf.mul(coef, B[j]);
            ++m;
        }
    }
    trim(C);
    if (degree(C) != L) return std::nullopt; // sigma_L vanished: inconsistent
    return C;
}

constexpr uint64_t kChienMaxSpace = 4096;

uint64_t cache_key_mix(uint64_t a, uint64_t b) {
    uint64_t z = (a + 0x9e3779b97f4a7c15ull) ^ (b * 0xff51afd7ed558ccdull);
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
    return z ^ (z >> 33);
}

} // namespace

BccCode BccCode::construct(uint64_t M, uint32_t a, std::size_t max_codeword_bits) {
    if (M == 0) throw std::invalid_argument("BccCode: M must be positive");
    if (a == 0) throw std::invalid_argument("BccCode: a must be positive");
    int k = 1;
    while (((uint64_t(1) << k) - 1) < M) {
        ++k;
        if (k > 30) throw std::invalid_argument("BccCode: value space too large");
    }
    // k = ceil(log2(M + 1)) so that 2^k - 1 >= M.
    BccCode code;
    code.M_ = M;
    code.a_ = a;
    code.k_ = k;
    code.m_ = std::size_t(a) * std::size_t(k);
    if (code.m_ > max_codeword_bits)
        throw std::invalid_argument("BccCode: codeword exceeds configured size cap");
    code.gf_ = &Gf2k::get(k);
    code.id_ = g_next_code_id.fetch_add(1);
    return code;
}

BitVector BccCode::encode(uint64_t x) const {
    if (x >= M_) throw std::out_of_range("BccCode::encode: value out of range");
    const Gf2k& gf = *gf_;
    BitVector cw(m_);
    uint32_t beta = gf.exp(x);       // alpha^x, never zero
    uint32_t beta2 = gf.sqr(beta);
    uint32_t cur = beta;             // beta^(2j-1)
    for (uint32_t j = 0; j < a_; ++j) {
        cw.set_bits(std::size_t(j) * k_, unsigned(k_), cur);
        cur = gf.mul(cur, beta2);
    }
    return cw;
}

DecodeResult BccCode::decode(const BitVector& received) const {
    if (received.size() != m_)
        throw std::invalid_argument("BccCode::decode: width mismatch");
    const Gf2k& gf = *gf_;

    // Limb j holds the power sum p_(2j+1) over the XORed codewords' field
    // elements. Even-index power sums follow from Frobenius: p_2i = p_i^2.
    std::vector<uint32_t> synd(2 * std::size_t(a_), 0);
    bool all_zero = true;
    for (uint32_t j = 0; j < a_; ++j) {
        uint32_t s = uint32_t(received.get_bits(std::size_t(j) * k_, unsigned(k_)));
        synd[2 * std::size_t(j)] = s; // S_(2j+1) at index 2j (0-based S_1)
        if (s) all_zero = false;
    }
    if (all_zero) return ValueSet{};
    for (std::size_t i = 2; i <= 2 * std::size_t(a_); i += 2)
        synd[i - 1] = gf.sqr(synd[i / 2 - 1]);

    auto sigma_opt = berlekamp_massey(gf, synd, a_);
    if (!sigma_opt) return std::nullopt;
    Poly& sigma = *sigma_opt;
    int L = degree(sigma);
    if (L <= 0) return std::nullopt; // nonzero syndrome with empty locator

    // Roots of sigma are the inverses alpha^-x of the sent elements.
    ValueSet values;
    values.reserve(size_t(L));
    if (M_ <= kChienMaxSpace) {
        // Chien search over the M valid positions.
        std::vector<uint32_t> reg(size_t(L) + 1), step(size_t(L) + 1);
        uint32_t alpha_inv = gf.inv(gf.generator());
        uint32_t p = 1;
        for (int j = 0; j <= L; ++j) {
            reg[size_t(j)] = sigma[size_t(j)];
            step[size_t(j)] = p; // alpha^-j
            p = gf.mul(p, alpha_inv);
        }
        for (uint64_t x = 0; x < M_; ++x) {
            uint32_t acc = 0;
            for (int j = 0; j <= L; ++j) acc ^= reg[size_t(j)];
            if (acc == 0) values.push_back(x);
            for (int j = 1; j <= L; ++j) reg[size_t(j)] = gf.mul(reg[size_t(j)], step[size_t(j)]);
        }
        if (int(values.size()) != L) return std::nullopt;
    } else {
        // sigma must be a squarefree product of linear factors: compare with
        // gcd(sigma, z^(2^k) - z) before splitting.
        Poly w = {0, 1};
        for (int i = 0; i < gf.k(); ++i) w = poly_sqr_mod(gf, w, sigma);
        if (w.size() < 2) w.resize(2, 0);
        w[1] ^= 1; // w - z
        Poly g = poly_gcd(gf, sigma, w);
        if (degree(g) != L) return std::nullopt;
        std::vector<uint32_t> roots;
        roots.reserve(size_t(L));
        if (!trace_split_roots(gf, sigma, 0, roots)) return std::nullopt;
        if (int(roots.size()) != L) return std::nullopt;
        for (uint32_t r : roots) {
            if (r == 0) return std::nullopt;
            uint64_t x = (uint64_t(gf.order()) - gf.dlog(r)) % gf.order();
            if (x >= M_) return std::nullopt;
            values.push_back(x);
        }
        std::sort(values.begin(), values.end());
        if (std::adjacent_find(values.begin(), values.end()) != values.end())
            return std::nullopt;
    }
    return values;
}

DecodeResult BccCode::decode_bruteforce(const BitVector& received, uint32_t bound,
                                        uint64_t enum_cap) const {
    if (received.size() != m_)
        throw std::invalid_argument("BccCode::decode_bruteforce: width mismatch");
    // Guard: sum_{i<=bound} C(M, i) must stay under the cap.
    long double total = 0, term = 1;
    for (uint32_t i = 1; i <= bound; ++i) {
        term = term * (long double)(M_ >= i - 1 ? M_ - (i - 1) : 0) / i;
        total += term;
        if (total > (long double)enum_cap)
            throw std::invalid_argument("BccCode::decode_bruteforce: search space over cap");
    }

    if (received.is_zero()) return ValueSet{};

    std::vector<BitVector> cw;
    cw.reserve(size_t(M_));
    for (uint64_t x = 0; x < M_; ++x) cw.push_back(encode(x));

    ValueSet stack;
    ValueSet found;
    bool any = false, ambiguous = false;

    // DFS over increasing values, XOR-accumulating.
    auto rec = [&](auto&& self, uint64_t from, BitVector acc, uint32_t left) -> void {
        if (ambiguous) return;
        if (acc == received) {
            if (any && stack != found) { ambiguous = true; return; }
            found = stack;
            any = true;
        }
        if (left == 0) return;
        for (uint64_t x = from; x < M_; ++x) {
            BitVector nxt = acc;
            nxt.xor_inplace(cw[size_t(x)]);
            stack.push_back(x);
            self(self, x + 1, std::move(nxt), left - 1);
            stack.pop_back();
            if (ambiguous) return;
        }
    };
    rec(rec, 0, BitVector(m_), bound);

    if (!any || ambiguous) return std::nullopt;
    return found;
}

const DecodeResult* DecodeCache::lookup(const BccCode& code, const BitVector& block) const {
    uint64_t key = cache_key_mix(code.code_id(), block.hash());
    auto it = map_.find(key);
    if (it == map_.end()) return nullptr;
    for (const Slot& s : it->second)
        if (s.block == block) return &s.result;
    return nullptr;
}

void DecodeCache::insert(const BccCode& code, const BitVector& block, DecodeResult result) {
    if (entries_ >= cap_) return;
    uint64_t key = cache_key_mix(code.code_id(), block.hash());
    map_[key].push_back(Slot{block, std::move(result)});
    ++entries_;
}

DecodeResult DecodeCache::decode(const BccCode& code, const BitVector& block) {
    if (const DecodeResult* hit = lookup(code, block)) return *hit;
    DecodeResult r = code.decode(block);
    insert(code, block, r);
    return r;
}

} // namespace addnet
