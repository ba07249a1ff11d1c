#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <span>

#include "addnet/bic.hpp"
#include "addnet/engine.hpp"
#include "addnet/protocols/params.hpp"

namespace addnet {

inline std::shared_ptr<const BccCode> make_bcc(uint64_t M, uint32_t a) {
    return std::make_shared<const BccCode>(BccCode::construct(M, a));
}

// Decodes one BIC field across all frames heard this round (several under
// the half-duplex wrapper) and unions the results.
inline ValueSet decode_union(const BicCode& code, const MessageLayout& lay,
                             std::size_t field, std::span<const BitVector> frames,
                             DecodeCache* cache) {
    ValueSet out;
    for (const BitVector& f : frames) {
        ValueSet vs = bic_decode(code, lay.unpack(f, field), cache);
        ValueSet merged;
        merged.reserve(out.size() + vs.size());
        std::set_union(out.begin(), out.end(), vs.begin(), vs.end(),
                       std::back_inserter(merged));
        out = std::move(merged);
    }
    return out;
}

inline std::optional<uint64_t> vmax(const ValueSet& s) {
    if (s.empty()) return std::nullopt;
    return s.back();
}

inline std::optional<uint64_t> vmin(const ValueSet& s) {
    if (s.empty()) return std::nullopt;
    return s.front();
}

} // namespace addnet
