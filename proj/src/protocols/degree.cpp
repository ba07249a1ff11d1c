#include "addnet/protocols/degree.hpp"

namespace addnet {

namespace {
constexpr uint64_t kTagDeg = 0x646567;
} // namespace

DegreeApproxCore::DegreeApproxCore(uint64_t id_space, uint64_t N,
                                   const ProtocolParams& params) {
    K_ = params.deg_K(N);
    mat_a_ = params.deg_a(N);
    mat_b_ = params.deg_b(N);
    threshold_ = params.deg_threshold;
    const uint32_t blocks = params.bic_blocks(N);
    id_code_ = BicCode::make(make_bcc(id_space, 2 * K_), blocks);
    ov_code_ = BicCode::make(make_bcc(id_space, 2 * K_), blocks);
    round1_ = MessageLayout({{"id", id_code_.total_len}, {"ov", ov_code_.total_len}});
}

BitVector DegreeApproxCore::round1_frame(uint64_t id, Rng& rng) const {
    BitVector frame = round1_.blank();
    round1_.pack(frame, 0, bic_encode(id_code_, id, rng));
    round1_.pack(frame, 1, bic_encode(ov_code_, id, rng));
    return frame;
}

DegreeApproxCore::Round1 DegreeApproxCore::round1_process(
    std::span<const BitVector> frames, DecodeCache* cache) const {
    Round1 out;
    for (const BitVector& f : frames) {
        OverflowVerdict v = overflow_detect(ov_code_, round1_.unpack(f, 1), K_, cache);
        if (v.detected) {
            out.detected = true;
            out.ids.clear();
            return out;
        }
        ValueSet merged;
        std::set_union(out.ids.begin(), out.ids.end(), v.values.begin(),
                       v.values.end(), std::back_inserter(merged));
        out.ids = std::move(merged);
    }
    // Second sample of the same ids; union only (never detection).
    ValueSet ids2 = decode_union(id_code_, round1_, 0, frames, cache);
    ValueSet merged;
    std::set_union(out.ids.begin(), out.ids.end(), ids2.begin(), ids2.end(),
                   std::back_inserter(merged));
    out.ids = std::move(merged);
    return out;
}

BitVector DegreeApproxCore::round2_frame(Rng& rng) const {
    BitVector frame(round2_bits());
    for (uint32_t i = 0; i < mat_a_; ++i) {
        uint32_t r = std::min(rng.geometric_level(), mat_b_);
        // x_{i,j} = 1 iff j < r, j in 1..b.
        for (uint32_t j = 1; j < r; ++j)
            frame.set(std::size_t(i) * mat_b_ + (j - 1), true);
    }
    return frame;
}

DegreeApproxCore::Round2 DegreeApproxCore::round2_process(
    std::span<const BitVector> frames) const {
    Round2 out;
    BitVector y(round2_bits());
    for (const BitVector& f : frames) y.xor_inplace(f);
    out.sums.assign(mat_b_, 0);
    for (uint32_t i = 0; i < mat_a_; ++i)
        for (uint32_t j = 0; j < mat_b_; ++j)
            if (y.get(std::size_t(i) * mat_b_ + j)) ++out.sums[j];
    const double cut = threshold_ * mat_a_;
    for (uint32_t j = 1; j <= mat_b_; ++j) {
        if (double(out.sums[j - 1]) <= cut) {
            out.jstar = j;
            out.flagged = false;
            out.estimate = j >= 1 ? (uint64_t(1) << (j - 1)) : 0;
            break;
        }
    }
    return out;
}

DegreeApproxCore::Estimate DegreeApproxCore::combine(const Round1& r1,
                                                     const Round2& r2) const {
    Estimate e;
    if (!r1.detected) {
        e.exact = true;
        e.degree = r1.ids.size();
        e.neighbor_ids = r1.ids;
        return e;
    }
    e.exact = false;
    e.flagged = r2.flagged;
    e.degree = r2.estimate;
    return e;
}

DegreeApprox::DegreeApprox(const Topology& topo, uint64_t N, uint64_t seed,
                           ProtocolParams params)
    : topo_(topo), seed_(seed), core_(topo.max_id() + 1, N, params) {
    nodes_.resize(size_t(topo.n()));
}

std::size_t DegreeApprox::frame_bits(uint64_t round) const {
    return round == 0 ? core_.round1_bits() : core_.round2_bits();
}

RoundAction DegreeApprox::act(int node, uint64_t round) {
    Rng rng = Rng::at(seed_, uint64_t(node), round, kTagDeg);
    if (round == 0)
        return RoundAction::transmit_and_listen(core_.round1_frame(topo_.id(node), rng));
    return RoundAction::transmit_and_listen(core_.round2_frame(rng));
}

void DegreeApprox::receive(int node, uint64_t round, std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    if (round == 0) {
        nd.r1 = core_.round1_process(frames, &cache_);
    } else {
        nd.r2 = core_.round2_process(frames);
        nd.done = true;
    }
}

bool DegreeApprox::done(int node) const { return nodes_[size_t(node)].done; }

nlohmann::json DegreeApprox::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    auto est = core_.combine(nd.r1, nd.r2);
    nlohmann::json j;
    j["degree"] = est.degree;
    j["exact"] = est.exact;
    j["flagged"] = est.flagged;
    if (!est.exact) j["jstar"] = nd.r2.jstar;
    return j;
}

} // namespace addnet
