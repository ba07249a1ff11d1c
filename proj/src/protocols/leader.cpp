#include "addnet/protocols/leader.hpp"

namespace addnet {

namespace {
constexpr uint64_t kTagSl = 0x534c;
constexpr uint64_t kTagMask = 0x6d61;
} // namespace

// ---------------------------------------------------------------------------
// Single hop

SingleHopLeader::SingleHopLeader(const Topology& topo, uint64_t seed,
                                 ProtocolParams params)
    : topo_(topo), seed_(seed), params_(params) {
    const uint64_t n = uint64_t(topo.n());
    // Clique check: every protocol run assumes Gamma(v) = V \ {v}.
    for (int v = 0; v < topo.n(); ++v)
        if (topo.degree(v) != topo.n() - 1)
            throw std::invalid_argument("SingleHopLeader: topology is not a clique");

    const uint32_t r_cap = params_.r_cap(n);
    const uint32_t a = params_.bound_default(n);
    const uint32_t blocks = params_.bic_blocks(n);
    r_code_ = BicCode::make(make_bcc(r_cap + 1, a), blocks);
    z_code_ = BicCode::make(make_bcc(params_.z_space(), a), blocks);
    round0_ = MessageLayout({{"r", r_code_.total_len}});
    round1_ = MessageLayout({{"z", z_code_.total_len}});

    nodes_.resize(size_t(topo.n()));
    for (int v = 0; v < topo.n(); ++v) {
        Rng rng = Rng::at(seed, uint64_t(v), 0, kTagSl);
        Node& nd = nodes_[size_t(v)];
        nd.draw = sl_draw(rng, r_cap, params_.z_bits_cap);
        nd.r_star = nd.draw.r;
    }
}

std::size_t SingleHopLeader::frame_bits(uint64_t round) const {
    return round == 0 ? round0_.total_bits() : round1_.total_bits();
}

RoundAction SingleHopLeader::act(int node, uint64_t round) {
    Node& nd = nodes_[size_t(node)];
    Rng rng = Rng::at(seed_, uint64_t(node), round, kTagMask);
    if (round == 0) {
        BitVector frame = round0_.blank();
        round0_.pack(frame, 0, bic_encode(r_code_, nd.draw.r, rng));
        return RoundAction::transmit_and_listen(std::move(frame));
    }
    if (nd.draw.r == nd.r_star) {
        BitVector frame = round1_.blank();
        round1_.pack(frame, 0, bic_encode(z_code_, nd.draw.z, rng));
        return RoundAction::transmit_and_listen(std::move(frame));
    }
    return RoundAction::listen();
}

void SingleHopLeader::receive(int node, uint64_t round,
                              std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    if (round == 0) {
        ValueSet rs = decode_union(r_code_, round0_, 0, frames, &cache_);
        if (auto m = vmax(rs)) nd.r_star = std::max<uint32_t>(nd.r_star, uint32_t(*m));
        return;
    }
    ValueSet zs = decode_union(z_code_, round1_, 0, frames, &cache_);
    std::optional<uint64_t> best;
    if (nd.draw.r == nd.r_star) best = nd.draw.z;
    if (auto m = vmax(zs)) best = std::max(best.value_or(0), *m);
    nd.z_star = best;
    nd.z_known = best.has_value();
    nd.done = true;
}

bool SingleHopLeader::done(int node) const { return nodes_[size_t(node)].done; }

nlohmann::json SingleHopLeader::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    nlohmann::json j;
    j["r"] = nd.draw.r;
    j["z"] = nd.draw.z;
    j["leader_r"] = nd.r_star;
    if (nd.z_star) j["leader_z"] = *nd.z_star;
    j["decided"] = nd.z_known;
    j["is_leader"] = nd.z_known && nd.draw.r == nd.r_star && nd.draw.z == *nd.z_star;
    return j;
}

// ---------------------------------------------------------------------------
// General networks

LeaderElection::LeaderElection(const Topology& topo, uint64_t seed,
                               ProtocolParams params)
    : topo_(topo), seed_(seed), params_(params) {
    const uint64_t n = uint64_t(topo.n());
    const uint32_t r_cap = params_.r_cap(n);
    const uint32_t a = params_.bound_default(n);
    const uint32_t blocks = params_.bic_blocks(n);
    r_code_ = BicCode::make(make_bcc(r_cap + 1, a), blocks);
    z_code_ = BicCode::make(make_bcc(params_.z_space(), a), blocks);
    dist_code_ = BicCode::make(make_bcc(n + 2, a), blocks);
    layout_ = MessageLayout({{"r", r_code_.total_len},
                             {"z", z_code_.total_len},
                             {"dist", dist_code_.total_len}});

    nodes_.resize(size_t(topo.n()));
    for (int v = 0; v < topo.n(); ++v) {
        Rng rng = Rng::at(seed, uint64_t(v), 0, kTagSl);
        Node& nd = nodes_[size_t(v)];
        nd.draw = sl_draw(rng, r_cap, params_.z_bits_cap);
        nd.r_cur = nd.draw.r;
        nd.z_cur = nd.draw.z;
        nd.d = 0; // believes itself the local maximum until told otherwise
        nd.maxd = 0;
    }
}

std::size_t LeaderElection::frame_bits(uint64_t) const { return layout_.total_bits(); }

RoundAction LeaderElection::make_frame(const Node& nd, int phase, uint64_t round) {
    // phase: 0 -> r only; 1 -> r,z; 2 -> r,z,d; 3 -> r,z,maxd.
    Rng rng = Rng::at(seed_, uint64_t(&nd - nodes_.data()), round, kTagMask);
    BitVector frame = layout_.blank();
    layout_.pack(frame, 0, bic_encode(r_code_, nd.r_cur, rng));
    if (phase >= 1) layout_.pack(frame, 1, bic_encode(z_code_, *nd.z_cur, rng));
    if (phase == 2) layout_.pack(frame, 2, bic_encode(dist_code_, *nd.d, rng));
    if (phase == 3) layout_.pack(frame, 2, bic_encode(dist_code_, *nd.maxd, rng));
    return RoundAction::transmit_and_listen(std::move(frame));
}

RoundAction LeaderElection::act(int node, uint64_t round) {
    Node& nd = nodes_[size_t(node)];
    if (nd.terminated) return RoundAction::listen();

    if (round == 0) return make_frame(nd, 0, round); // bootstrap: everyone sends r

    const int phase = round == 1 ? 1 : int((round - 2) % 4);
    if (phase == 1) {
        // Apply the r-update collected in the preceding r-round; a node that
        // just learned a larger level resets its (z, d, maxd) knowledge and
        // stays silent this round.
        if (nd.r_prime > nd.r_cur) {
            nd.r_cur = nd.r_prime;
            nd.z_cur.reset();
            nd.d.reset();
            nd.maxd.reset();
            return RoundAction::listen();
        }
        if (!nd.z_cur) return RoundAction::listen();
        return make_frame(nd, 1, round);
    }
    if (phase == 0) return make_frame(nd, 0, round);
    if (phase == 2) {
        if (nd.z_cur && nd.d) return make_frame(nd, 2, round);
        return RoundAction::listen();
    }
    // phase == 3
    if (nd.z_cur && nd.maxd) return make_frame(nd, 3, round);
    return RoundAction::listen();
}

void LeaderElection::receive(int node, uint64_t round,
                             std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    const int phase = round == 0 ? 0 : (round == 1 ? 1 : int((round - 2) % 4));
    const uint32_t stage = round < 2 ? 0 : uint32_t((round - 2) / 4 + 1);

    if (nd.terminated) return;

    ValueSet rs = decode_union(r_code_, layout_, 0, frames, &cache_);
    const uint32_t r_heard = uint32_t(vmax(rs).value_or(0));

    switch (phase) {
        case 0:
            nd.r_prime = r_heard;
            break;
        case 1: {
            ValueSet zs = decode_union(z_code_, layout_, 1, frames, &cache_);
            if (!zs.empty() && r_heard == nd.r_cur) {
                uint64_t best = *vmax(zs);
                if (!nd.z_cur || best > *nd.z_cur) {
                    nd.z_cur = best;
                    // Distances referred to the previous local maximum.
                    nd.d.reset();
                    nd.maxd.reset();
                }
            }
            break;
        }
        case 2: {
            ValueSet zs = decode_union(z_code_, layout_, 1, frames, &cache_);
            ValueSet ds = decode_union(dist_code_, layout_, 2, frames, &cache_);
            if (!ds.empty() && nd.z_cur && r_heard == nd.r_cur &&
                vmax(zs).value_or(0) == *nd.z_cur) {
                uint32_t dnew = uint32_t(*vmin(ds)) + 1;
                if (!nd.d || dnew < *nd.d) nd.d = dnew;
                if (!nd.maxd) nd.maxd = *nd.d;
                else if (*nd.maxd < *nd.d) nd.maxd = *nd.d;
            }
            break;
        }
        case 3: {
            ValueSet zs = decode_union(z_code_, layout_, 1, frames, &cache_);
            ValueSet ms = decode_union(dist_code_, layout_, 2, frames, &cache_);
            if (!ms.empty() && nd.z_cur && r_heard == nd.r_cur &&
                vmax(zs).value_or(0) == *nd.z_cur) {
                uint32_t md = uint32_t(*vmax(ms));
                if (nd.maxd && md > *nd.maxd) nd.maxd = md;
            }
            if (stage >= 1) stage_end(nd, stage);
            break;
        }
        default: break;
    }
}

void LeaderElection::stage_end(Node& nd, uint32_t stage) {
    Snapshot snap{nd.r_cur, nd.z_cur.value_or(0), nd.maxd.value_or(UINT32_MAX)};
    nd.hist.push_back(snap);
    if (nd.hist.size() > 3) nd.hist.pop_front();
    max_stage_ = std::max(max_stage_, stage);
    if (nd.hist.size() == 3 && nd.hist[0] == nd.hist[1] && nd.hist[1] == nd.hist[2]) {
        nd.terminated = true;
        nd.stage_terminated = stage;
    }
}

bool LeaderElection::done(int node) const { return nodes_[size_t(node)].terminated; }

bool LeaderElection::is_leader(int v) const {
    const Node& nd = nodes_[size_t(v)];
    return nd.terminated && nd.r_cur == nd.draw.r && nd.z_cur &&
           *nd.z_cur == nd.draw.z;
}

std::optional<uint32_t> LeaderElection::diameter_estimate() const {
    std::optional<uint32_t> est;
    for (int v = 0; v < topo_.n(); ++v) {
        const Node& nd = nodes_[size_t(v)];
        if (!nd.terminated || !nd.maxd) return std::nullopt;
        if (est && *est != *nd.maxd) return std::nullopt; // nodes disagree
        est = *nd.maxd;
    }
    return est;
}

nlohmann::json LeaderElection::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    nlohmann::json j;
    j["r"] = nd.draw.r;
    j["z"] = nd.draw.z;
    j["leader_r"] = nd.r_cur;
    if (nd.z_cur) j["leader_z"] = *nd.z_cur;
    if (nd.d) j["d"] = *nd.d;
    if (nd.maxd) j["maxd"] = *nd.maxd;
    j["terminated"] = nd.terminated;
    j["stage_terminated"] = nd.stage_terminated;
    j["is_leader"] = is_leader(node);
    return j;
}

} // namespace addnet
