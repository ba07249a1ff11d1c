#include "addnet/protocols/maxcomp.hpp"

#include <cmath>

namespace addnet {

namespace {
constexpr uint64_t kTagCand = 0x636e64;
constexpr uint64_t kTagProb = 0x707262;

// Candidate decoding with the transmitter's own codeword folded back in:
// values are globally distinct, so XORing the node's own contribution into
// the received frame and deleting its value afterwards recovers exactly the
// heard set while letting every node share one decode of the round's total.
std::optional<ValueSet> decode_candidates(const BccCode& code, const BitVector& received,
                                          const BitVector* own_cw, uint64_t own_val,
                                          DecodeCache& cache) {
    if (!own_cw) {
        if (received.is_zero()) return ValueSet{};
        return cache.decode(code, received);
    }
    BitVector total = received;
    total.xor_inplace(*own_cw);
    if (total.is_zero()) return ValueSet{};
    DecodeResult r = cache.decode(code, total);
    if (!r) return std::nullopt;
    ValueSet out;
    out.reserve(r->size());
    for (uint64_t v : *r)
        if (v != own_val) out.push_back(v);
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// Single hop

MaxSingleHop::MaxSingleHop(const Topology& topo, std::vector<uint64_t> inputs,
                           uint64_t seed, ProtocolParams params)
    : topo_(topo), seed_(seed), params_(params) {
    const uint64_t n = uint64_t(topo.n());
    for (int v = 0; v < topo.n(); ++v)
        if (topo.degree(v) != topo.n() - 1)
            throw std::invalid_argument("MaxSingleHop: topology is not a clique");
    if (inputs.size() != size_t(topo.n()))
        throw std::invalid_argument("MaxSingleHop: one input per node");
    for (uint64_t x : inputs)
        if (x < 1 || x > n * n)
            throw std::invalid_argument("MaxSingleHop: inputs must lie in [1, n^2]");

    tau_ = params_.tau(n);
    suffix_bits_ = std::max<uint32_t>(1, ceil_log2(topo.max_id()));
    const double lg = std::log2(double(std::max<uint64_t>(n, 2)));
    p_coef_ = 4.0 * params_.c_tau * lg * lg;
    const uint32_t a_big =
        uint32_t(std::ceil(32.0 * params_.c_tau * lg * lg));
    const uint64_t M = (n * n) * (uint64_t(1) << suffix_bits_) + topo.max_id() + 1;
    cand_code_ = make_bcc(M, a_big);
    deg_core_ = DegreeApproxCore(topo.max_id() + 1, n, params_);

    nodes_.resize(size_t(topo.n()));
    for (int v = 0; v < topo.n(); ++v) {
        Node& nd = nodes_[size_t(v)];
        nd.xval = (inputs[size_t(v)] << suffix_bits_) | (topo.id(v) - 1);
        nd.max_seen = nd.xval;
    }
}

std::size_t MaxSingleHop::frame_bits(uint64_t round) const {
    if (round >= uint64_t(tau_) * kRoundsPerPhase) return cand_code_->codeword_bits();
    switch (round % kRoundsPerPhase) {
        case 0: return deg_core_.round1_bits();
        case 1: return deg_core_.round2_bits();
        default: return cand_code_->codeword_bits();
    }
}

RoundAction MaxSingleHop::act(int node, uint64_t round) {
    Node& nd = nodes_[size_t(node)];
    if (nd.done) return RoundAction::listen();
    Rng rng = Rng::at(seed_, uint64_t(node), round, kTagCand);
    const bool final_round = round >= uint64_t(tau_) * kRoundsPerPhase;
    const uint32_t step = final_round ? 2 : uint32_t(round % kRoundsPerPhase);

    switch (step) {
        case 0:
            if (!nd.active) return RoundAction::listen();
            return RoundAction::transmit_and_listen(
                deg_core_.round1_frame(topo_.id(node), rng));
        case 1:
            if (!nd.active) return RoundAction::listen();
            return RoundAction::transmit_and_listen(deg_core_.round2_frame(rng));
        default: {
            nd.transmitted = false;
            if (!nd.active) return RoundAction::listen();
            double p = final_round ? 1.0 : std::min(1.0, p_coef_ / double(nd.n_t));
            Rng prob = Rng::at(seed_, uint64_t(node), round, kTagProb);
            if (!prob.bernoulli(p)) return RoundAction::listen();
            nd.transmitted = true;
            return RoundAction::transmit_and_listen(cand_code_->encode(nd.xval));
        }
    }
}

void MaxSingleHop::receive(int node, uint64_t round, std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    if (nd.done) return;
    const bool final_round = round >= uint64_t(tau_) * kRoundsPerPhase;
    const uint32_t step = final_round ? 2 : uint32_t(round % kRoundsPerPhase);

    switch (step) {
        case 0:
            if (nd.active) nd.r1 = deg_core_.round1_process(frames, &cache_);
            break;
        case 1: {
            if (!nd.active) break;
            auto r2 = deg_core_.round2_process(frames);
            auto est = deg_core_.combine(nd.r1, r2);
            uint64_t deg = est.flagged && !est.exact
                               ? (uint64_t(1) << (deg_core_.mat_b() - 1))
                               : est.degree;
            nd.n_t = deg + 1; // active neighbors plus self
            break;
        }
        default: {
            BitVector own;
            const BitVector* own_ptr = nullptr;
            if (nd.transmitted) {
                own = cand_code_->encode(nd.xval);
                own_ptr = &own;
            }
            for (const BitVector& f : frames) {
                auto heard = decode_candidates(*cand_code_, f, own_ptr, nd.xval, cache_);
                if (!heard) {
                    nd.decode_failed = true;
                    continue;
                }
                for (uint64_t v : *heard) {
                    nd.max_seen = std::max(nd.max_seen, v);
                    if (v > nd.xval) nd.active = false;
                }
            }
            if (final_round) nd.done = true;
            break;
        }
    }
}

bool MaxSingleHop::done(int node) const { return nodes_[size_t(node)].done; }

nlohmann::json MaxSingleHop::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    nlohmann::json j;
    j["max"] = nd.max_seen >> suffix_bits_;
    j["active_at_end"] = nd.active;
    j["decode_failed"] = nd.decode_failed;
    j["phases"] = tau_ + 1;
    return j;
}

// ---------------------------------------------------------------------------
// Multi hop

MaxMultiHop::MaxMultiHop(const Topology& topo, std::vector<uint64_t> inputs,
                         uint64_t seed, ProtocolParams params)
    : topo_(topo), seed_(seed), params_(params), leader_(topo, seed, params) {
    const uint64_t n = uint64_t(topo.n());
    if (inputs.size() != size_t(topo.n()))
        throw std::invalid_argument("MaxMultiHop: one input per node");
    for (uint64_t x : inputs)
        if (x < 1 || x > n * n)
            throw std::invalid_argument("MaxMultiHop: inputs must lie in [1, n^2]");
    tau_ = params_.tau(n);
    suffix_bits_ = std::max<uint32_t>(1, ceil_log2(topo.max_id()));
    const uint64_t M = (n * n) * (uint64_t(1) << suffix_bits_) + topo.max_id() + 1;
    const uint32_t a_mh = 2 * params_.bound_default(n);
    cand_code_ = BicCode::make(make_bcc(M, a_mh), params_.bic_blocks(n));

    nodes_.resize(size_t(topo.n()));
    for (int v = 0; v < topo.n(); ++v) {
        Node& nd = nodes_[size_t(v)];
        nd.xval = (inputs[size_t(v)] << suffix_bits_) | (topo.id(v) - 1);
        nd.max_seen = nd.xval;
    }
}

MaxMultiHop::Sub MaxMultiHop::sub_of(uint64_t local, uint32_t& idx) const {
    if (local < 2 * depth_) {
        idx = uint32_t(local);
        return Sub::Size;
    }
    local -= 2 * depth_;
    if (local == 0) {
        idx = 0;
        return Sub::Candidate;
    }
    local -= 1;
    if (local < depth_) {
        idx = uint32_t(local);
        return Sub::Upcast;
    }
    idx = uint32_t(local - depth_);
    return Sub::Downcast;
}

void MaxMultiHop::on_round_start(uint64_t round) {
    if (stage_ == Stage::Leader) {
        for (int v = 0; v < topo_.n(); ++v)
            if (!leader_.done(v)) return;
        int leader = -1;
        for (int v = 0; v < topo_.n(); ++v) {
            if (leader_.is_leader(v)) {
                if (leader >= 0) { stage_ = Stage::Aborted; aborted_ = true; return; }
                leader = v;
            }
        }
        if (leader < 0) { stage_ = Stage::Aborted; aborted_ = true; return; }
        bfs_.emplace(topo_, leader, seed_, params_, /*round_tag=*/1000000);
        stage_ = Stage::Bfs;
        stage_start_ = round;
        return;
    }
    if (stage_ == Stage::Bfs) {
        for (int v = 0; v < topo_.n(); ++v)
            if (!bfs_->done(v)) return;
        if (!bfs_->tree_complete()) { stage_ = Stage::Aborted; aborted_ = true; return; }
        tree_.root = bfs_->source();
        tree_.depth = bfs_->depth();
        tree_.level.resize(size_t(topo_.n()));
        for (int v = 0; v < topo_.n(); ++v) tree_.level[size_t(v)] = *bfs_->level_of(v);
        depth_ = tree_.depth;
        size_.emplace(topo_, tree_, std::max<uint64_t>(topo_.max_id(), uint64_t(topo_.n())),
                      params_, seed_);
        stage_ = Stage::Phase;
        phase_ = 0;
        stage_start_ = round;
        std::vector<uint8_t> part(size_t(topo_.n()), 0);
        for (int v = 0; v < topo_.n(); ++v) part[size_t(v)] = nodes_[size_t(v)].active;
        size_->reset(part, 2000000 + uint64_t(phase_) * 100000);
        return;
    }
    if (stage_ == Stage::Phase) {
        if (round - stage_start_ < phase_rounds()) return;
        // Next phase or done.
        ++phase_;
        stage_start_ = round;
        if (phase_ >= tau_) {
            stage_ = Stage::Done;
            for (auto& nd : nodes_) nd.done = true;
            return;
        }
        std::vector<uint8_t> part(size_t(topo_.n()), 0);
        for (int v = 0; v < topo_.n(); ++v) part[size_t(v)] = nodes_[size_t(v)].active;
        size_->reset(part, 2000000 + uint64_t(phase_) * 100000);
        for (auto& nd : nodes_) nd.best.reset();
    }
}

std::size_t MaxMultiHop::frame_bits(uint64_t round) const {
    switch (stage_) {
        case Stage::Leader: return leader_.frame_bits(round);
        case Stage::Bfs: return bfs_->frame_bits(round - stage_start_);
        case Stage::Phase: {
            uint32_t idx = 0;
            switch (sub_of(round - stage_start_, idx)) {
                case Sub::Size: return size_->frame_bits(idx);
                default: return cand_code_.total_len;
            }
        }
        default: return 8;
    }
}

RoundAction MaxMultiHop::act(int node, uint64_t round) {
    Node& nd = nodes_[size_t(node)];
    switch (stage_) {
        case Stage::Leader: return leader_.act(node, round);
        case Stage::Bfs: return bfs_->act(node, round - stage_start_);
        case Stage::Phase: break;
        default: return RoundAction::listen();
    }
    uint32_t idx = 0;
    Rng rng = Rng::at(seed_, uint64_t(node), round, kTagCand);
    switch (sub_of(round - stage_start_, idx)) {
        case Sub::Size:
            return size_->act(node, idx);
        case Sub::Candidate: {
            nd.transmitted = false;
            if (!nd.active) return RoundAction::listen();
            uint64_t n_t = std::max<uint64_t>(2, size_->estimate_at(node));
            const double lg = std::log2(double(std::max(topo_.n(), 2)));
            double p = std::min(1.0, lg * lg / double(n_t));
            Rng prob = Rng::at(seed_, uint64_t(node), round, kTagProb);
            if (!prob.bernoulli(p)) return RoundAction::listen();
            nd.transmitted = true;
            nd.best = nd.best ? std::max(*nd.best, nd.xval) : nd.xval;
            return RoundAction::transmit_and_listen(bic_encode(cand_code_, nd.xval, rng));
        }
        case Sub::Upcast: {
            const uint32_t level = tree_.level[size_t(node)];
            if (level != 0 && depth_ - idx == level && nd.best)
                return RoundAction::transmit_and_listen(
                    bic_encode(cand_code_, *nd.best, rng));
            return RoundAction::listen();
        }
        case Sub::Downcast: {
            const uint32_t level = tree_.level[size_t(node)];
            if (level == idx && nd.best)
                return RoundAction::transmit_and_listen(
                    bic_encode(cand_code_, *nd.best, rng));
            return RoundAction::listen();
        }
    }
    return RoundAction::listen();
}

void MaxMultiHop::receive(int node, uint64_t round, std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    switch (stage_) {
        case Stage::Leader: leader_.receive(node, round, frames); return;
        case Stage::Bfs: bfs_->receive(node, round - stage_start_, frames); return;
        case Stage::Phase: break;
        default: return;
    }
    uint32_t idx = 0;
    switch (sub_of(round - stage_start_, idx)) {
        case Sub::Size:
            size_->receive(node, idx, frames);
            break;
        case Sub::Candidate: {
            for (const BitVector& f : frames) {
                ValueSet vs = bic_decode(cand_code_, f, &cache_);
                for (uint64_t v : vs) {
                    nd.best = nd.best ? std::max(*nd.best, v) : v;
                    nd.max_seen = std::max(nd.max_seen, v);
                }
            }
            break;
        }
        case Sub::Upcast: {
            const uint32_t level = tree_.level[size_t(node)];
            if (depth_ - idx == level + 1) {
                for (const BitVector& f : frames) {
                    ValueSet vs = bic_decode(cand_code_, f, &cache_);
                    for (uint64_t v : vs) {
                        nd.best = nd.best ? std::max(*nd.best, v) : v;
                        nd.max_seen = std::max(nd.max_seen, v);
                    }
                }
            }
            break;
        }
        case Sub::Downcast: {
            const uint32_t level = tree_.level[size_t(node)];
            if (level == idx + 1) {
                for (const BitVector& f : frames) {
                    ValueSet vs = bic_decode(cand_code_, f, &cache_);
                    for (uint64_t v : vs)
                        nd.best = nd.best ? std::max(*nd.best, v) : v;
                }
            }
            // Phase max arrived (or own best at the root): deactivate below it.
            if (idx + 1 >= depth_ || depth_ == 0) {
                if (nd.best) {
                    nd.max_seen = std::max(nd.max_seen, *nd.best);
                    if (*nd.best > nd.xval) nd.active = false;
                }
            }
            break;
        }
    }
}

bool MaxMultiHop::done(int node) const {
    return stage_ == Stage::Aborted || nodes_[size_t(node)].done;
}

nlohmann::json MaxMultiHop::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    nlohmann::json j;
    j["max"] = nd.max_seen >> suffix_bits_;
    j["active_at_end"] = nd.active;
    j["aborted"] = aborted_;
    j["tau"] = tau_;
    return j;
}

} // namespace addnet
