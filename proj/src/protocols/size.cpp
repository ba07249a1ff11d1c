#include "addnet/protocols/size.hpp"

#include <cmath>

namespace addnet {

namespace {
constexpr uint64_t kTagDraw = 0x727761;
constexpr uint64_t kTagConv = 0x636f6e;
} // namespace

SizeEstimator::SizeEstimator(const Topology& topo, TreeView tree, uint64_t N,
                             ProtocolParams params, uint64_t seed)
    : topo_(&topo), tree_(std::move(tree)), seed_(seed) {
    num_blocks_ = std::max<uint32_t>(1, ceil_log2(N));
    const uint32_t a =
        std::max<uint32_t>(4, uint32_t(std::ceil(params.size_a_mult *
                                                 std::log2(double(std::max<uint64_t>(N, 2))))));
    // Base value space reserves the top word as the failure sentinel.
    fail_word_ = topo.max_id() + 1;
    id_code_ = BicCode::make(make_bcc(fail_word_ + 1, a), params.bic_blocks(N));
    down_code_ = BicCode::make(make_bcc(num_blocks_ + 2, params.bound_default(N)),
                               params.bic_blocks(N));

    // Normalized level weights i/2^i over {1..num_blocks}.
    double z = 0;
    for (uint32_t i = 1; i <= num_blocks_; ++i) z += double(i) / std::pow(2.0, i);
    double acc = 0;
    for (uint32_t i = 1; i <= num_blocks_; ++i) {
        acc += double(i) / std::pow(2.0, i) / z;
        level_cdf_.push_back(acc);
    }
    level_cdf_.back() = 1.0;

    nodes_.resize(size_t(topo.n()));
}

void SizeEstimator::reset(const std::vector<uint8_t>& participants, uint64_t pass_tag) {
    pass_tag_ = pass_tag;
    root_final_ = false;
    for (int v = 0; v < topo_->n(); ++v) {
        Node& nd = nodes_[size_t(v)];
        nd.vhat.assign(num_blocks_, {});
        nd.failed.assign(num_blocks_, 0);
        nd.istar.reset();
        nd.participates = participants[size_t(v)] != 0;
        if (nd.participates) {
            Rng rng = Rng::at(seed_, uint64_t(v), pass_tag, kTagDraw);
            double u = double(rng.next_u64() >> 11) * 0x1.0p-53;
            uint32_t r = 1;
            while (r < num_blocks_ && u > level_cdf_[r - 1]) ++r;
            nd.r_hat = r;
            nd.vhat[r - 1].insert(topo_->id(v));
        }
    }
    if (tree_.depth == 0) finalize_root();
}

std::size_t SizeEstimator::frame_bits(uint32_t local_round) const {
    if (local_round < tree_.depth)
        return std::size_t(num_blocks_) * id_code_.total_len;
    return down_code_.total_len;
}

RoundAction SizeEstimator::act(int node, uint32_t local_round) {
    Node& nd = nodes_[size_t(node)];
    const uint32_t level = tree_.level[size_t(node)];
    Rng rng = Rng::at(seed_, uint64_t(node), pass_tag_ + local_round + 1, kTagConv);

    if (local_round < tree_.depth) {
        // Convergecast: level depth - tau0 transmits in local round tau0.
        if (level == 0 || tree_.depth - local_round != level)
            return RoundAction::listen();
        BitVector frame(std::size_t(num_blocks_) * id_code_.total_len);
        for (uint32_t i = 0; i < num_blocks_; ++i) {
            BitVector block(id_code_.total_len);
            if (nd.failed[i]) {
                block = bic_encode(id_code_, fail_word_, rng);
            } else {
                for (uint64_t id : nd.vhat[i])
                    block.xor_inplace(bic_encode(id_code_, id, rng));
            }
            frame.xor_window(std::size_t(i) * id_code_.total_len, block);
        }
        return RoundAction::transmit_and_listen(std::move(frame));
    }

    // Downcast: level dj transmits in local round depth + dj.
    const uint32_t dj = local_round - tree_.depth;
    if (level == dj && nd.istar) {
        BitVector frame(down_code_.total_len);
        frame.xor_inplace(bic_encode(down_code_, *nd.istar + 1, rng));
        return RoundAction::transmit_and_listen(std::move(frame));
    }
    if (level == dj && level == 0 && !nd.istar) {
        // Root with no qualifying index floods the sentinel 0.
        BitVector frame(down_code_.total_len);
        frame.xor_inplace(bic_encode(down_code_, 0, rng));
        return RoundAction::transmit_and_listen(std::move(frame));
    }
    return RoundAction::listen();
}

void SizeEstimator::receive(int node, uint32_t local_round,
                            std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    const uint32_t level = tree_.level[size_t(node)];

    if (local_round < tree_.depth) {
        // Process only the round in which the children level transmits.
        if (level + 1 > tree_.depth || tree_.depth - local_round != level + 1)
            return;
        for (uint32_t i = 0; i < num_blocks_; ++i) {
            if (nd.failed[i]) continue;
            bool fail = false;
            for (const BitVector& f : frames) {
                BitVector block = f.slice(std::size_t(i) * id_code_.total_len,
                                          id_code_.total_len);
                BicDecodeInfo info = bic_decode_full(id_code_, block, &cache_);
                if (info.failed_blocks > 0) fail = true;
                for (uint64_t v : info.values) {
                    if (v == fail_word_) fail = true;
                    else nd.vhat[i].insert(v);
                }
            }
            if (fail) {
                nd.failed[i] = 1;
                nd.vhat[i].clear();
            }
        }
        if (level == 0 && local_round + 1 == tree_.depth) finalize_root();
        return;
    }

    const uint32_t dj = local_round - tree_.depth;
    if (level == dj + 1 && !nd.istar) {
        ValueSet vs;
        for (const BitVector& f : frames) {
            ValueSet s = bic_decode(down_code_, f, &cache_);
            vs.insert(vs.end(), s.begin(), s.end());
        }
        if (!vs.empty()) {
            uint64_t v = *std::max_element(vs.begin(), vs.end());
            if (v >= 1) nd.istar = uint32_t(v - 1);
        }
    }
}

void SizeEstimator::finalize_root() {
    if (root_final_) return;
    root_final_ = true;
    Node& root = nodes_[size_t(tree_.root)];
    for (uint32_t i = num_blocks_; i >= 1; --i) {
        if (!root.failed[i - 1] && root.vhat[i - 1].size() * 4 >= i) {
            root.istar = i;
            break;
        }
    }
}

SizeApprox::SizeApprox(const Topology& topo, uint64_t seed, ProtocolParams params)
    : topo_(topo), seed_(seed), params_(params), leader_(topo, seed, params) {}

void SizeApprox::on_round_start(uint64_t round) {
    if (stage_ == Stage::Leader) {
        bool all = true;
        for (int v = 0; v < topo_.n() && all; ++v) all = leader_.done(v);
        if (!all) return;
        int leader = -1;
        for (int v = 0; v < topo_.n(); ++v) {
            if (leader_.is_leader(v)) {
                if (leader >= 0) {
                    leader_ambiguous_ = true;
                    stage_ = Stage::Aborted;
                    return;
                }
                leader = v;
            }
        }
        if (leader < 0) {
            leader_ambiguous_ = true;
            stage_ = Stage::Aborted;
            return;
        }
        bfs_.emplace(topo_, leader, seed_, params_, /*round_tag=*/1000000);
        stage_ = Stage::Bfs;
        stage_start_ = round;
        return;
    }
    if (stage_ == Stage::Bfs) {
        bool all = true;
        for (int v = 0; v < topo_.n() && all; ++v) all = bfs_->done(v);
        if (!all) return;
        if (!bfs_->tree_complete()) {
            tree_failed_ = true;
            stage_ = Stage::Aborted;
            return;
        }
        TreeView tv;
        tv.root = bfs_->source();
        tv.depth = bfs_->depth();
        tv.level.resize(size_t(topo_.n()));
        for (int v = 0; v < topo_.n(); ++v) tv.level[size_t(v)] = *bfs_->level_of(v);
        est_.emplace(topo_, std::move(tv), std::max<uint64_t>(topo_.max_id(), uint64_t(topo_.n())),
                     params_, seed_);
        est_->reset(std::vector<uint8_t>(size_t(topo_.n()), 1), /*pass_tag=*/2000000);
        stage_ = Stage::Estimate;
        stage_start_ = round;
        if (est_->rounds() == 0) stage_ = Stage::Done;
        return;
    }
    if (stage_ == Stage::Estimate && round - stage_start_ >= est_->rounds())
        stage_ = Stage::Done;
}

std::size_t SizeApprox::frame_bits(uint64_t round) const {
    switch (stage_) {
        case Stage::Leader: return leader_.frame_bits(round);
        case Stage::Bfs: return bfs_->frame_bits(round - stage_start_);
        case Stage::Estimate: return est_->frame_bits(uint32_t(round - stage_start_));
        default: return 8;
    }
}

RoundAction SizeApprox::act(int node, uint64_t round) {
    switch (stage_) {
        case Stage::Leader: return leader_.act(node, round);
        case Stage::Bfs: return bfs_->act(node, round - stage_start_);
        case Stage::Estimate: return est_->act(node, uint32_t(round - stage_start_));
        default: return RoundAction::listen();
    }
}

void SizeApprox::receive(int node, uint64_t round, std::span<const BitVector> frames) {
    switch (stage_) {
        case Stage::Leader: leader_.receive(node, round, frames); break;
        case Stage::Bfs: bfs_->receive(node, round - stage_start_, frames); break;
        case Stage::Estimate: est_->receive(node, uint32_t(round - stage_start_), frames); break;
        default: break;
    }
}

bool SizeApprox::done(int) const {
    return stage_ == Stage::Done || stage_ == Stage::Aborted;
}

uint64_t SizeApprox::estimate_at(int v) const {
    return est_ ? est_->estimate_at(v) : 0;
}

nlohmann::json SizeApprox::output(int node) const {
    nlohmann::json j;
    j["ok"] = stage_ == Stage::Done && est_ && !est_->flagged(node);
    j["n_alg"] = est_ ? est_->estimate_at(node) : 0;
    j["ambiguous_leader"] = leader_ambiguous_;
    j["tree_failed"] = tree_failed_;
    return j;
}

} // namespace addnet
