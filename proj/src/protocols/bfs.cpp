#include "addnet/protocols/bfs.hpp"

namespace addnet {

namespace {
constexpr uint64_t kTagSl = 0x62667353;
constexpr uint64_t kTagMask = 0x626673;
} // namespace

BfsProtocol::BfsProtocol(const Topology& topo, int source, uint64_t seed,
                         ProtocolParams params, uint64_t round_tag)
    : topo_(topo), source_(source), seed_(seed), round_tag_(round_tag),
      params_(params) {
    if (source < 0 || source >= topo.n())
        throw std::invalid_argument("BfsProtocol: source out of range");
    const uint64_t n = uint64_t(topo.n());
    const uint32_t a = params_.bound_default(n);
    const uint32_t blocks = params_.bic_blocks(n);

    level_code_ = BicCode::make(make_bcc(n + 2, a), blocks);
    term_code_ = BicCode::make(make_bcc(n + 2, a), blocks);
    phase1_ = MessageLayout({{"mylevel", level_code_.total_len},
                             {"maxlevel", level_code_.total_len},
                             {"term", term_code_.total_len}});

    id_code_ = make_bcc(topo.max_id() + 1, a);
    parent_blocks_ = std::max<uint32_t>(2, 2 * ceil_log2(n));
    phase2_bits_ = std::size_t(parent_blocks_) * id_code_->codeword_bits();

    nodes_.resize(size_t(topo.n()));
    for (int v = 0; v < topo.n(); ++v) {
        Rng rng = Rng::at(seed, uint64_t(v), round_tag_, kTagSl);
        SlDraw d = sl_draw(rng, 64, params_.z_bits_cap);
        nodes_[size_t(v)].sl_block = std::min<uint32_t>(d.r, parent_blocks_);
    }
    nodes_[size_t(source)].level = 0;
    nodes_[size_t(source)].dstar = 0;
}

std::size_t BfsProtocol::frame_bits(uint64_t round) const {
    return in_phase2(round) ? phase2_bits_ : phase1_.total_bits();
}

RoundAction BfsProtocol::act(int node, uint64_t round) {
    Node& nd = nodes_[size_t(node)];
    if (nd.done) return RoundAction::listen();
    Rng rng = Rng::at(seed_, uint64_t(node), round_tag_ + round, kTagMask);

    if (in_phase2(round)) {
        const uint32_t p = uint32_t(round - *phase2_start_);
        if (nd.level && *nd.level % 3 == p) {
            BitVector frame(phase2_bits_);
            BitVector cw = id_code_->encode(topo_.id(node));
            frame.xor_window(std::size_t(nd.sl_block - 1) * id_code_->codeword_bits(), cw);
            return RoundAction::transmit_and_listen(std::move(frame));
        }
        return RoundAction::listen();
    }

    const uint32_t stage = uint32_t(round / 2);
    const bool mylevel_round = (round % 2 == 0);
    BitVector frame = phase1_.blank();
    bool sends = false;

    if (nd.term_round) {
        // One relay round after receipt, then silence until phase 2.
        if (round == *nd.term_round + 1 && nd.term_value) {
            phase1_.pack(frame, 2, bic_encode(term_code_, *nd.term_value, rng));
            sends = true;
        }
        return sends ? RoundAction::transmit_and_listen(std::move(frame))
                     : RoundAction::listen();
    }

    if (mylevel_round) {
        if (nd.level && *nd.level == stage) {
            phase1_.pack(frame, 0, bic_encode(level_code_, *nd.level, rng));
            sends = true;
        }
    } else {
        phase1_.pack(frame, 1, bic_encode(level_code_, nd.dstar, rng));
        sends = true;
    }
    return sends ? RoundAction::transmit_and_listen(std::move(frame))
                 : RoundAction::listen();
}

void BfsProtocol::receive(int node, uint64_t round, std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    if (nd.done) return;

    if (in_phase2(round)) {
        const uint32_t p = uint32_t(round - *phase2_start_);
        if (nd.level && *nd.level >= 1 && (*nd.level - 1) % 3 == p) {
            // Scan from the highest block down; the first legally decodable
            // nonempty block of any heard frame supplies the parent id.
            for (int b = int(parent_blocks_) - 1; b >= 0 && !nd.parent_id; --b) {
                for (const BitVector& f : frames) {
                    BitVector block = f.slice(std::size_t(b) * id_code_->codeword_bits(),
                                              id_code_->codeword_bits());
                    if (block.is_zero()) continue;
                    DecodeResult r = cache_.decode(*id_code_, block);
                    if (r && !r->empty()) {
                        nd.parent_id = (*r)[0];
                        break;
                    }
                }
            }
            if (!nd.parent_id) nd.fail = true;
        }
        if (p == 2) nd.done = true;
        return;
    }

    const uint32_t stage = uint32_t(round / 2);
    const bool mylevel_round = (round % 2 == 0);

    if (mylevel_round) {
        ValueSet ls = decode_union(level_code_, phase1_, 0, frames, &cache_);
        if (!nd.level && !ls.empty()) {
            nd.level = uint32_t(*vmin(ls)) + 1;
            nd.dstar = std::max(nd.dstar, *nd.level);
        }
    } else {
        ValueSet ms = decode_union(level_code_, phase1_, 1, frames, &cache_);
        if (auto m = vmax(ms)) nd.dstar = std::max<uint32_t>(nd.dstar, uint32_t(*m));
        if (node == source_ && !phase2_start_) {
            if (nd.dstar > root_prev_dstar_) {
                root_prev_dstar_ = nd.dstar;
                last_increase_stage_ = stage;
            } else if (stage - last_increase_stage_ >= 2) {
                // Initiate termination: D_s is the stabilized max level. The
                // waiting rule synchronizes phase 2 globally.
                depth_ = nd.dstar;
                nd.term_round = round;
                nd.term_value = depth_;
                phase2_start_ = round + 1 + depth_;
            }
        }
    }

    if (!nd.term_round) {
        ValueSet ts = decode_union(term_code_, phase1_, 2, frames, &cache_);
        if (!ts.empty()) {
            nd.term_round = round;
            nd.term_value = uint32_t(*vmax(ts));
        }
    }
}

bool BfsProtocol::done(int node) const { return nodes_[size_t(node)].done; }

std::optional<int> BfsProtocol::parent_of(int v) const {
    const Node& nd = nodes_[size_t(v)];
    if (!nd.parent_id) return std::nullopt;
    return topo_.node_of_id(*nd.parent_id);
}

bool BfsProtocol::tree_complete() const {
    for (int v = 0; v < topo_.n(); ++v) {
        const Node& nd = nodes_[size_t(v)];
        if (!nd.done || !nd.level) return false;
        if (v != source_ && !nd.parent_id) return false;
    }
    return true;
}

nlohmann::json BfsProtocol::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    nlohmann::json j;
    if (nd.level) j["level"] = *nd.level;
    if (nd.parent_id) j["parent_id"] = *nd.parent_id;
    j["dstar"] = nd.dstar;
    j["failed"] = nd.fail;
    j["is_source"] = (node == source_);
    return j;
}

} // namespace addnet
