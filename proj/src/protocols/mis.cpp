#include "addnet/protocols/mis.hpp"

#include <algorithm>
#include <cmath>

namespace addnet {

namespace {
constexpr uint64_t kTagMis = 0x6d6973;
constexpr uint64_t kTagMark = 0x6d6b;
constexpr uint64_t kTagPresence = 0x707265;
} // namespace

MisProtocol::MisProtocol(const Topology& topo, uint64_t seed, ProtocolParams params,
                         uint32_t max_phases)
    : topo_(topo), seed_(seed), params_(params) {
    N_ = std::max<uint64_t>(topo.max_id(), uint64_t(topo.n()));
    core_ = DegreeApproxCore(topo.max_id() + 1, N_, params_);
    lambda_ = params_.lambda(uint64_t(topo.n()));
    max_phases_ = max_phases ? max_phases : 8 * std::max<uint32_t>(ceil_log2(N_), 1) + 8;

    // Possible degree estimates: exact counts up to 2K and the power-of-two
    // grid, ranked so that pairs order lexicographically by (delta, id).
    for (uint64_t d = 0; d <= 2 * uint64_t(core_.K()); ++d) delta_ranks_.push_back(d);
    for (uint32_t j = 1; j <= core_.mat_b(); ++j)
        delta_ranks_.push_back(uint64_t(1) << (j - 1));
    std::sort(delta_ranks_.begin(), delta_ranks_.end());
    delta_ranks_.erase(std::unique(delta_ranks_.begin(), delta_ranks_.end()),
                       delta_ranks_.end());

    const uint64_t id_space = topo.max_id() + 1;
    const uint64_t M_alpha = delta_ranks_.size() * id_space + 1;
    const uint32_t a_alpha =
        uint32_t(std::ceil(4.0 * params_.c_deg * std::log2(double(std::max<uint64_t>(N_, 2)))));
    alpha_code_ = make_bcc(M_alpha, a_alpha);

    nodes_.resize(size_t(topo.n()));
}

uint64_t MisProtocol::alpha_value(int v) const {
    const Node& nd = nodes_[size_t(v)];
    uint64_t d = nd.delta_v;
    auto it = std::lower_bound(delta_ranks_.begin(), delta_ranks_.end(), d);
    uint64_t rank = uint64_t(it - delta_ranks_.begin());
    return rank * (topo_.max_id() + 1) + topo_.id(v);
}

std::size_t MisProtocol::frame_bits(uint64_t round) const {
    switch (round % kRoundsPerPhase) {
        case 0: case 2: return core_.round1_bits();
        case 1: case 3: return core_.round2_bits();
        case 4: return alpha_code_->codeword_bits();
        default: return lambda_;
    }
}

RoundAction MisProtocol::act(int node, uint64_t round) {
    Node& nd = nodes_[size_t(node)];
    if (nd.status != Status::Undecided) return RoundAction::listen();
    const uint32_t step = uint32_t(round % kRoundsPerPhase);
    if (step == 0) phases_started_ = uint32_t(round / kRoundsPerPhase) + 1;
    if (round / kRoundsPerPhase >= max_phases_) return RoundAction::listen();

    Rng rng = Rng::at(seed_, uint64_t(node), round, kTagMis);
    switch (step) {
        case 0: // degree approx round 1 over the active set
            return RoundAction::transmit_and_listen(
                core_.round1_frame(topo_.id(node), rng));
        case 1:
            return RoundAction::transmit_and_listen(core_.round2_frame(rng));
        case 2: // degree approx over the marked set
            if (!nd.marked) return RoundAction::listen();
            return RoundAction::transmit_and_listen(
                core_.round1_frame(topo_.id(node), rng));
        case 3:
            if (!nd.marked) return RoundAction::listen();
            return RoundAction::transmit_and_listen(core_.round2_frame(rng));
        case 4: // announcement
            if (!nd.in_sprime) return RoundAction::listen();
            return RoundAction::transmit_and_listen(
                alpha_code_->encode(alpha_value(node)));
        case 5: // verification among provisional winners
        case 6: { // winners announce membership
            if (!nd.m) return RoundAction::listen();
            Rng prng = Rng::at(seed_, uint64_t(node), round, kTagPresence);
            return RoundAction::transmit_and_listen(presence_frame(lambda_, prng));
        }
        default: return RoundAction::listen();
    }
}

void MisProtocol::receive(int node, uint64_t round, std::span<const BitVector> frames) {
    Node& nd = nodes_[size_t(node)];
    if (nd.status != Status::Undecided) return;
    const uint32_t step = uint32_t(round % kRoundsPerPhase);
    const uint32_t phase = uint32_t(round / kRoundsPerPhase);

    auto presence_any = [&]() {
        for (const BitVector& f : frames)
            if (presence_detected(f)) return true;
        return false;
    };

    switch (step) {
        case 0:
            nd.r1 = core_.round1_process(frames, &cache_);
            break;
        case 1: {
            auto r2 = core_.round2_process(frames);
            auto est = core_.combine(nd.r1, r2);
            // A flagged high-degree estimate falls back to the top bucket.
            nd.delta_v = est.flagged && !est.exact
                             ? (uint64_t(1) << (core_.mat_b() - 1))
                             : est.degree;
            if (nd.delta_v == 0) {
                nd.marked = true; // isolated in the active subgraph
            } else {
                Rng rng = Rng::at(seed_, uint64_t(node), round, kTagMark);
                nd.marked = rng.bernoulli(1.0 / (2.0 * params_.c_mark * double(nd.delta_v)));
            }
            break;
        }
        case 2:
            if (!nd.marked) break;
            nd.s1 = core_.round1_process(frames, &cache_);
            break;
        case 3: {
            if (!nd.marked) break;
            auto r2 = core_.round2_process(frames);
            auto est = core_.combine(nd.s1, r2);
            nd.delta_s = est.flagged && !est.exact
                             ? (uint64_t(1) << (core_.mat_b() - 1))
                             : est.degree;
            nd.in_sprime = nd.delta_s <= uint64_t(ceil_log2(N_));
            break;
        }
        case 4: {
            if (!nd.in_sprime) break;
            // Local maximum of (delta, id) among announcing neighbors wins.
            uint64_t own = alpha_value(node);
            bool best = true;
            for (const BitVector& f : frames) {
                DecodeResult r = cache_.decode(*alpha_code_, f);
                if (!r) {
                    best = false; // undecodable announcement round: stand down
                    break;
                }
                for (uint64_t v : *r)
                    if (v > own) { best = false; break; }
                if (!best) break;
            }
            nd.m = best;
            break;
        }
        case 5:
            if (nd.m && presence_any()) nd.m = false; // conflicting winners drop
            break;
        case 6:
            if (nd.m) {
                nd.status = Status::InMis;
                nd.phase_decided = phase + 1;
            } else if (presence_any()) {
                nd.status = Status::Covered;
                nd.phase_decided = phase + 1;
            } else {
                nd.marked = nd.in_sprime = nd.m = false; // next phase
            }
            break;
        default: break;
    }
}

bool MisProtocol::done(int node) const {
    return nodes_[size_t(node)].status != Status::Undecided;
}

nlohmann::json MisProtocol::output(int node) const {
    const Node& nd = nodes_[size_t(node)];
    nlohmann::json j;
    j["status"] = nd.status == Status::InMis      ? "in_mis"
                  : nd.status == Status::Covered ? "covered"
                                                 : "undecided";
    j["phase"] = nd.phase_decided;
    return j;
}

} // namespace addnet
