#include "addnet/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace addnet {

namespace {

constexpr uint64_t kTagHalfDuplex = 0x68616c66; // subround coin stream

uint64_t mix_into(uint64_t h, uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

const char* kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::Listen: return "listen";
        case ActionKind::Transmit: return "transmit";
        case ActionKind::TransmitAndListen: return "transmit+listen";
    }
    return "?";
}

} // namespace

std::vector<std::optional<BitVector>> channel_step(
    const Topology& topo, const std::vector<RoundAction>& actions,
    std::size_t frame_bits, Duplex mode) {
    const int n = topo.n();
    if (int(actions.size()) != n)
        throw std::invalid_argument("channel_step: one action per node required");
    for (const RoundAction& a : actions) {
        if (a.kind == ActionKind::Listen) continue;
        if (a.kind == ActionKind::TransmitAndListen && mode == Duplex::Half)
            throw std::invalid_argument("channel_step: transmit+listen illegal in half-duplex");
        if (a.frame.size() != frame_bits)
            throw std::invalid_argument("channel_step: frame width mismatch");
    }
    std::vector<std::optional<BitVector>> received(size_t(n));
    for (int v = 0; v < n; ++v) {
        const ActionKind k = actions[size_t(v)].kind;
        const bool listens = (k == ActionKind::Listen) ||
                             (k == ActionKind::TransmitAndListen && mode == Duplex::Full);
        if (!listens) continue;
        BitVector acc(frame_bits);
        for (int u : topo.neighbors(v)) {
            const RoundAction& ua = actions[size_t(u)];
            if (ua.kind != ActionKind::Listen) acc.xor_inplace(ua.frame);
        }
        received[size_t(v)] = std::move(acc);
    }
    return received;
}

uint32_t half_duplex_subrounds(double beta, int n) {
    double lg = std::log2(double(std::max(n, 2)));
    return uint32_t(std::max(1.0, std::ceil(beta * lg)));
}

Transcript run(Protocol& proto, const Topology& topo, const RunConfig& cfg) {
    const int n = topo.n();
    Transcript tr;
    const uint32_t subrounds =
        cfg.duplex == Duplex::Half ? half_duplex_subrounds(cfg.beta, n) : 1;

    auto all_done = [&]() {
        for (int v = 0; v < n; ++v)
            if (!proto.done(v)) return false;
        return true;
    };

    uint64_t round = 0;
    for (; round < cfg.max_rounds; ++round) {
        if (all_done()) {
            tr.all_done = true;
            break;
        }
        proto.on_round_start(round);
        const std::size_t width = proto.frame_bits(round);
        tr.max_frame_bits = std::max(tr.max_frame_bits, width);

        std::vector<RoundAction> actions(size_t(n));
        for (int v = 0; v < n; ++v) {
            actions[size_t(v)] = proto.act(v, round);
            const RoundAction& a = actions[size_t(v)];
            tr.hash = mix_into(tr.hash, uint64_t(a.kind));
            if (a.kind != ActionKind::Listen) {
                tr.hash = mix_into(tr.hash, a.frame.hash());
                ++tr.transmissions;
            }
            if (cfg.trace) {
                nlohmann::json rec{{"round", round},
                                   {"node", v},
                                   {"action", kind_name(a.kind)}};
                if (a.kind != ActionKind::Listen) rec["frame"] = a.frame.to_hex();
                cfg.trace(rec);
            }
        }

        std::vector<std::vector<BitVector>> inbox(size_t(n));
        if (cfg.duplex == Duplex::Full) {
            auto rx = channel_step(topo, actions, width, Duplex::Full);
            ++tr.channel_rounds;
            for (int v = 0; v < n; ++v)
                if (rx[size_t(v)]) inbox[size_t(v)].push_back(std::move(*rx[size_t(v)]));
        } else {
            for (uint32_t s = 0; s < subrounds; ++s) {
                std::vector<RoundAction> sub(size_t(n));
                for (int v = 0; v < n; ++v) {
                    const RoundAction& a = actions[size_t(v)];
                    if (a.kind == ActionKind::Listen) {
                        sub[size_t(v)] = RoundAction::listen();
                    } else {
                        // Pending transmission: transmit or listen with equal
                        // probability each subround.
                        Rng coin = Rng::at(cfg.seed, uint64_t(v),
                                           round * subrounds + s, kTagHalfDuplex);
                        sub[size_t(v)] = coin.coin()
                                             ? RoundAction::transmit(a.frame)
                                             : RoundAction::listen();
                    }
                }
                auto rx = channel_step(topo, sub, width, Duplex::Half);
                ++tr.channel_rounds;
                for (int v = 0; v < n; ++v)
                    if (rx[size_t(v)]) inbox[size_t(v)].push_back(std::move(*rx[size_t(v)]));
            }
        }

        for (int v = 0; v < n; ++v) {
            for (const BitVector& f : inbox[size_t(v)])
                tr.hash = mix_into(tr.hash, f.hash());
            proto.receive(v, round,
                          std::span<const BitVector>(inbox[size_t(v)].data(),
                                                     inbox[size_t(v)].size()));
            if (cfg.trace && !inbox[size_t(v)].empty()) {
                nlohmann::json frames = nlohmann::json::array();
                for (const BitVector& f : inbox[size_t(v)]) frames.push_back(f.to_hex());
                cfg.trace({{"round", round}, {"node", v}, {"received", frames}});
            }
        }
        tr.rounds = round + 1;
    }
    if (!tr.all_done && all_done()) tr.all_done = true;

    tr.outputs.reserve(size_t(n));
    for (int v = 0; v < n; ++v) {
        tr.outputs.push_back(proto.output(v));
        tr.hash = mix_into(tr.hash, std::hash<std::string>{}(tr.outputs.back().dump()));
    }
    return tr;
}

BitVector presence_frame(std::size_t lambda, Rng& rng) {
    BitVector f(lambda);
    do {
        std::size_t done = 0;
        while (done < lambda) {
            unsigned chunk = unsigned(std::min<std::size_t>(64, lambda - done));
            f.set_bits(done, chunk, rng.next_u64());
            done += chunk;
        }
    } while (f.is_zero());
    return f;
}

std::vector<uint8_t> presence_detect_round(const Topology& topo,
                                           const std::vector<uint8_t>& participants,
                                           std::size_t lambda, uint64_t seed,
                                           uint64_t round_tag) {
    const int n = topo.n();
    if (int(participants.size()) != n)
        throw std::invalid_argument("presence_detect_round: mask size");
    std::vector<RoundAction> actions(size_t(n));
    for (int v = 0; v < n; ++v) {
        if (participants[size_t(v)]) {
            Rng rng = Rng::at(seed, uint64_t(v), round_tag, 0x70726573);
            actions[size_t(v)] = RoundAction::transmit_and_listen(presence_frame(lambda, rng));
        } else {
            actions[size_t(v)] = RoundAction::listen();
        }
    }
    auto rx = channel_step(topo, actions, lambda, Duplex::Full);
    std::vector<uint8_t> out(size_t(n), 0);
    for (int v = 0; v < n; ++v)
        if (rx[size_t(v)]) out[size_t(v)] = presence_detected(*rx[size_t(v)]) ? 1 : 0;
    return out;
}

} // namespace addnet
