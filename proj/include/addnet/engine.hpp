#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "addnet/bitvec.hpp"
#include "addnet/rng.hpp"
#include "addnet/topology.hpp"

namespace addnet {

enum class ActionKind { Listen, Transmit, TransmitAndListen };

struct RoundAction {
    ActionKind kind = ActionKind::Listen;
    BitVector frame; // meaningful for the transmit kinds

    static RoundAction listen() { return {}; }
    static RoundAction transmit(BitVector f) {
        return {ActionKind::Transmit, std::move(f)};
    }
    static RoundAction transmit_and_listen(BitVector f) {
        return {ActionKind::TransmitAndListen, std::move(f)};
    }
};

enum class Duplex { Full, Half };

// One synchronous channel round: every listener receives the XOR of the
// frames of its transmitting neighbors (its own transmission excluded;
// silence and cancelled collisions are both all-zero). Returns one entry per
// node: nullopt when the node did not listen this round.
std::vector<std::optional<BitVector>> channel_step(
    const Topology& topo, const std::vector<RoundAction>& actions,
    std::size_t frame_bits, Duplex mode);

// Node state-machine interface. One Protocol instance drives all node states
// of a single run; the engine feeds it rounds.
class Protocol {
public:
    virtual ~Protocol() = default;
    virtual std::string name() const = 0;
    // Invoked once per round before any act(); composite protocols advance
    // their stage machinery here.
    virtual void on_round_start(uint64_t) {}
    // Frame width for a round; all nodes agree on the round structure.
    virtual std::size_t frame_bits(uint64_t round) const = 0;
    virtual RoundAction act(int node, uint64_t round) = 0;
    // All frames the node heard this round (several under half-duplex
    // simulation; the protocol decodes each and unions the information).
    virtual void receive(int node, uint64_t round, std::span<const BitVector> frames) = 0;
    virtual bool done(int node) const = 0;
    virtual nlohmann::json output(int node) const = 0;
};

struct RunConfig {
    uint64_t seed = 1;
    Duplex duplex = Duplex::Full;
    uint64_t max_rounds = 100000; // protocol rounds
    double beta = 8.0;            // half-duplex subrounds per round = ceil(beta*log2 n)
    // Optional JSONL trace sink, one record per event.
    std::function<void(const nlohmann::json&)> trace;
};

struct Transcript {
    uint64_t rounds = 0;         // protocol rounds executed
    uint64_t channel_rounds = 0; // physical rounds (includes subrounds)
    std::size_t max_frame_bits = 0;
    uint64_t transmissions = 0;
    bool all_done = false; // false means the round budget ran out first
    uint64_t hash = 0;     // rolling digest of every action and delivery
    std::vector<nlohmann::json> outputs;
};

Transcript run(Protocol& proto, const Topology& topo, const RunConfig& cfg);

uint32_t half_duplex_subrounds(double beta, int n);

// Presence-detection primitive: participants transmit uniformly random
// nonzero lambda-bit strings; a listener reports true iff the received field
// is nonzero. False positives are impossible; false negatives need a full
// cancellation.
BitVector presence_frame(std::size_t lambda, Rng& rng);
inline bool presence_detected(const BitVector& field) { return !field.is_zero(); }

// One standalone presence round over a topology (full duplex): returns for
// each node whether it detected any participating neighbor.
std::vector<uint8_t> presence_detect_round(const Topology& topo,
                                           const std::vector<uint8_t>& participants,
                                           std::size_t lambda, uint64_t seed,
                                           uint64_t round_tag = 0);

} // namespace addnet
