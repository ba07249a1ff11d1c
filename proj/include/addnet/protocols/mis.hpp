#pragma once

#include <vector>

#include "addnet/protocols/degree.hpp"

namespace addnet {

// Luby-style MIS on the additive channel. Each phase: estimate degrees
// inside the remaining graph, self-mark isolated nodes and mark the rest
// with probability 1/(2*c_mark*delta); estimate marked degrees and filter
// out nodes with too many marked neighbors; announce (degree, id) pairs with
// a plain BCC code and keep local maxima; drop conflicting winners via a
// presence round; a final presence round from the winners removes them and
// their neighbors from the active set.
class MisProtocol final : public Protocol {
public:
    enum class Status { Undecided, InMis, Covered };

    MisProtocol(const Topology& topo, uint64_t seed, ProtocolParams params = {},
                uint32_t max_phases = 0);

    std::string name() const override { return "mis"; }
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    Status status(int v) const { return nodes_[size_t(v)].status; }
    uint32_t phases_started() const { return phases_started_; }

    static constexpr uint32_t kRoundsPerPhase = 7;

private:
    struct Node {
        Status status = Status::Undecided;
        uint32_t phase_decided = 0;
        // Per-phase scratch:
        DegreeApproxCore::Round1 r1;
        uint64_t delta_v = 0;
        bool marked = false;
        DegreeApproxCore::Round1 s1;
        uint64_t delta_s = 0;
        bool in_sprime = false;
        bool m = false;
    };

    bool active(int v) const { return nodes_[size_t(v)].status == Status::Undecided; }
    uint64_t alpha_value(int v) const;

    const Topology& topo_;
    uint64_t seed_;
    ProtocolParams params_;
    uint64_t N_;
    uint32_t max_phases_;

    DegreeApproxCore core_;
    std::vector<uint64_t> delta_ranks_; // sorted possible delta values
    std::shared_ptr<const BccCode> alpha_code_;
    uint32_t lambda_ = 16;

    DecodeCache cache_;
    std::vector<Node> nodes_;
    uint32_t phases_started_ = 0;
};

} // namespace addnet
