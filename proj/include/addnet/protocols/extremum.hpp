#pragma once

#include <vector>

#include "addnet/protocols/common.hpp"

namespace addnet {

// Constant-factor extremum in the r-neighborhood: every node transmits the
// BIC codeword of its value's power-of-two bucket, then the extreme bucket
// is relayed r-1 more rounds; 2^bucket is a 2-approximation of the true
// r-neighborhood extremum. radius = 0 reads the node's own bucket without
// communication.
class NeighborhoodExtremum final : public Protocol {
public:
    enum class Mode { Min, Max };

    NeighborhoodExtremum(const Topology& topo, std::vector<uint64_t> values,
                         uint32_t radius, Mode mode, uint64_t seed,
                         ProtocolParams params = {});

    std::string name() const override { return "neighborhood_extremum"; }
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    static uint32_t bucket_of(uint64_t x); // x in [2^(j-1), 2^j] -> j
    uint64_t estimate_at(int v) const { return uint64_t(1) << nodes_[size_t(v)].bucket; }

private:
    struct Node {
        uint32_t bucket = 1;
        bool decode_failed = false;
        bool done = false;
    };

    const Topology& topo_;
    uint64_t seed_;
    uint32_t radius_;
    Mode mode_;
    BicCode code_;
    DecodeCache cache_;
    std::vector<Node> nodes_;
};

} // namespace addnet
