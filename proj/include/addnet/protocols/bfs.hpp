#pragma once

#include <optional>
#include <vector>

#include "addnet/protocols/common.hpp"
#include "addnet/protocols/sl.hpp"

namespace addnet {

// BFS tree construction from a designated source. Phase 1 alternates
// MYLEVEL rounds (the current frontier announces its level) with MAXLEVEL
// rounds (everyone relays the deepest level seen); the root floods a
// termination notice carrying the depth once MAXLEVEL stops growing, and a
// level-t node waits depth-t rounds so that all nodes enter phase 2
// together. Phase 2 is three rounds in which level t transmits in round
// t mod 3; each node writes its BCC-encoded id into the block indexed by its
// select-level draw, and a child adopts any id from the last decodable
// nonempty block of its parents' combined frame.
class BfsProtocol final : public Protocol {
public:
    BfsProtocol(const Topology& topo, int source, uint64_t seed,
                ProtocolParams params = {}, uint64_t round_tag = 0);

    std::string name() const override { return "bfs"; }
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    // Tree accessors for composite protocols (valid once the run finished).
    std::optional<uint32_t> level_of(int v) const { return nodes_[size_t(v)].level; }
    std::optional<int> parent_of(int v) const;
    uint32_t depth() const { return depth_; }         // D_s from the notice
    bool tree_complete() const;                       // every non-root has a parent
    int source() const { return source_; }

private:
    struct Node {
        std::optional<uint32_t> level;
        uint32_t dstar = 0;
        uint32_t sl_block = 1;
        std::optional<uint64_t> term_round; // round the notice arrived
        std::optional<uint32_t> term_value; // D_s carried by the notice
        std::optional<uint64_t> parent_id;
        bool fail = false;
        bool done = false;
    };

    bool in_phase2(uint64_t round) const {
        return phase2_start_ && round >= *phase2_start_;
    }

    const Topology& topo_;
    int source_;
    uint64_t seed_;
    uint64_t round_tag_; // offsets the rng round coordinate inside composites
    ProtocolParams params_;

    BicCode level_code_, term_code_;
    std::shared_ptr<const BccCode> id_code_;
    MessageLayout phase1_;
    uint32_t parent_blocks_ = 0;
    std::size_t phase2_bits_ = 0;

    DecodeCache cache_;
    std::vector<Node> nodes_;

    // Root bookkeeping and the global phase switch (identical at every node
    // by the waiting rule, so the protocol object may hold it).
    uint32_t last_increase_stage_ = 0;
    uint32_t root_prev_dstar_ = 0;
    std::optional<uint64_t> phase2_start_;
    uint32_t depth_ = 0;
};

} // namespace addnet
