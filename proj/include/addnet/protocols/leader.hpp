#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "addnet/protocols/common.hpp"
#include "addnet/protocols/sl.hpp"

namespace addnet {

// Two-round leader election for single-hop (clique) networks: round 0 all
// nodes transmit the BIC codeword of their level, round 1 the top-level
// nodes transmit their tag; the leader is the lexicographic maximum (r, z).
class SingleHopLeader final : public Protocol {
public:
    SingleHopLeader(const Topology& topo, uint64_t seed, ProtocolParams params = {});

    std::string name() const override { return "leader_single_hop"; }
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    const SlDraw& draw(int v) const { return nodes_[size_t(v)].draw; }

private:
    struct Node {
        SlDraw draw;
        uint32_t r_star = 0;
        std::optional<uint64_t> z_star;
        bool z_known = false;
        bool done = false;
    };

    const Topology& topo_;
    uint64_t seed_;
    ProtocolParams params_;
    BicCode r_code_, z_code_;
    MessageLayout round0_, round1_;
    DecodeCache cache_;
    std::vector<Node> nodes_;
};

// LeaderElection for general networks (the staged protocol): two bootstrap
// rounds, then stages of four rounds propagating the maximum (r, z), the
// distance d to the current local maximum and the maximum observed distance.
// A node terminates when its (r, z, maxd) snapshot is unchanged over three
// consecutive stages. The terminal maxd is the leader's eccentricity, a
// 2-approximation of the diameter.
class LeaderElection final : public Protocol {
public:
    LeaderElection(const Topology& topo, uint64_t seed, ProtocolParams params = {});

    std::string name() const override { return "leader_general"; }
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    const SlDraw& draw(int v) const { return nodes_[size_t(v)].draw; }
    bool is_leader(int v) const;
    // Diameter 2-approximation from a finished run: the agreed maxd.
    std::optional<uint32_t> diameter_estimate() const;
    uint32_t max_stage() const { return max_stage_; }

private:
    struct Snapshot {
        uint32_t r = 0;
        uint64_t z = 0; // 0 while unknown
        uint32_t maxd = UINT32_MAX;
        bool operator==(const Snapshot&) const = default;
    };
    struct Node {
        SlDraw draw;
        uint32_t r_cur = 0;
        std::optional<uint64_t> z_cur;
        std::optional<uint32_t> d, maxd;
        uint32_t r_prime = 0; // max r received in the last (t,0) round
        std::deque<Snapshot> hist;
        bool terminated = false;
        uint32_t stage_terminated = 0;
    };

    RoundAction make_frame(const Node& nd, int phase, uint64_t round);
    void stage_end(Node& nd, uint32_t stage);

    const Topology& topo_;
    uint64_t seed_;
    ProtocolParams params_;
    BicCode r_code_, z_code_, dist_code_;
    MessageLayout layout_; // [r][z][dist]; dist carries d in (t,2), maxd in (t,3)
    DecodeCache cache_;
    std::vector<Node> nodes_;
    uint32_t max_stage_ = 0;
};

} // namespace addnet
