#pragma once

#include <optional>
#include <vector>

#include "addnet/protocols/degree.hpp"
#include "addnet/protocols/size.hpp"

namespace addnet {

// Single-hop tournament for the exact maximum. Inputs get the node id
// appended as low-order tie-break bits, so all competing values are
// distinct. Each phase estimates the number of active nodes (degree
// approximation over the active clique plus one) and lets each active node
// transmit its BCC codeword with probability ~ 4c*log^2(n)/n_t; hearing a
// larger value deactivates a node. A final all-active round closes the
// tournament.
class MaxSingleHop final : public Protocol {
public:
    MaxSingleHop(const Topology& topo, std::vector<uint64_t> inputs, uint64_t seed,
                 ProtocolParams params = {});

    std::string name() const override { return "max_single_hop"; }
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    uint32_t tau() const { return tau_; }
    uint32_t phases_used() const { return tau_ + 1; } // tau rounds + final
    uint64_t result_at(int v) const { return nodes_[size_t(v)].max_seen >> suffix_bits_; }

    static constexpr uint32_t kRoundsPerPhase = 3;

private:
    struct Node {
        uint64_t xval = 0;
        bool active = true;
        uint64_t max_seen = 0;
        uint64_t n_t = 1;
        bool transmitted = false;
        bool decode_failed = false;
        bool done = false;
        DegreeApproxCore::Round1 r1;
    };

    uint64_t candidate_round_of(uint64_t round) const;

    const Topology& topo_;
    uint64_t seed_;
    ProtocolParams params_;
    uint32_t tau_ = 1;
    uint32_t suffix_bits_ = 0;
    double p_coef_ = 1.0;

    DegreeApproxCore deg_core_;
    std::shared_ptr<const BccCode> cand_code_;
    DecodeCache cache_;
    std::vector<Node> nodes_;
};

// Multi-hop variant: a leader and BFS tree are built first; each phase runs
// a restricted size estimation over the active set, a local BIC candidate
// round, a max-aggregating convergecast to the root and a downcast of the
// phase maximum that deactivates everyone below it.
class MaxMultiHop final : public Protocol {
public:
    MaxMultiHop(const Topology& topo, std::vector<uint64_t> inputs, uint64_t seed,
                ProtocolParams params = {});

    std::string name() const override { return "max_multi_hop"; }
    void on_round_start(uint64_t round) override;
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    uint32_t tau() const { return tau_; }
    uint64_t result_at(int v) const { return nodes_[size_t(v)].max_seen >> suffix_bits_; }

private:
    enum class Stage { Leader, Bfs, Phase, Done, Aborted };
    enum class Sub { Size, Candidate, Upcast, Downcast };

    struct Node {
        uint64_t xval = 0;
        bool active = true;
        uint64_t max_seen = 0;
        std::optional<uint64_t> best; // per-phase aggregation value
        bool transmitted = false;
        bool done = false;
    };

    Sub sub_of(uint64_t local, uint32_t& idx) const;
    uint32_t phase_rounds() const { return 2 * depth_ + 1 + 2 * depth_; }

    const Topology& topo_;
    uint64_t seed_;
    ProtocolParams params_;
    uint32_t tau_ = 1;
    uint32_t suffix_bits_ = 0;

    Stage stage_ = Stage::Leader;
    uint64_t stage_start_ = 0;
    uint32_t phase_ = 0;
    uint32_t depth_ = 0;
    LeaderElection leader_;
    std::optional<BfsProtocol> bfs_;
    std::optional<SizeEstimator> size_;
    TreeView tree_;
    BicCode cand_code_;
    DecodeCache cache_;
    std::vector<Node> nodes_;
    bool aborted_ = false;
};

} // namespace addnet
