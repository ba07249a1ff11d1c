#pragma once

#include <optional>
#include <set>
#include <vector>

#include "addnet/protocols/bfs.hpp"
#include "addnet/protocols/leader.hpp"

namespace addnet {

struct TreeView {
    int root = 0;
    uint32_t depth = 0;                // D_s
    std::vector<uint32_t> level;       // per node
};

// One estimation pass over a prebuilt BFS tree: participants draw a level
// r_hat with normalized weights i/2^i, their ids convergecast leaf-to-root
// in per-level blocks (failed blocks flood a FAIL word), the root picks the
// last index i with a decodable block holding at least i/4 ids and downcasts
// n_alg = 2^i.
class SizeEstimator {
public:
    SizeEstimator() = default;
    SizeEstimator(const Topology& topo, TreeView tree, uint64_t N,
                  ProtocolParams params, uint64_t seed);

    // Fresh draws for a new pass (participants only).
    void reset(const std::vector<uint8_t>& participants, uint64_t pass_tag);

    uint32_t rounds() const { return 2 * tree_.depth; }
    std::size_t frame_bits(uint32_t local_round) const;
    RoundAction act(int node, uint32_t local_round);
    void receive(int node, uint32_t local_round, std::span<const BitVector> frames);
    // Root-side finish for depth-0 trees and after the conv rounds.
    void finalize_root();

    bool flagged(int v) const { return !nodes_[size_t(v)].istar.has_value(); }
    std::optional<uint32_t> istar_at(int v) const { return nodes_[size_t(v)].istar; }
    uint64_t estimate_at(int v) const {
        auto i = nodes_[size_t(v)].istar;
        return i ? (uint64_t(1) << *i) : 0;
    }

private:
    struct Node {
        uint32_t r_hat = 1;
        std::vector<std::set<uint64_t>> vhat; // ids per block (1-based index-1)
        std::vector<uint8_t> failed;          // FB(v)
        std::optional<uint32_t> istar;        // set by the downcast
        bool participates = false;
    };

    const Topology* topo_ = nullptr;
    TreeView tree_;
    uint64_t seed_ = 0;
    uint64_t pass_tag_ = 0;
    uint32_t num_blocks_ = 0; // log2 N estimation blocks
    uint64_t fail_word_ = 0;
    BicCode id_code_;
    BicCode down_code_;
    std::vector<double> level_cdf_;
    DecodeCache cache_;
    std::vector<Node> nodes_;
    bool root_final_ = false;
};

// Full network-size approximation: leader election, BFS from the leader,
// then one SizeEstimator pass with everyone participating.
class SizeApprox final : public Protocol {
public:
    SizeApprox(const Topology& topo, uint64_t seed, ProtocolParams params = {});

    std::string name() const override { return "size_approx"; }
    void on_round_start(uint64_t round) override;
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    uint64_t estimate_at(int v) const;

private:
    enum class Stage { Leader, Bfs, Estimate, Done, Aborted };

    const Topology& topo_;
    uint64_t seed_;
    ProtocolParams params_;

    Stage stage_ = Stage::Leader;
    uint64_t stage_start_ = 0;
    LeaderElection leader_;
    std::optional<BfsProtocol> bfs_;
    std::optional<SizeEstimator> est_;
    bool leader_ambiguous_ = false;
    bool tree_failed_ = false;
};

} // namespace addnet
