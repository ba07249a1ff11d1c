#pragma once

#include <optional>
#include <vector>

#include "addnet/protocols/common.hpp"

namespace addnet {

// Two-round degree estimation. Round 1 carries two independent BIC
// instances of the sender's id over a bound-2K base: the second field drives
// information-overflow detection with threshold K, and when nothing is
// detected the union of both decodes is the exact neighbor set. Round 2 is
// the raw a*b bit matrix whose per-column XOR parities locate the degree on
// a power-of-two grid.
class DegreeApproxCore {
public:
    DegreeApproxCore() = default;
    DegreeApproxCore(uint64_t id_space, uint64_t N, const ProtocolParams& params);

    std::size_t round1_bits() const { return round1_.total_bits(); }
    std::size_t round2_bits() const { return std::size_t(mat_a_) * mat_b_; }
    uint32_t K() const { return K_; }
    uint32_t mat_a() const { return mat_a_; }
    uint32_t mat_b() const { return mat_b_; }

    BitVector round1_frame(uint64_t id, Rng& rng) const;
    BitVector round2_frame(Rng& rng) const;

    struct Round1 {
        bool detected = false;
        ValueSet ids; // exact neighbor ids, valid when !detected
    };
    Round1 round1_process(std::span<const BitVector> frames, DecodeCache* cache) const;

    struct Round2 {
        uint32_t jstar = 0; // 0 = no qualifying column (flagged)
        bool flagged = true;
        uint64_t estimate = 0; // 2^(jstar-1), or 0 when flagged
        std::vector<uint32_t> sums;
    };
    Round2 round2_process(std::span<const BitVector> frames) const;

    struct Estimate {
        uint64_t degree = 0;
        bool exact = false;
        bool flagged = false;
        ValueSet neighbor_ids; // populated on the exact path
    };
    Estimate combine(const Round1& r1, const Round2& r2) const;

private:
    uint32_t K_ = 0;
    uint32_t mat_a_ = 0, mat_b_ = 0;
    double threshold_ = 0.2;
    BicCode id_code_, ov_code_;
    MessageLayout round1_;
};

// Standalone protocol: every node estimates its own degree in two rounds.
class DegreeApprox final : public Protocol {
public:
    DegreeApprox(const Topology& topo, uint64_t N, uint64_t seed,
                 ProtocolParams params = {});

    std::string name() const override { return "degree_approx"; }
    std::size_t frame_bits(uint64_t round) const override;
    RoundAction act(int node, uint64_t round) override;
    void receive(int node, uint64_t round, std::span<const BitVector> frames) override;
    bool done(int node) const override;
    nlohmann::json output(int node) const override;

    const DegreeApproxCore& core() const { return core_; }

private:
    struct Node {
        DegreeApproxCore::Round1 r1;
        DegreeApproxCore::Round2 r2;
        bool done = false;
    };

    const Topology& topo_;
    uint64_t seed_;
    DegreeApproxCore core_;
    DecodeCache cache_;
    std::vector<Node> nodes_;
};

} // namespace addnet
