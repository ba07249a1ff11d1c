#pragma once

#include <map>
#include <string>
#include <vector>

#include "addnet/engine.hpp"
#include "addnet/harness/oracle.hpp"
#include "addnet/protocols/params.hpp"

namespace addnet {

// One protocol execution with oracle validation; shared by the CLI and the
// sweep driver.
struct RunRequest {
    std::string protocol; // leader_single|leader_general|bfs|mis|degree|size|
                          // max_single|max_multi|extremum
    uint64_t seed = 1;
    ProtocolParams params;
    Duplex duplex = Duplex::Full;
    uint64_t max_rounds = 0; // 0 = per-protocol default
    double beta = 8.0;
    int source = 0;          // bfs root
    uint32_t radius = 2;     // extremum
    std::string mode = "max";
    std::function<void(const nlohmann::json&)> trace;
};

struct RunOutcome {
    Transcript transcript;
    ValidityReport report;
    nlohmann::json meta; // protocol-specific metrics
    std::vector<uint64_t> inputs;
};

RunOutcome run_protocol(const Topology& topo, const RunRequest& req);

struct ExperimentSpec {
    std::string protocol;
    std::string family = "path";
    int n = 16;
    double p = 0.1;
    uint32_t trials = 10;
    uint64_t seed = 1;
    std::map<std::string, double> overrides;
    std::string duplex = "full";
    uint64_t max_rounds = 0;

    nlohmann::json to_json() const;
    static ExperimentSpec from_json(const nlohmann::json& j);
};

struct TrialStats {
    uint32_t trial = 0;
    uint64_t seed = 0;
    bool success = false;
    uint64_t rounds = 0;
    uint64_t channel_rounds = 0;
    std::size_t max_frame_bits = 0;
    std::string metric_name;
    double metric = 0;
    std::string note;
};

struct SweepResult {
    std::vector<TrialStats> trials;
    std::string csv;
    nlohmann::json summary;
};

SweepResult run_sweep(const ExperimentSpec& spec);

// Extremum oracle over the r-ball of v.
uint64_t oracle_ball_extremum(const Topology& topo, const std::vector<uint64_t>& values,
                              uint32_t radius, bool want_max, int v);

} // namespace addnet
